#pragma once

#include "sphs/grid.hpp"
#include "sphs/model.hpp"

namespace sphs {

// Bundles the model with a fixed input law; the drift seen by the
// generator includes the control term.
struct GeneratorContext {
  SphsModel model;
  ControlLaw control;
};

// Itô generator applied pointwise:
//   Lf(x) = drift(x)·∇f(x) + ½ Tr[σ(x)σ(x)ᵀ ∇²f(x)].
// Throws ModelError naming the offending term if any intermediate is
// non-finite.
double apply_generator(const GeneratorContext& ctx, const EnergyFunction& f,
                       const Vec& x);

// Formal adjoint on a grid field,
//   L*f(x) = −Σᵢ ∂ᵢ(μᵢ f) + ½ Σᵢⱼ ∂²ᵢⱼ(Σᵢⱼ f),   Σ := σσᵀ,
// discretized with second-order central differences at interior cells and
// one-sided second-order stencils at the boundary. Grids with fewer than 5
// cells on any axis are rejected.
DensityField apply_adjoint(const GeneratorContext& ctx,
                           const DensityField& f_grid);

// The generator itself under the same discretization (central stencils,
// one-sided at the boundary), for grid-level duality checks and the
// symmetric/antisymmetric splitting. Same ≥5 cells per axis requirement.
DensityField apply_generator_grid(const GeneratorContext& ctx,
                                  const DensityField& f_grid);

// Closed-form balance for quadratic energies ½xᵀΛx under state-independent
// R and noise covariance Σ = σσᵀ. The dissipation quadratic form is ΛRΛ,
// the noise constant is Tr[ΛΣ], and violation_radius is the smallest r at
// which the worst direction d (‖d‖=1) reaches r²·dᵀΛRΛd = Tr[ΛΣ]:
//
//   radius = sqrt(Tr[ΛΣ] / λ_min(ΛRΛ)),
//
// 0 when Tr[ΛΣ] = 0 (no noise to beat), +∞ when ΛRΛ has a null direction
// and the constant is positive. A nonzero input u would add a term linear
// in x to the energy balance; the summary reports the zero-input case.
struct QuadraticSummary {
  Mat coefficient;                 // ΛRΛ
  double constant = 0.0;           // Tr[ΛΣ]
  double violation_radius = 0.0;
};

QuadraticSummary quadratic_case_summary(const Mat& Lambda, const Mat& R,
                                        const Mat& Sigma, const Vec& u);

}  // namespace sphs
