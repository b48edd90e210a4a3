#pragma once

#include <functional>

#include "sphs/common.hpp"

namespace sphs {

// Value/gradient/Hessian triple for an energy-like scalar field. All the
// analysis code consumes these; closed forms are supplied for built-ins and
// the finite-difference oracle below guards their consistency.
struct EnergyFunction {
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

// ½(x−c)ᵀΛ(x−c) with exact derivatives. Λ must be symmetric positive
// definite; throws ModelError otherwise.
EnergyFunction quadratic_hamiltonian(const Mat& Lambda, const Vec& center);

// Central finite differences with per-axis step 1e-5·(1+|x_i|).
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x);
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x);

struct DerivativeCheckResult {
  double gradient_rel_err = 0.0;   // analytic gradient vs FD of value
  double hessian_rel_err = 0.0;    // analytic Hessian vs FD of gradient
  double hessian_asymmetry = 0.0;  // ‖∇²f − (∇²f)ᵀ‖_∞
};

DerivativeCheckResult check_derivatives(const EnergyFunction& f, const Vec& x);

// s1·f + s2·g as a new EnergyFunction (dims must agree).
EnergyFunction scaled_sum(const EnergyFunction& f, double s1,
                          const EnergyFunction& g, double s2);

}  // namespace sphs
