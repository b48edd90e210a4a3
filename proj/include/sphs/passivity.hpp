#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "sphs/generator.hpp"

namespace sphs {

// Per-sample record of the classical passivity test: the pointwise
// dissipation/noise balance 2∇HᵀR∇H ≥ Tr[∇²H σσᵀ] and the supply-rate
// inequality Lf ≤ yᵀu evaluated with the model hamiltonian as storage.
struct PassivitySample {
  Vec x, u;
  double dissipation = 0.0;   // 2∇HᵀR∇H
  double noise_load = 0.0;    // Tr[∇²H σσᵀ]
  bool balance_ok = false;    // dissipation ≥ noise_load
  double generator_value = 0.0;  // LH(x) with the given input
  double supply = 0.0;           // y(x)ᵀu
  bool supply_ok = false;        // LH ≤ yᵀu
};

// Sampling-based certificate: the verdict is the conjunction over the
// supplied samples and says nothing about unsampled states.
struct PassivityReport {
  std::vector<PassivitySample> samples;
  bool balance_all = true;
  bool supply_all = true;
  bool pass() const { return balance_all && supply_all; }
};

PassivityReport check_classical_passivity(
    const GeneratorContext& ctx, const std::vector<std::pair<Vec, Vec>>& samples);

// KYP property with the hamiltonian as storage function. The output
// identity gᵀ∇H = y is definitional for this model type; it is still
// computed and reported rather than assumed. The drift condition uses the
// zero-control generator.
struct KypSample {
  Vec x;
  double autonomous_generator = 0.0;  // L₀H(x)
  bool drift_ok = false;              // L₀H ≤ 0
  double output_residual = 0.0;       // ‖gᵀ∇H − y‖_∞
  bool output_ok = false;             // ≤ 1e-12
};

struct KypReport {
  std::vector<KypSample> samples;
  bool drift_all = true;
  bool output_all = true;
  bool pass() const { return drift_all && output_all; }
};

KypReport check_kyp(const SphsModel& model, const std::vector<Vec>& samples);

// Quasi-uniform deterministic sphere sampling with an optional exclusion
// predicate for models with singular sets; excluded points are skipped and
// the skipped fraction is disclosed.
struct ShellOptions {
  int n_samples = 256;
  std::uint64_t seed = 0;
  std::function<bool(const Vec&)> exclude;  // empty = keep everything
};

struct ShellSample {
  double sup = -std::numeric_limits<double>::infinity();
  double skipped_fraction = 0.0;
};

// Max of Lf(x) − y(x)ᵀu(x) over quasi-uniform points on the sphere
// ‖x−x_e‖ = radius. Deterministic for a fixed seed, and independent of
// evaluation order.
double shell_supremum(const GeneratorContext& ctx, const EnergyFunction& f,
                      const Vec& x_e, double radius, int n_samples,
                      std::uint64_t seed);
ShellSample shell_supremum(const GeneratorContext& ctx, const EnergyFunction& f,
                           const Vec& x_e, double radius,
                           const ShellOptions& opts);

enum class ShellVerdict {
  passive_everywhere,
  ultimately_passive,
  strictly_ultimately_passive,
  fails,
};

const char* to_string(ShellVerdict v);

struct ShellReport {
  Vec x_e;
  std::vector<double> radii;
  std::vector<double> raw_sup;         // sup of Lf − yᵀu on the shell
  std::vector<double> normalized_sup;  // raw / radius²
  std::vector<double> skipped_fraction;
  ShellVerdict verdict = ShellVerdict::fails;
  // for the two ultimate verdicts: smallest sampled radius from which the
  // conditions hold at all larger sampled radii
  double C = std::numeric_limits<double>::quiet_NaN();
  // strict verdict only: largest margin valid from C outward,
  // δ_C = min over sampled r ≥ C of −normalized_sup(r)
  double delta_C = std::numeric_limits<double>::quiet_NaN();
  double eps = 0.0;
};

// Shell-by-shell classification per the strict ultimate-passivity
// definition. Strict requires, for every sampled radius r ≥ C, both the
// normalized supremum ≤ −δ_C for some δ_C > 0 and the raw supremum ≤ −eps.
// Plain ultimate passivity only needs raw suprema ≤ 0 from C outward.
// passive_everywhere is reported when every sampled shell (including the
// smallest) has raw supremum ≤ 0.
ShellReport classify_ultimate_passivity(const GeneratorContext& ctx,
                                        const EnergyFunction& f, const Vec& x_e,
                                        const std::vector<double>& radii,
                                        double eps, int n_samples,
                                        std::uint64_t seed);
ShellReport classify_ultimate_passivity(const GeneratorContext& ctx,
                                        const EnergyFunction& f, const Vec& x_e,
                                        const std::vector<double>& radii,
                                        double eps, const ShellOptions& opts);

}  // namespace sphs
