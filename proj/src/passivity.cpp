#include "sphs/passivity.hpp"

#include <algorithm>
#include <cmath>

#include "sphs/philox.hpp"

namespace sphs {

namespace {

// first n primes, for the Kronecker direction lattice
std::vector<int> first_primes(int n) {
  std::vector<int> out;
  for (int cand = 2; int(out.size()) < n; ++cand) {
    bool prime = true;
    for (int p : out) {
      if (p * p > cand) break;
      if (cand % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(cand);
  }
  return out;
}

double frac(double t) { return t - std::floor(t); }

// Deterministic quasi-uniform directions on the unit sphere. The seed only
// moves the lattice shift, so two radii with the same seed sample the same
// directions (which is what makes per-radius suprema comparable).
std::vector<Vec> sphere_directions(int n, int n_samples, std::uint64_t seed) {
  std::vector<Vec> dirs;
  dirs.reserve(n_samples);
  CounterRng shifts(seed, 0);

  if (n == 1) {
    for (int k = 0; k < n_samples; ++k) {
      Vec d(1);
      d[0] = (k % 2 == 0) ? 1.0 : -1.0;
      dirs.push_back(d);
    }
    return dirs;
  }

  if (n == 2) {
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    const double shift = shifts.uniform_pair(0).first;
    for (int k = 0; k < n_samples; ++k) {
      const double th = 2.0 * M_PI * frac(k * golden + shift);
      Vec d(2);
      d << std::cos(th), std::sin(th);
      dirs.push_back(d);
    }
    return dirs;
  }

  // n >= 3: Kronecker sequence u_k[j] = frac(k·√p_j + shift_j) pushed
  // through the normal quantile and normalized.
  const auto primes = first_primes(n);
  std::vector<double> alpha(n), shift(n);
  for (int j = 0; j < n; ++j) {
    alpha[j] = frac(std::sqrt(double(primes[j])));
    auto [u1, u2] = shifts.uniform_pair(std::uint64_t(j));
    shift[j] = u1;
    (void)u2;
  }
  for (int k = 0; k < n_samples; ++k) {
    Vec z(n);
    for (int j = 0; j < n; ++j) {
      double u = frac(k * alpha[j] + shift[j]);
      u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
      z[j] = inverse_normal_cdf(u);
    }
    const double norm = z.norm();
    if (norm < 1e-12) {
      z.setZero();
      z[0] = 1.0;
    } else {
      z /= norm;
    }
    dirs.push_back(z);
  }
  return dirs;
}

// Lf(x) − y(x)ᵀu(x), the quantity all shell statistics bound.
double excess(const GeneratorContext& ctx, const EnergyFunction& f,
              const Vec& x) {
  double v = apply_generator(ctx, f, x);
  if (ctx.model.m > 0) {
    const Vec u = ctx.control.eval(x, ctx.model.m);
    v -= output(ctx.model, x).dot(u);
  }
  return v;
}

}  // namespace

PassivityReport check_classical_passivity(
    const GeneratorContext& ctx,
    const std::vector<std::pair<Vec, Vec>>& samples) {
  if (samples.empty())
    throw ModelError("check_classical_passivity: no samples given");

  const SphsModel& mdl = ctx.model;
  PassivityReport rep;
  rep.samples.reserve(samples.size());
  for (const auto& [x, u] : samples) {
    PassivitySample s;
    s.x = x;
    s.u = u;

    const Vec grad = mdl.hamiltonian.gradient(x);
    const Mat hess = mdl.hamiltonian.hessian(x);
    const Mat sig = mdl.sigma(x);
    s.dissipation = 2.0 * grad.dot(mdl.R(x) * grad);
    s.noise_load = (sig.transpose() * hess * sig).trace();
    s.balance_ok = s.dissipation >= s.noise_load;

    // the generator is evaluated with the sample's own input
    GeneratorContext at_u{mdl, mdl.m > 0 ? ControlLaw::constant(u)
                                         : ControlLaw::none()};
    s.generator_value = apply_generator(at_u, mdl.hamiltonian, x);
    s.supply = mdl.m > 0 ? output(mdl, x).dot(u) : 0.0;
    s.supply_ok = s.generator_value <= s.supply;

    rep.balance_all = rep.balance_all && s.balance_ok;
    rep.supply_all = rep.supply_all && s.supply_ok;
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

KypReport check_kyp(const SphsModel& model, const std::vector<Vec>& samples) {
  if (samples.empty()) throw ModelError("check_kyp: no samples given");

  GeneratorContext autonomous{model, ControlLaw::none()};
  KypReport rep;
  rep.samples.reserve(samples.size());
  for (const Vec& x : samples) {
    KypSample s;
    s.x = x;
    s.autonomous_generator =
        apply_generator(autonomous, model.hamiltonian, x);
    s.drift_ok = s.autonomous_generator <= 0.0;
    const Vec lhs = model.g(x).transpose() * model.hamiltonian.gradient(x);
    const Vec rhs = output(model, x);
    s.output_residual = lhs.size() ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
    s.output_ok = s.output_residual <= 1e-12;

    rep.drift_all = rep.drift_all && s.drift_ok;
    rep.output_all = rep.output_all && s.output_ok;
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

ShellSample shell_supremum(const GeneratorContext& ctx, const EnergyFunction& f,
                           const Vec& x_e, double radius,
                           const ShellOptions& opts) {
  if (radius <= 0.0)
    throw ModelError("shell_supremum: radius must be positive");
  if (opts.n_samples < 64)
    throw ModelError("shell_supremum: need at least 64 samples");

  const auto dirs = sphere_directions(int(x_e.size()), opts.n_samples, opts.seed);
  ShellSample out;
  long skipped = 0;
  for (const Vec& d : dirs) {
    const Vec x = x_e + radius * d;
    if (opts.exclude && opts.exclude(x)) {
      ++skipped;
      continue;
    }
    out.sup = std::max(out.sup, excess(ctx, f, x));
  }
  out.skipped_fraction = double(skipped) / double(opts.n_samples);
  if (skipped == long(dirs.size()))
    throw ModelError("shell_supremum: exclusion predicate removed every sample");
  return out;
}

double shell_supremum(const GeneratorContext& ctx, const EnergyFunction& f,
                      const Vec& x_e, double radius, int n_samples,
                      std::uint64_t seed) {
  ShellOptions opts;
  opts.n_samples = n_samples;
  opts.seed = seed;
  return shell_supremum(ctx, f, x_e, radius, opts).sup;
}

const char* to_string(ShellVerdict v) {
  switch (v) {
    case ShellVerdict::passive_everywhere: return "passive_everywhere";
    case ShellVerdict::ultimately_passive: return "ultimately_passive";
    case ShellVerdict::strictly_ultimately_passive:
      return "strictly_ultimately_passive";
    case ShellVerdict::fails: return "fails";
  }
  return "unknown";
}

ShellReport classify_ultimate_passivity(const GeneratorContext& ctx,
                                        const EnergyFunction& f, const Vec& x_e,
                                        const std::vector<double>& radii,
                                        double eps, const ShellOptions& opts) {
  if (radii.empty())
    throw ModelError("classify_ultimate_passivity: no radii given");
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw ModelError("classify_ultimate_passivity: radii must be increasing");
  if (eps <= 0.0)
    throw ModelError("classify_ultimate_passivity: eps must be positive");

  ShellReport rep;
  rep.x_e = x_e;
  rep.radii = radii;
  rep.eps = eps;
  const int m = int(radii.size());
  rep.raw_sup.resize(m);
  rep.normalized_sup.resize(m);
  rep.skipped_fraction.resize(m);
  for (int i = 0; i < m; ++i) {
    const ShellSample s = shell_supremum(ctx, f, x_e, radii[i], opts);
    rep.raw_sup[i] = s.sup;
    rep.normalized_sup[i] = s.sup / (radii[i] * radii[i]);
    rep.skipped_fraction[i] = s.skipped_fraction;
  }

  const bool everywhere =
      std::all_of(rep.raw_sup.begin(), rep.raw_sup.end(),
                  [](double v) { return v <= 0.0; });
  if (everywhere) {
    rep.verdict = ShellVerdict::passive_everywhere;
    return rep;
  }

  // smallest sampled radius from which every larger shell clears the
  // eps gap; the margin delta_C is then read off the normalized suprema
  for (int c = 0; c < m; ++c) {
    bool tail_ok = true;
    for (int i = c; i < m; ++i) tail_ok = tail_ok && rep.raw_sup[i] <= -eps;
    if (tail_ok) {
      rep.verdict = ShellVerdict::strictly_ultimately_passive;
      rep.C = radii[c];
      double delta = std::numeric_limits<double>::infinity();
      for (int i = c; i < m; ++i)
        delta = std::min(delta, -rep.normalized_sup[i]);
      rep.delta_C = delta;
      return rep;
    }
  }

  for (int c = 0; c < m; ++c) {
    bool tail_ok = true;
    for (int i = c; i < m; ++i) tail_ok = tail_ok && rep.raw_sup[i] <= 0.0;
    if (tail_ok) {
      rep.verdict = ShellVerdict::ultimately_passive;
      rep.C = radii[c];
      return rep;
    }
  }

  rep.verdict = ShellVerdict::fails;
  return rep;
}

ShellReport classify_ultimate_passivity(const GeneratorContext& ctx,
                                        const EnergyFunction& f, const Vec& x_e,
                                        const std::vector<double>& radii,
                                        double eps, int n_samples,
                                        std::uint64_t seed) {
  ShellOptions opts;
  opts.n_samples = n_samples;
  opts.seed = seed;
  return classify_ultimate_passivity(ctx, f, x_e, radii, eps, opts);
}

}  // namespace sphs
