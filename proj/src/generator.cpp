#include "sphs/generator.hpp"

#include <cmath>
#include <sstream>

namespace sphs {

namespace {

std::string fmt_point(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

// Second-order first derivative of a flattened grid field along one axis.
// Central in the interior, one-sided three-point at the two boundary layers.
Vec d1(const Grid& g, const Vec& F, int axis) {
  const long n = g.size();
  const long s = g.stride(axis);
  const int na = g.shape[axis];
  const double h = g.h(axis);
  Vec out(n);
  for (long c = 0; c < n; ++c) {
    const int i = int((c / s) % na);
    if (i == 0) {
      out[c] = (-3.0 * F[c] + 4.0 * F[c + s] - F[c + 2 * s]) / (2.0 * h);
    } else if (i == na - 1) {
      out[c] = (3.0 * F[c] - 4.0 * F[c - s] + F[c - 2 * s]) / (2.0 * h);
    } else {
      out[c] = (F[c + s] - F[c - s]) / (2.0 * h);
    }
  }
  return out;
}

// Second-order pure second derivative along one axis; four-point one-sided
// stencils at the boundary keep the order.
Vec d2(const Grid& g, const Vec& F, int axis) {
  const long n = g.size();
  const long s = g.stride(axis);
  const int na = g.shape[axis];
  const double h2 = g.h(axis) * g.h(axis);
  Vec out(n);
  for (long c = 0; c < n; ++c) {
    const int i = int((c / s) % na);
    if (i == 0) {
      out[c] = (2.0 * F[c] - 5.0 * F[c + s] + 4.0 * F[c + 2 * s] -
                F[c + 3 * s]) / h2;
    } else if (i == na - 1) {
      out[c] = (2.0 * F[c] - 5.0 * F[c - s] + 4.0 * F[c - 2 * s] -
                F[c - 3 * s]) / h2;
    } else {
      out[c] = (F[c + s] - 2.0 * F[c] + F[c - s]) / h2;
    }
  }
  return out;
}

void require_resolution(const Grid& g, const char* who) {
  for (int a = 0; a < g.dim(); ++a)
    if (g.shape[a] < 5) {
      std::ostringstream os;
      os << who << ": grid too coarse, axis " << a << " has " << g.shape[a]
         << " cells (need at least 5)";
      throw ModelError(os.str());
    }
}

struct GridCoefficients {
  std::vector<Vec> mu;          // n fields
  std::vector<std::vector<Vec>> Sig;  // upper triangle, Sig[i][j-i]
};

GridCoefficients eval_coefficients(const GeneratorContext& ctx, const Grid& g) {
  const int n = ctx.model.n;
  const long N = g.size();
  GridCoefficients co;
  co.mu.assign(n, Vec(N));
  co.Sig.resize(n);
  for (int i = 0; i < n; ++i) co.Sig[i].assign(n - i, Vec(N));
  for (long c = 0; c < N; ++c) {
    const Vec x = g.center(c);
    const Vec m = drift(ctx.model, ctx.control, x);
    const Mat s = ctx.model.sigma(x);
    const Mat S = s * s.transpose();
    for (int i = 0; i < n; ++i) {
      co.mu[i][c] = m[i];
      for (int j = i; j < n; ++j) co.Sig[i][j - i][c] = S(i, j);
    }
  }
  return co;
}

}  // namespace

double apply_generator(const GeneratorContext& ctx, const EnergyFunction& f,
                       const Vec& x) {
  const SphsModel& mdl = ctx.model;
  if (f.dim != mdl.n)
    throw ModelError("apply_generator: f dimension does not match model");
  if (!is_finite(x))
    throw ModelError("apply_generator: state is not finite at " + fmt_point(x));

  auto need = [&x](bool ok, const char* term) {
    if (!ok)
      throw ModelError(std::string("apply_generator: non-finite term '") +
                       term + "' at x=" + fmt_point(x));
  };

  const Vec gH = mdl.hamiltonian.gradient(x);
  need(is_finite(gH), "grad H");
  const Mat J = mdl.J(x);
  need(is_finite(J), "J(x)");
  const Mat R = mdl.R(x);
  need(is_finite(R), "R(x)");
  const Mat sig = mdl.sigma(x);
  need(is_finite(sig), "sigma(x)");
  const Vec gf = f.gradient(x);
  need(is_finite(gf), "grad f");
  const Mat hf = f.hessian(x);
  need(is_finite(hf), "hessian f");

  Vec mu = (J - R) * gH;
  if (mdl.m > 0) {
    const Vec u = ctx.control.eval(x, mdl.m);
    need(is_finite(u), "control input u");
    const Mat G = mdl.g(x);
    need(is_finite(G), "g(x)");
    mu += G * u;
  }

  const double drift_term = mu.dot(gf);
  const double noise_term = 0.5 * (sig.transpose() * hf * sig).trace();
  const double val = drift_term + noise_term;
  need(std::isfinite(val), "generator value");
  return val;
}

DensityField apply_adjoint(const GeneratorContext& ctx,
                           const DensityField& f_grid) {
  const Grid& g = f_grid.grid;
  require_resolution(g, "apply_adjoint");
  if (g.dim() != ctx.model.n)
    throw ModelError("apply_adjoint: grid dimension does not match model");

  const int n = ctx.model.n;
  const auto co = eval_coefficients(ctx, g);

  DensityField out = make_density(g);
  for (int i = 0; i < n; ++i) {
    // -d/dx_i (mu_i f)
    out.values -= d1(g, Vec(co.mu[i].cwiseProduct(f_grid.values)), i);
    // +1/2 d2/dx_i2 (Sig_ii f)
    out.values +=
        0.5 * d2(g, Vec(co.Sig[i][0].cwiseProduct(f_grid.values)), i);
    // mixed terms: Sig_ij = Sig_ji collapses the pair to a single
    // full-weight cross derivative
    for (int j = i + 1; j < n; ++j) {
      const Vec q = co.Sig[i][j - i].cwiseProduct(f_grid.values);
      out.values += d1(g, d1(g, q, i), j);
    }
  }
  return out;
}

DensityField apply_generator_grid(const GeneratorContext& ctx,
                                  const DensityField& f_grid) {
  const Grid& g = f_grid.grid;
  require_resolution(g, "apply_generator_grid");
  if (g.dim() != ctx.model.n)
    throw ModelError("apply_generator_grid: grid dimension does not match model");

  const int n = ctx.model.n;
  const auto co = eval_coefficients(ctx, g);

  DensityField out = make_density(g);
  for (int i = 0; i < n; ++i) {
    out.values += co.mu[i].cwiseProduct(d1(g, f_grid.values, i));
    out.values += 0.5 * co.Sig[i][0].cwiseProduct(d2(g, f_grid.values, i));
    for (int j = i + 1; j < n; ++j)
      out.values += co.Sig[i][j - i].cwiseProduct(d1(g, d1(g, f_grid.values, i), j));
  }
  return out;
}

QuadraticSummary quadratic_case_summary(const Mat& Lambda, const Mat& R,
                                        const Mat& Sigma, const Vec& /*u*/) {
  if (inf_norm(Lambda - Lambda.transpose()) > 1e-12)
    throw ModelError("quadratic_case_summary: Lambda is not symmetric");
  if (min_eigenvalue_sym(Lambda) <= 0.0)
    throw ModelError("quadratic_case_summary: Lambda is not positive definite");

  QuadraticSummary s;
  s.coefficient = Lambda * R * Lambda;
  s.constant = (Lambda * Sigma).trace();

  const double lmin = min_eigenvalue_sym(s.coefficient);
  const double null_tol = 1e-14 * std::max(1.0, inf_norm(s.coefficient));
  if (s.constant <= 0.0) {
    s.violation_radius = 0.0;
  } else if (lmin <= null_tol) {
    s.violation_radius = std::numeric_limits<double>::infinity();
  } else {
    s.violation_radius = std::sqrt(s.constant / lmin);
  }
  return s;
}

}  // namespace sphs
