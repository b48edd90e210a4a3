#include "sphs/energy.hpp"

namespace sphs {

EnergyFunction quadratic_hamiltonian(const Mat& Lambda, const Vec& center) {
  const int n = int(center.size());
  if (Lambda.rows() != n || Lambda.cols() != n)
    throw ModelError("quadratic_hamiltonian: Lambda shape does not match center");
  if (inf_norm(Lambda - Lambda.transpose()) > 1e-12)
    throw ModelError("quadratic_hamiltonian: Lambda is not symmetric");
  if (min_eigenvalue_sym(Lambda) <= 0.0)
    throw ModelError("quadratic_hamiltonian: Lambda is not positive definite");

  EnergyFunction f;
  f.dim = n;
  f.value = [Lambda, center](const Vec& x) {
    const Vec z = x - center;
    return 0.5 * z.dot(Lambda * z);
  };
  f.gradient = [Lambda, center](const Vec& x) -> Vec {
    return Lambda * (x - center);
  };
  f.hessian = [Lambda](const Vec&) -> Mat { return Lambda; };
  return f;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  const int n = int(x.size());
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    const double h = 1e-5 * (1.0 + std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x) {
  const int n = int(x.size());
  const Vec f0 = f(x);
  Mat jac(f0.size(), n);
  for (int i = 0; i < n; ++i) {
    const double h = 1e-5 * (1.0 + std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

DerivativeCheckResult check_derivatives(const EnergyFunction& f, const Vec& x) {
  DerivativeCheckResult r;
  const Vec g = f.gradient(x);
  const Vec g_fd = fd_gradient(f.value, x);
  r.gradient_rel_err = inf_norm(g - g_fd) / (1.0 + inf_norm(Mat(g)));

  const Mat h = f.hessian(x);
  const Mat h_fd = fd_jacobian(f.gradient, x);
  r.hessian_rel_err = inf_norm(h - h_fd) / (1.0 + inf_norm(h));
  r.hessian_asymmetry = inf_norm(h - h.transpose());
  return r;
}

EnergyFunction scaled_sum(const EnergyFunction& f, double s1,
                          const EnergyFunction& g, double s2) {
  if (f.dim != g.dim)
    throw ModelError("scaled_sum: dimension mismatch between energy functions");
  EnergyFunction out;
  out.dim = f.dim;
  out.value = [=](const Vec& x) { return s1 * f.value(x) + s2 * g.value(x); };
  out.gradient = [=](const Vec& x) -> Vec {
    return s1 * f.gradient(x) + s2 * g.gradient(x);
  };
  out.hessian = [=](const Vec& x) -> Mat {
    return s1 * f.hessian(x) + s2 * g.hessian(x);
  };
  return out;
}

}  // namespace sphs
