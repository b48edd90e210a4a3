#include "sphs/model.hpp"

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

void check_shape(const Mat& m, int rows, int cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << "SphsModel: " << name << " has shape " << m.rows() << "x" << m.cols()
       << ", expected " << rows << "x" << cols;
    throw ModelError(os.str());
  }
}

}  // namespace

Vec ControlLaw::eval(const Vec& x, int m) const {
  switch (kind) {
    case Kind::zero:
      return Vec::Zero(m);
    case Kind::constant:
      if (constant_value.size() != m)
        throw ModelError("ControlLaw: constant input has wrong dimension");
      return constant_value;
    case Kind::state_feedback: {
      Vec u = feedback(x);
      if (u.size() != m)
        throw ModelError("ControlLaw: feedback output has wrong dimension");
      return u;
    }
  }
  throw ModelError("ControlLaw: invalid kind");
}

SphsModel SphsModel::create(int n, int m, int d, MatrixMap J, MatrixMap R,
                            MatrixMap g, MatrixMap sigma, EnergyFunction H,
                            const Vec& shape_probe) {
  if (n <= 0) throw ModelError("SphsModel: state dimension must be positive");
  if (m < 0) throw ModelError("SphsModel: control dimension must be nonnegative");
  if (d <= 0) throw ModelError("SphsModel: noise dimension must be positive");
  if (H.dim != n)
    throw ModelError("SphsModel: hamiltonian dimension does not match state");
  if (shape_probe.size() != n)
    throw ModelError("SphsModel: shape probe has wrong dimension");

  check_shape(J(shape_probe), n, n, "J");
  check_shape(R(shape_probe), n, n, "R");
  check_shape(g(shape_probe), n, m, "g");
  check_shape(sigma(shape_probe), n, d, "sigma");
  const Vec grad = H.gradient(shape_probe);
  if (grad.size() != n)
    throw ModelError("SphsModel: hamiltonian gradient has wrong dimension");

  SphsModel model;
  model.n = n;
  model.m = m;
  model.d = d;
  model.J = std::move(J);
  model.R = std::move(R);
  model.g = std::move(g);
  model.sigma = std::move(sigma);
  model.hamiltonian = std::move(H);
  return model;
}

Vec drift(const SphsModel& model, const ControlLaw& control, const Vec& x) {
  const Vec grad = model.hamiltonian.gradient(x);
  Vec mu = (model.J(x) - model.R(x)) * grad;
  if (model.m > 0) mu += model.g(x) * control.eval(x, model.m);
  return mu;
}

Vec output(const SphsModel& model, const Vec& x) {
  if (!is_finite(x)) throw ModelError("output: state is not finite");
  return model.g(x).transpose() * model.hamiltonian.gradient(x);
}

ValidationReport validate(const SphsModel& model,
                          const std::vector<Vec>& probes) {
  if (probes.empty())
    throw ModelError("validate: at least one probe point required");

  ValidationReport rep;
  const Vec* worst_antisym = nullptr;
  const Vec* worst_psd = nullptr;
  const Vec* worst_grad = nullptr;
  const Vec* worst_hess = nullptr;
  const Vec* worst_asym = nullptr;

  for (const Vec& x : probes) {
    const Mat J = model.J(x);
    const double anti = inf_norm(J + J.transpose());
    if (anti > rep.max_antisymmetry) {
      rep.max_antisymmetry = anti;
      worst_antisym = &x;
    }

    const double rmin = min_eigenvalue_sym(model.R(x));
    if (rmin < rep.min_R_eigenvalue) {
      rep.min_R_eigenvalue = rmin;
      worst_psd = &x;
    }

    const DerivativeCheckResult dc = check_derivatives(model.hamiltonian, x);
    if (dc.gradient_rel_err > rep.max_gradient_err) {
      rep.max_gradient_err = dc.gradient_rel_err;
      worst_grad = &x;
    }
    if (dc.hessian_rel_err > rep.max_hessian_err) {
      rep.max_hessian_err = dc.hessian_rel_err;
      worst_hess = &x;
    }
    if (dc.hessian_asymmetry > rep.max_hessian_asymmetry) {
      rep.max_hessian_asymmetry = dc.hessian_asymmetry;
      worst_asym = &x;
    }
  }

  if (rep.max_antisymmetry > 1e-12)
    rep.issues.push_back({"J antisymmetry", rep.max_antisymmetry,
                          "worst probe " + fmt_point(*worst_antisym)});
  if (rep.min_R_eigenvalue < -1e-10)
    rep.issues.push_back({"R positive semidefiniteness", rep.min_R_eigenvalue,
                          "worst probe " + fmt_point(*worst_psd)});
  if (rep.max_gradient_err > 1e-5)
    rep.issues.push_back({"gradient consistency", rep.max_gradient_err,
                          "worst probe " + fmt_point(*worst_grad)});
  if (rep.max_hessian_err > 1e-5)
    rep.issues.push_back({"hessian consistency", rep.max_hessian_err,
                          "worst probe " + fmt_point(*worst_hess)});
  if (rep.max_hessian_asymmetry > 1e-12)
    rep.issues.push_back({"hessian symmetry", rep.max_hessian_asymmetry,
                          "worst probe " + fmt_point(*worst_asym)});
  return rep;
}

}  // namespace sphs
