#include "sphs/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sphs/sde.hpp"

namespace sphs {

Vec matching_residual(const SphsModel& model, const ShapingPlan& plan,
                      const Vec& x) {
  const Mat Ja = plan.J_a(x);
  const Mat Ra = plan.R_a(x);
  const Vec lhs = (model.J(x) + Ja - model.R(x) - Ra) * plan.K(x);
  Vec rhs = -(Ja - Ra) * model.hamiltonian.gradient(x);
  if (model.m > 0) rhs += model.g(x) * plan.phi(x);
  return lhs - rhs;
}

namespace {

SphsModel build_shaped_model(const SphsModel& model, const ShapingPlan& plan,
                             bool plan_constant) {
  const MatrixMap J = model.J, R = model.R;
  const MatrixMap Ja = plan.J_a, Ra = plan.R_a;
  SphsModel shaped = SphsModel::create(
      model.n, model.m, model.d,
      [J, Ja](const Vec& x) -> Mat { return J(x) + Ja(x); },
      [R, Ra](const Vec& x) -> Mat { return R(x) + Ra(x); }, model.g,
      model.sigma, scaled_sum(model.hamiltonian, 1.0, *plan.H_a, 1.0),
      plan.x_e);
  shaped.constant_structure = model.constant_structure && plan_constant;
  shaped.linear = plan.shaped_linear;
  return shaped;
}

}  // namespace

ShapingReport check_conditions(const SphsModel& model, const ShapingPlan& plan,
                               const std::vector<Vec>& probes,
                               const ShellOptions& shell_opts,
                               const std::vector<double>& shell_radii,
                               double shell_eps) {
  if (probes.empty())
    throw ModelError("check_conditions: at least one probe point required");

  ShapingReport rep;

  // matching residual, the precondition everything else builds on
  for (const Vec& x : probes)
    rep.max_matching_residual = std::max(
        rep.max_matching_residual, inf_norm(Mat(matching_residual(model, plan, x))));

  // (i) shaped structure: J_d antisymmetric, R_d positive semidefinite
  {
    double worst_antisym = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    for (const Vec& x : probes) {
      const Mat Jd = model.J(x) + plan.J_a(x);
      const Mat Rd = model.R(x) + plan.R_a(x);
      worst_antisym = std::max(worst_antisym, inf_norm(Jd + Jd.transpose()));
      min_eig = std::min(min_eig, min_eigenvalue_sym(Rd));
    }
    rep.structure.pass = worst_antisym <= 1e-12 && min_eig >= -1e-10;
    rep.structure.residual = std::max(worst_antisym, std::max(0.0, -min_eig));
    std::ostringstream os;
    os << "max |J_d+J_dT| = " << worst_antisym << ", min eig R_d = " << min_eig;
    rep.structure.note = os.str();
  }

  // (ii) integrability: symmetric Jacobian of K, and when the plan carries
  // H_a, the gradient of H_a must reproduce K
  {
    double worst_asym = 0.0, worst_grad = 0.0;
    for (const Vec& x : probes) {
      const Mat dK = plan.K_jacobian(x);
      worst_asym = std::max(worst_asym, inf_norm(dK - dK.transpose()));
      if (plan.H_a)
        worst_grad = std::max(
            worst_grad, inf_norm(Mat(plan.H_a->gradient(x) - plan.K(x))));
    }
    rep.integrability.pass = worst_asym <= 1e-10 &&
                             (!plan.H_a || worst_grad <= 1e-8);
    rep.integrability.residual = std::max(worst_asym, worst_grad);
    std::ostringstream os;
    os << "max |dK-dKT| = " << worst_asym;
    if (plan.H_a) os << ", max |grad H_a - K| = " << worst_grad;
    rep.integrability.note = os.str();
  }

  // (iii) equilibrium assignment K(x_e) = -grad H(x_e)
  {
    const Vec r = plan.K(plan.x_e) + model.hamiltonian.gradient(plan.x_e);
    rep.equilibrium.residual = inf_norm(Mat(r));
    rep.equilibrium.pass = rep.equilibrium.residual <= 1e-10;
  }

  // (iv) shaped Hessian positive definite at the equilibrium
  {
    const Mat h = plan.K_jacobian(plan.x_e) +
                  model.hamiltonian.hessian(plan.x_e);
    const double min_eig = min_eigenvalue_sym(h);
    rep.hessian.pass = min_eig >= 1e-10;
    rep.hessian.residual = min_eig;
    std::ostringstream os;
    os << "min eig of shaped Hessian at x_e = " << min_eig;
    rep.hessian.note = os.str();
  }

  // (v) ultimate passivity of the shaped system, Lyapunov energy H_d
  if (plan.H_a) {
    const SphsModel shaped =
        build_shaped_model(model, plan, /*plan_constant=*/false);
    GeneratorContext ctx{shaped, ControlLaw::none()};
    rep.shell = classify_ultimate_passivity(ctx, shaped.hamiltonian, plan.x_e,
                                            shell_radii, shell_eps, shell_opts);
    rep.passivity.pass =
        rep.shell.verdict == ShellVerdict::strictly_ultimately_passive ||
        rep.shell.verdict == ShellVerdict::passive_everywhere;
    rep.passivity.residual =
        rep.shell.raw_sup.empty()
            ? 0.0
            : *std::max_element(rep.shell.raw_sup.begin(), rep.shell.raw_sup.end());
    rep.passivity.note = std::string("shell verdict: ") + to_string(rep.shell.verdict);
  } else {
    rep.passivity.pass = false;
    rep.passivity.evaluated = false;
    rep.passivity.note = "H_a not supplied; shaped energy unavailable";
  }

  // (vi) noise non-degeneracy: elliptic diffusion at probes, or a
  // controllable (A, Sigma) pair for models declaring a linear view
  {
    double min_eig = std::numeric_limits<double>::infinity();
    for (const Vec& x : probes) {
      const Mat sig = model.sigma(x);
      min_eig = std::min(min_eig, min_eigenvalue_sym(sig * sig.transpose()));
    }
    const bool elliptic = min_eig > 1e-12;
    bool controllable = false;
    const auto& lin = plan.shaped_linear ? plan.shaped_linear : model.linear;
    if (lin) {
      const auto kr = kalman_rank(lin->A, lin->Sigma);
      controllable = kr.controllable;
    }
    rep.noise.pass = elliptic || controllable;
    rep.noise.residual = min_eig;
    std::ostringstream os;
    os << "min eig of sigma*sigmaT = " << min_eig;
    if (lin)
      os << (controllable ? "; linear view controllable"
                          : "; linear view not controllable");
    rep.noise.note = os.str();
  }

  return rep;
}

ShapedSystem assemble_shaped(const SphsModel& model, const ShapingPlan& plan,
                             const std::vector<Vec>& probes) {
  if (probes.empty())
    throw ModelError("assemble_shaped: at least one probe point required");
  if (!plan.H_a)
    throw ModelError(
        "assemble_shaped: plan carries no H_a; K was not integrated "
        "(integrability condition (ii) must be resolved by the caller)");

  for (const Vec& x : probes) {
    const double r = inf_norm(Mat(matching_residual(model, plan, x)));
    if (r > 1e-10) {
      std::ostringstream os;
      os << "assemble_shaped: matching residual " << r
         << " exceeds 1e-10 at a probe point";
      throw ModelError(os.str());
    }
    const Mat Jd = model.J(x) + plan.J_a(x);
    if (inf_norm(Jd + Jd.transpose()) > 1e-12)
      throw ModelError("assemble_shaped: shaped J is not antisymmetric");
    if (min_eigenvalue_sym(model.R(x) + plan.R_a(x)) < -1e-10)
      throw ModelError("assemble_shaped: shaped R is not PSD");
    const Mat dK = plan.K_jacobian(x);
    if (inf_norm(dK - dK.transpose()) > 1e-10)
      throw ModelError("assemble_shaped: K Jacobian is not symmetric");
    if (inf_norm(Mat(plan.H_a->gradient(x) - plan.K(x))) > 1e-8)
      throw ModelError("assemble_shaped: grad H_a does not reproduce K");
  }

  ShapedSystem sys{build_shaped_model(model, plan, plan.constant_structure),
                   model.hamiltonian, plan.x_e};

  // the closed-loop drift must agree with (J-R)grad H + g phi
  GeneratorContext closed{model, model.m > 0
                                     ? ControlLaw::state_feedback(plan.phi)
                                     : ControlLaw::none()};
  for (const Vec& x : probes) {
    const Vec a = drift(sys.model, ControlLaw::none(), x);
    const Vec b = drift(model, closed.control, x);
    if (inf_norm(Mat(a - b)) > 1e-10)
      throw ModelError(
          "assemble_shaped: shaped drift does not reproduce the closed loop");
  }
  return sys;
}

double dissipation_rate(const ShapedSystem& shaped, const Vec& x) {
  const Vec grad = shaped.model.hamiltonian.gradient(x);
  return grad.dot(shaped.model.R(x) * grad);
}

}  // namespace sphs
