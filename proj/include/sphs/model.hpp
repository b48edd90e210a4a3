#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sphs/common.hpp"
#include "sphs/energy.hpp"

namespace sphs {

using MatrixMap = std::function<Mat(const Vec&)>;

// Declared only when the autonomous drift is exactly affine,
// drift(x) = A·(x − x_e), with state-independent noise map Sigma. Feeds
// the linear-systems tools (controllability rank, covariance solves).
struct LinearModelView {
  Mat A;
  Mat Sigma;  // n×d noise coefficient
  Vec x_e;    // drift center
};

// Input signal u. Zero and constant controls are resolved without calling
// into user code; state feedback wraps an arbitrary map of the state.
struct ControlLaw {
  enum class Kind { zero, constant, state_feedback };
  Kind kind = Kind::zero;
  Vec constant_value;
  std::function<Vec(const Vec&)> feedback;

  static ControlLaw none() { return {}; }
  static ControlLaw constant(const Vec& u) {
    ControlLaw c;
    c.kind = Kind::constant;
    c.constant_value = u;
    return c;
  }
  static ControlLaw state_feedback(std::function<Vec(const Vec&)> phi) {
    ControlLaw c;
    c.kind = Kind::state_feedback;
    c.feedback = std::move(phi);
    return c;
  }

  Vec eval(const Vec& x, int m) const;
};

// The controlled SDE dX = [(J−R)∇H + g·u]dt + σ dW with output y = gᵀ∇H.
// J antisymmetric, R symmetric PSD; both may depend on the state.
struct SphsModel {
  int n = 0;  // state dimension
  int m = 0;  // control dimension
  int d = 0;  // noise dimension
  MatrixMap J, R, g, sigma;
  EnergyFunction hamiltonian;

  // Set when J, R, g, sigma are state-independent. Purely an optimization
  // hint for the path simulator; every consumer must produce identical
  // results with the flag off.
  bool constant_structure = false;

  // Present only for models whose autonomous drift is exactly affine.
  std::optional<LinearModelView> linear;

  // Validates the shape of every map at shape_probe and throws ModelError
  // on any mismatch, so dimension errors surface at build time.
  static SphsModel create(int n, int m, int d, MatrixMap J, MatrixMap R,
                          MatrixMap g, MatrixMap sigma, EnergyFunction H,
                          const Vec& shape_probe);
};

// (J−R)∇H + g·u at x.
Vec drift(const SphsModel& model, const ControlLaw& control, const Vec& x);

// Natural output y = g(x)ᵀ∇H(x).
Vec output(const SphsModel& model, const Vec& x);

struct ValidationIssue {
  std::string check;   // which invariant failed
  double residual;     // worst observed violation
  std::string detail;  // e.g. the probe point
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  double max_antisymmetry = 0.0;
  double min_R_eigenvalue = std::numeric_limits<double>::infinity();
  double max_gradient_err = 0.0;
  double max_hessian_err = 0.0;
  double max_hessian_asymmetry = 0.0;
  bool pass() const { return issues.empty(); }
};

// Probes structural invariants pointwise: J antisymmetric to 1e-12, R PSD
// to −1e-10, energy derivatives consistent with finite differences to 1e-5
// relative, Hessian symmetric to 1e-12. Violations are reported as data.
ValidationReport validate(const SphsModel& model, const std::vector<Vec>& probes);

}  // namespace sphs
