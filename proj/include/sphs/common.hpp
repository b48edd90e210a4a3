#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown on construction errors and contract violations (bad dimensions,
// non-finite inputs where finiteness is a precondition, etc.).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(const Vec& v) { return v.allFinite(); }
inline bool is_finite(const Mat& m) { return m.allFinite(); }

// Max absolute entry, the norm used by the symmetry/antisymmetry checks.
inline double inf_norm(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double min_eigenvalue_sym(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace sphs
