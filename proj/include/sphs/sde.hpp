#pragma once

#include <cstdint>

#include "sphs/model.hpp"

namespace sphs {

// Seeded batch of Euler-Maruyama trajectories. Snapshots are stored every
// store_stride steps (snapshot 0 is x0), flattened path-major. Divergent
// paths carry the first bad step index and stay frozen at the last finite
// state from there on.
struct PathEnsemble {
  SphsModel model;
  double dt = 0.0;
  int n_steps = 0;
  int store_stride = 1;
  int n_paths = 0;
  int n_stored = 0;  // snapshots per path, including x0
  std::uint64_t seed = 0;
  Vec x0;
  std::vector<double> states;   // [(p*n_stored + k)*n + i]
  std::vector<int> diverged_at;  // per path, -1 when clean

  int dim() const { return model.n; }
  double time_of(int k) const { return double(k) * store_stride * dt; }
  Vec snapshot(int p, int k) const {
    const int n = dim();
    return Eigen::Map<const Vec>(&states[(size_t(p) * n_stored + k) * n], n);
  }
  bool diverged(int p) const { return diverged_at[p] >= 0; }
  int divergent_count() const;
  double divergent_fraction() const {
    return n_paths ? double(divergent_count()) / n_paths : 0.0;
  }
};

// Euler-Maruyama with per-path counter-based substreams: the normal draw
// for (path p, step k, noise axis j) is a pure function of (seed, p, k*d+j),
// so results are bitwise identical regardless of thread count or
// evaluation order. n_steps must be a multiple of store_stride.
PathEnsemble simulate(const SphsModel& model, const ControlLaw& control,
                      const Vec& x0, double dt, int n_steps, int n_paths,
                      std::uint64_t seed, int store_stride = 1,
                      int n_threads = 1);

struct KalmanRankResult {
  int rank = 0;
  bool controllable = false;
  std::vector<double> singular_values;
};

// Rank of [Sigma, A·Sigma, ..., A^{n-1}·Sigma] by SVD, threshold
// 1e-10 times the largest singular value.
KalmanRankResult kalman_rank(const Mat& A, const Mat& Sigma);

// Covariance of the affine SDE at time t: integrates
// P' = AP + PA^T + Sigma·Sigma^T, P(0) = 0 with classical RK4.
Mat finite_horizon_covariance(const LinearModelView& lin, double t);

// Stationary covariance: solves AP + PA^T + Sigma·Sigma^T = 0 via the
// Kronecker-vectorized dense system. A must be Hurwitz; otherwise a
// ModelError carrying the spectrum is thrown. The Lyapunov residual of
// the returned P is at most 1e-10 (relative to the forcing term).
Mat stationary_covariance(const LinearModelView& lin);

}  // namespace sphs
