#include "sphs/sde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "sphs/philox.hpp"

namespace sphs {

int PathEnsemble::divergent_count() const {
  return int(std::count_if(diverged_at.begin(), diverged_at.end(),
                           [](int k) { return k >= 0; }));
}

namespace {

// simulate one contiguous block of paths into the shared state buffer
void run_paths(const SphsModel& model, const ControlLaw& control, const Vec& x0,
               double dt, int n_steps, std::uint64_t seed, int store_stride,
               int n_stored, int p_begin, int p_end, std::vector<double>* states,
               std::vector<int>* diverged_at) {
  const int n = model.n;
  const int d = model.d;
  const double sqdt = std::sqrt(dt);

  // state-independent structure gets hoisted out of the step loop
  Mat JR_const, g_const, sigma_const;
  if (model.constant_structure) {
    JR_const = model.J(x0) - model.R(x0);
    g_const = model.g(x0);
    sigma_const = model.sigma(x0);
  }

  Vec x(n), x_prev(n), xi(d), mu(n);
  for (int p = p_begin; p < p_end; ++p) {
    CounterRng rng(seed, std::uint64_t(p));
    x = x0;
    int bad_step = -1;

    double* out = &(*states)[size_t(p) * n_stored * n];
    for (int i = 0; i < n; ++i) out[i] = x[i];

    for (int k = 0; k < n_steps && bad_step < 0; ++k) {
      for (int j = 0; j < d; ++j) {
        const std::uint64_t q = std::uint64_t(k) * d + j;
        const auto pair = rng.normal_pair(q / 2);
        xi[j] = (q % 2 == 0) ? pair.first : pair.second;
      }

      x_prev = x;
      if (model.constant_structure) {
        mu = JR_const * model.hamiltonian.gradient(x);
        if (model.m > 0) mu += g_const * control.eval(x, model.m);
        x += mu * dt + sqdt * (sigma_const * xi);
      } else {
        mu = drift(model, control, x);
        x += mu * dt + sqdt * (model.sigma(x) * xi);
      }

      if (!x.allFinite()) {
        bad_step = k + 1;
        x = x_prev;  // freeze at the last finite state
      }

      if ((k + 1) % store_stride == 0) {
        double* snap = out + size_t((k + 1) / store_stride) * n;
        for (int i = 0; i < n; ++i) snap[i] = x[i];
      }
    }

    // a frozen path still fills its remaining snapshots
    if (bad_step >= 0) {
      for (int k = bad_step; k <= n_steps; ++k) {
        if (k % store_stride == 0) {
          double* snap = out + size_t(k / store_stride) * n;
          for (int i = 0; i < n; ++i) snap[i] = x[i];
        }
      }
    }
    (*diverged_at)[p] = bad_step;
  }
}

}  // namespace

PathEnsemble simulate(const SphsModel& model, const ControlLaw& control,
                      const Vec& x0, double dt, int n_steps, int n_paths,
                      std::uint64_t seed, int store_stride, int n_threads) {
  if (dt <= 0.0) throw ModelError("simulate: dt must be positive");
  if (n_steps < 1 || n_paths < 1)
    throw ModelError("simulate: need at least one step and one path");
  if (x0.size() != model.n)
    throw ModelError("simulate: x0 dimension does not match model");
  if (!is_finite(x0)) throw ModelError("simulate: x0 is not finite");
  if (store_stride < 1 || n_steps % store_stride != 0)
    throw ModelError("simulate: store_stride must divide n_steps");

  PathEnsemble ens;
  ens.model = model;
  ens.dt = dt;
  ens.n_steps = n_steps;
  ens.store_stride = store_stride;
  ens.n_paths = n_paths;
  ens.n_stored = n_steps / store_stride + 1;
  ens.seed = seed;
  ens.x0 = x0;
  ens.states.resize(size_t(n_paths) * ens.n_stored * model.n);
  ens.diverged_at.assign(n_paths, -1);

  const int workers = std::max(1, std::min(n_threads, n_paths));
  if (workers == 1) {
    run_paths(model, control, x0, dt, n_steps, seed, store_stride,
              ens.n_stored, 0, n_paths, &ens.states, &ens.diverged_at);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n_paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_paths, std::cref(model), std::cref(control),
                        std::cref(x0), dt, n_steps, seed, store_stride,
                        ens.n_stored, lo, hi, &ens.states, &ens.diverged_at);
    }
    for (auto& t : pool) t.join();
  }
  return ens;
}

KalmanRankResult kalman_rank(const Mat& A, const Mat& Sigma) {
  if (A.rows() != A.cols()) throw ModelError("kalman_rank: A must be square");
  if (Sigma.rows() != A.rows())
    throw ModelError("kalman_rank: Sigma row count does not match A");

  const int n = int(A.rows());
  const int d = int(Sigma.cols());
  Mat ctrl(n, n * d);
  Mat block = Sigma;
  for (int k = 0; k < n; ++k) {
    ctrl.middleCols(k * d, d) = block;
    block = A * block;
  }

  Eigen::JacobiSVD<Mat> svd(ctrl);
  const Vec sv = svd.singularValues();
  KalmanRankResult res;
  res.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() ? sv[0] : 0.0;
  const double tol = 1e-10 * smax;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol && smax > 0.0) ++res.rank;
  res.controllable = (res.rank == n);
  return res;
}

Mat finite_horizon_covariance(const LinearModelView& lin, double t) {
  if (t < 0.0)
    throw ModelError("finite_horizon_covariance: t must be nonnegative");
  const int n = int(lin.A.rows());
  Mat P = Mat::Zero(n, n);
  if (t == 0.0) return P;

  const Mat Q = lin.Sigma * lin.Sigma.transpose();
  const auto rhs = [&](const Mat& M) -> Mat {
    return lin.A * M + M * lin.A.transpose() + Q;
  };

  const long steps = std::clamp(long(std::ceil(t * 100.0)), 1L, 2000000L);
  const double h = t / double(steps);
  for (long k = 0; k < steps; ++k) {
    const Mat k1 = rhs(P);
    const Mat k2 = rhs(P + 0.5 * h * k1);
    const Mat k3 = rhs(P + 0.5 * h * k2);
    const Mat k4 = rhs(P + h * k3);
    P += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return 0.5 * (P + P.transpose());
}

Mat stationary_covariance(const LinearModelView& lin) {
  const int n = int(lin.A.rows());
  const Eigen::EigenSolver<Mat> es(lin.A);
  const auto ev = es.eigenvalues();
  for (int i = 0; i < n; ++i) {
    if (ev[i].real() >= 0.0) {
      std::ostringstream os;
      os << "stationary_covariance: A is not Hurwitz; spectrum:";
      for (int j = 0; j < n; ++j)
        os << " (" << ev[j].real() << (ev[j].imag() < 0 ? "" : "+")
           << ev[j].imag() << "i)";
      throw ModelError(os.str());
    }
  }

  // vec(AP + PA^T) = (I kron A + A kron I) vec(P)
  const Mat Q = lin.Sigma * lin.Sigma.transpose();
  Mat kron = Mat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // I kron A: block (j,j) gets A; A kron I: entry scaling
      for (int k = 0; k < n; ++k) {
        kron(j * n + i, j * n + k) += lin.A(i, k);
        kron(j * n + i, k * n + i) += lin.A(j, k);
      }
    }

  Eigen::VectorXd q(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) q[j * n + i] = Q(i, j);

  const Eigen::VectorXd p = kron.fullPivLu().solve(-q);
  Mat P(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) P(i, j) = p[j * n + i];
  P = 0.5 * (P + P.transpose());

  const double resid = inf_norm(lin.A * P + P * lin.A.transpose() + Q) /
                       std::max(1.0, inf_norm(Q));
  if (resid > 1e-10) {
    std::ostringstream os;
    os << "stationary_covariance: Lyapunov residual " << resid
       << " exceeds 1e-10";
    throw ModelError(os.str());
  }
  return P;
}

}  // namespace sphs
