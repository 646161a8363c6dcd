// Copyright 2026 The GDCS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gdcs/l1solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gdcs/error.hpp"
#include "gdcs/rng.hpp"

namespace gdcs {
namespace {

constexpr int kCheckEvery = 10;
constexpr int kBalanceEvery = 10;
constexpr double kBalanceRatio = 10.0;
constexpr double kBalanceFactor = 2.0;
// Pivot below this fraction of ||a_i||^2 means the column is dependent on
// the active set.
constexpr double kDependentPivot = 1e-10;
// Correlations are recomputed from scratch this often along the path.
constexpr int kRefreshEvery = 50;
constexpr double kNegligible = 1e-11;
// Zero-length homotopy steps in a row that count as a degenerate cycle.
constexpr int kStallSteps = 200;
// Relative weight perturbation that breaks exact ties on a retried path,
// growing by 30x per attempt.
constexpr double kTieBreak = 1e-12;
constexpr int kTieBreakAttempts = 3;
// Below this density, products run over the nonzero row runs of each column.
constexpr double kSparseFraction = 0.5;

void soft_threshold(const Eigen::VectorXd& v, const Eigen::VectorXd& thresholds,
                    Eigen::VectorXd& out) {
  out = (v.array().abs() - thresholds.array()).max(0.0) * v.array().sign();
}

std::vector<Eigen::Index> support_of(const Eigen::VectorXd& z) {
  std::vector<Eigen::Index> s;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) != 0.0) s.push_back(i);
  }
  return s;
}

// Lower Cholesky factor of the active Gram matrix A_S^T A_S, stored in the
// leading k x k corner of a fixed-capacity buffer.
class ActiveCholesky {
 public:
  explicit ActiveCholesky(Eigen::Index capacity) : l_(capacity, capacity) {}

  Eigen::Index size() const { return k_; }

  // Appends a column whose Gram entries against the active set are
  // `cross` and whose squared norm is `norm2`. Returns false, leaving the
  // factor unchanged, when the column is numerically dependent.
  bool append(const Eigen::VectorXd& cross, double norm2) {
    if (k_ == l_.rows()) return false;
    Eigen::VectorXd row = cross;
    if (k_ > 0) {
      l_.topLeftCorner(k_, k_).triangularView<Eigen::Lower>().solveInPlace(row);
    }
    const double pivot2 = norm2 - row.squaredNorm();
    if (!(pivot2 > kDependentPivot * norm2)) return false;
    l_.row(k_).head(k_) = row.transpose();
    l_(k_, k_) = std::sqrt(pivot2);
    ++k_;
    return true;
  }

  // Deletes active position p: the trailing block absorbs a rank-one update.
  void remove(Eigen::Index p) {
    const Eigen::Index tail = k_ - p - 1;
    Eigen::VectorXd x = l_.col(p).segment(p + 1, tail);
    for (Eigen::Index r = p; r + 1 < k_; ++r) {
      l_.row(r).head(p) = l_.row(r + 1).head(p);
    }
    for (Eigen::Index r = p; r + 1 < k_; ++r) {
      for (Eigen::Index c = p; c <= r; ++c) l_(r, c) = l_(r + 1, c + 1);
    }
    --k_;
    for (Eigen::Index i = 0; i < tail; ++i) {
      const Eigen::Index d = p + i;
      const double lii = l_(d, d);
      const double r = std::hypot(lii, x(i));
      const double c = r / lii;
      const double s = x(i) / lii;
      l_(d, d) = r;
      const Eigen::Index below = tail - i - 1;
      if (below > 0) {
        l_.col(d).segment(d + 1, below) =
            (l_.col(d).segment(d + 1, below) + s * x.segment(i + 1, below)) / c;
        x.segment(i + 1, below) = c * x.segment(i + 1, below) - s * l_.col(d).segment(d + 1, below);
      }
    }
  }

  // Solves (L L^T) out = rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd out = rhs;
    const auto l = l_.topLeftCorner(k_, k_);
    l.triangularView<Eigen::Lower>().solveInPlace(out);
    l.triangularView<Eigen::Lower>().transpose().solveInPlace(out);
    return out;
  }

 private:
  Eigen::MatrixXd l_;
  Eigen::Index k_ = 0;
};

}  // namespace

std::string to_string(SolverMethod method) {
  return method == SolverMethod::kAdmm ? "admm" : "homotopy";
}

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "homotopy") return SolverMethod::kHomotopy;
  if (name == "admm") return SolverMethod::kAdmm;
  fail(ErrorCode::kInvalidArgument, "unknown solver method '" + name + "'");
}

void SolverSettings::validate() const {
  if (!(primal_tolerance > 0.0) || !(dual_tolerance > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "solver tolerances must be positive");
  }
  if (max_iterations < 1) fail(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  if (!(step > 0.0)) fail(ErrorCode::kInvalidArgument, "step must be positive");
  if (!(reweight_epsilon > 0.0)) fail(ErrorCode::kInvalidArgument, "reweight epsilon must be positive");
  if (reweight_rounds < 1) fail(ErrorCode::kInvalidArgument, "reweight_rounds must be >= 1");
  if (!(zero_threshold > 0.0)) fail(ErrorCode::kInvalidArgument, "zero threshold must be positive");
}

L1Solver::L1Solver(Eigen::MatrixXd a, SolverSettings settings)
    : a_(std::move(a)), settings_(settings) {
  settings_.validate();
  if (a_.rows() < 1 || a_.cols() < 1) fail(ErrorCode::kInvalidArgument, "empty system matrix");
  column_norms2_ = a_.colwise().squaredNorm().transpose();
  if (settings_.method == SolverMethod::kAdmm) projector();

  std::vector<RowRun> runs;
  std::vector<std::size_t> start{0};
  Eigen::Index nonzeros = 0;
  for (Eigen::Index i = 0; i < a_.cols(); ++i) {
    for (Eigen::Index r = 0; r < a_.rows();) {
      if (a_(r, i) == 0.0) {
        ++r;
        continue;
      }
      Eigen::Index end = r;
      while (end < a_.rows() && a_(end, i) != 0.0) ++end;
      runs.push_back({r, end - r});
      nonzeros += end - r;
      r = end;
    }
    start.push_back(runs.size());
  }
  if (static_cast<double>(nonzeros) < kSparseFraction * static_cast<double>(a_.size())) {
    runs_ = std::move(runs);
    run_start_ = std::move(start);
  }
}

Eigen::VectorXd L1Solver::correlate(const Eigen::VectorXd& v) const {
  if (run_start_.empty()) return a_.transpose() * v;
  Eigen::VectorXd out(a_.cols());
  for (Eigen::Index i = 0; i < a_.cols(); ++i) {
    double sum = 0.0;
    for (std::size_t q = run_start_[i]; q < run_start_[i + 1]; ++q) {
      const RowRun& run = runs_[q];
      sum += a_.col(i).segment(run.row, run.length).dot(v.segment(run.row, run.length));
    }
    out(i) = sum;
  }
  return out;
}

void L1Solver::add_column(double s, Eigen::Index i, Eigen::VectorXd& v) const {
  if (run_start_.empty()) {
    v += s * a_.col(i);
    return;
  }
  for (std::size_t q = run_start_[i]; q < run_start_[i + 1]; ++q) {
    const RowRun& run = runs_[q];
    v.segment(run.row, run.length) += s * a_.col(i).segment(run.row, run.length);
  }
}

const L1Solver::Projector& L1Solver::projector() const {
  std::call_once(projector_once_, [this] {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(a_.rows(), a_.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(a_);
    const double trace = gram.trace();
    Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
    bool singular = llt.info() != Eigen::Success;
    if (!singular) {
      const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
      singular = pivots.array().square().minCoeff() < 1e-12 * trace / static_cast<double>(a_.rows());
    }
    if (singular) {
      gram.diagonal().array() += trace > 0.0 ? 1e-12 * trace : 1e-300;
      llt.compute(gram);
      if (llt.info() != Eigen::Success) {
        fail(ErrorCode::kSolverFailure, "factorisation of A A^T failed");
      }
    }
    auto p = std::make_unique<Projector>();
    p->l = llt.matrixL();
    p->b = llt.matrixL().solve(a_);
    projector_ = std::move(p);
  });
  return *projector_;
}

bool L1Solver::certify(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& candidate, double y_scale, L1Solution& out,
                       const Eigen::VectorXd* dual_hint) const {
  // Entries at rounding level of the largest one are treated as zero.
  const double floor = kNegligible * candidate.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < candidate.size(); ++i) {
    if (std::abs(candidate(i)) > floor) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  if (k == 0 || k > a_.rows()) return false;

  Eigen::MatrixXd sub(a_.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) sub.col(i) = a_.col(support[i]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
  if (qr.rank() < k) return false;
  const Eigen::VectorXd xs = qr.solve(y);
  const double residual = (sub * xs - y).norm();
  if (!(residual <= settings_.primal_tolerance * y_scale)) return false;

  Eigen::VectorXd target(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (xs(i) == 0.0) return false;
    target(i) = weights(support[i]) * (xs(i) > 0.0 ? 1.0 : -1.0);
  }
  const double slack = 1.0 + settings_.dual_tolerance;
  // nu certifies x if A_S^T nu = W_S sign(x_S) and |A_i^T nu| <= w_i.
  auto dual_feasible = [&](const Eigen::VectorXd& nu, bool check_support) {
    const Eigen::VectorXd g = a_.transpose() * nu;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (std::abs(g(i)) > weights(i) * slack) return false;
    }
    if (check_support) {
      for (Eigen::Index i = 0; i < k; ++i) {
        if (std::abs(g(support[i]) - target(i)) > settings_.dual_tolerance * std::abs(target(i))) {
          return false;
        }
      }
    }
    return true;
  };
  bool certified = dual_hint != nullptr && dual_feasible(*dual_hint, true);
  if (!certified) {
    // Minimum-norm solution of A_S^T nu = W_S sign(x_S).
    const Eigen::VectorXd permuted = qr.colsPermutation().transpose() * target;
    const Eigen::VectorXd t = qr.matrixR()
                                  .topLeftCorner(k, k)
                                  .triangularView<Eigen::Upper>()
                                  .transpose()
                                  .solve(permuted);
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(a_.rows());
    padded.head(k) = t;
    certified = dual_feasible(qr.householderQ() * padded, false);
  }
  if (!certified) return false;
  out.z = Eigen::VectorXd::Zero(a_.cols());
  for (Eigen::Index i = 0; i < k; ++i) out.z(support[i]) = xs(i);
  out.residual = residual;
  out.converged = true;
  return true;
}

L1Solution L1Solver::solve(const Eigen::VectorXd& y) const {
  return solve(y, Eigen::VectorXd::Ones(a_.cols()));
}

L1Solution L1Solver::solve(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                           const Eigen::VectorXd* warm_start) const {
  const Eigen::Index n = a_.cols();
  if (y.size() != a_.rows()) fail(ErrorCode::kShapeMismatch, "observation length mismatch");
  if (weights.size() != n) fail(ErrorCode::kShapeMismatch, "weight length mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      fail(ErrorCode::kInvalidArgument, "weights must be positive and finite");
    }
  }
  if (warm_start != nullptr && warm_start->size() != n) {
    fail(ErrorCode::kShapeMismatch, "warm start length mismatch");
  }

  const double y_norm = y.norm();
  const double y_scale = std::max(1.0, y_norm);
  if (y_norm == 0.0) {
    L1Solution out;
    out.z = Eigen::VectorXd::Zero(n);
    out.converged = true;
    return out;
  }
  if (settings_.method == SolverMethod::kAdmm) {
    return solve_admm(y, weights, warm_start, y_scale);
  }
  L1Solution sol = solve_homotopy(y, weights, y_scale);
  if (sol.converged) return sol;
  // Degenerate ties stall or derail the path. Retry with weights perturbed
  // far below the dual tolerance and certify against the originals.
  int iterations = sol.iterations;
  double scale = kTieBreak;
  for (int attempt = 1; attempt <= kTieBreakAttempts; ++attempt, scale *= 30.0) {
    Eigen::VectorXd perturbed = weights;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::uint64_t h =
          derive_seed(static_cast<std::uint64_t>(attempt), static_cast<std::uint64_t>(i));
      perturbed(i) *= 1.0 + scale * static_cast<double>(h >> 11) * 0x1.0p-53;
    }
    L1Solution retry = solve_homotopy(y, weights, y_scale, &perturbed);
    iterations += retry.iterations;
    if (retry.converged) {
      retry.iterations = iterations;
      return retry;
    }
  }
  L1Solution rescue = solve_admm(y, weights, &sol.z, y_scale);
  rescue.iterations += iterations;
  return rescue;
}

L1Solution L1Solver::solve_homotopy(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                                    double y_scale, const Eigen::VectorXd* path_weights) const {
  const Eigen::VectorXd& w_path = path_weights != nullptr ? *path_weights : weights;
  const Eigen::Index m = a_.rows();
  const Eigen::Index n = a_.cols();
  L1Solution out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd corr = correlate(y);  // A^T (y - A x)

  std::vector<Eigen::Index> active;
  std::vector<Eigen::Index> position(static_cast<std::size_t>(n), -1);
  std::vector<double> sign;
  ActiveCholesky chol(m);

  auto try_add = [&](Eigen::Index i, double s) {
    Eigen::VectorXd cross(static_cast<Eigen::Index>(active.size()));
    for (std::size_t p = 0; p < active.size(); ++p) cross(p) = a_.col(active[p]).dot(a_.col(i));
    if (!chol.append(cross, column_norms2_(i))) return false;
    position[i] = static_cast<Eigen::Index>(active.size());
    active.push_back(i);
    sign.push_back(s);
    return true;
  };
  auto remove_at = [&](Eigen::Index p) {
    chol.remove(p);
    position[active[p]] = -1;
    active.erase(active.begin() + p);
    sign.erase(sign.begin() + p);
    for (std::size_t q = static_cast<std::size_t>(p); q < active.size(); ++q) {
      position[active[q]] = static_cast<Eigen::Index>(q);
    }
  };

  double lambda = 0.0;
  // Refactors the active Gram matrix and puts x_S back on the path,
  // A_S^T (y - A_S x_S) = lambda W_S s_S, undoing drift from the updates.
  auto resync = [&] {
    ActiveCholesky fresh(m);
    const auto k = static_cast<Eigen::Index>(active.size());
    for (Eigen::Index p = 0; p < k; ++p) {
      Eigen::VectorXd cross(p);
      for (Eigen::Index q = 0; q < p; ++q) cross(q) = a_.col(active[q]).dot(a_.col(active[p]));
      if (!fresh.append(cross, column_norms2_(active[p]))) return;
    }
    Eigen::VectorXd rhs(k);
    for (Eigen::Index p = 0; p < k; ++p) {
      rhs(p) = a_.col(active[p]).dot(y) - lambda * w_path(active[p]) * sign[p];
    }
    const Eigen::VectorXd xs = fresh.solve(rhs);
    for (Eigen::Index p = 0; p < k; ++p) {
      if (xs(p) * sign[p] <= 0.0) return;
    }
    chol = std::move(fresh);
    for (Eigen::Index p = 0; p < k; ++p) x(active[p]) = xs(p);
  };

  Eigen::Index first = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = std::abs(corr(i)) / w_path(i);
    if (v > lambda) {
      lambda = v;
      first = i;
    }
  }
  if (lambda > 0.0) try_add(first, corr(first) > 0.0 ? 1.0 : -1.0);
  const double lambda_max = lambda;

  Eigen::Index just_added = first;
  Eigen::Index just_removed = -1;
  int stalled = 0;
  Eigen::VectorXd v(m);
  for (int step = 1; step <= settings_.max_iterations && lambda > 0.0 && !active.empty(); ++step) {
    out.iterations = step;
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::VectorXd rhs(k);
    for (Eigen::Index p = 0; p < k; ++p) rhs(p) = w_path(active[p]) * sign[p];
    const Eigen::VectorXd d = chol.solve(rhs);
    v.setZero();
    for (Eigen::Index p = 0; p < k; ++p) add_column(d(p), active[p], v);
    const Eigen::VectorXd a = correlate(v);

    double gamma = lambda;
    Eigen::Index event = -1;
    bool entering = false;
    // The index that just changed state sits on its boundary; only a
    // crossing beyond rounding level counts for it.
    const double settle = kNegligible * lambda_max;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (position[i] >= 0) continue;
      const double floor = i == just_removed ? settle : 0.0;
      const double w = w_path(i);
      const double lo = w - a(i);
      const double hi = w + a(i);
      if (lo > 0.0) {
        const double g = std::max(0.0, lambda * w - corr(i)) / lo;
        if (g < gamma && (floor == 0.0 || g > floor)) {
          gamma = g;
          event = i;
          entering = true;
        }
      }
      if (hi > 0.0) {
        const double g = std::max(0.0, lambda * w + corr(i)) / hi;
        if (g < gamma && (floor == 0.0 || g > floor)) {
          gamma = g;
          event = i;
          entering = true;
        }
      }
    }
    for (Eigen::Index p = 0; p < k; ++p) {
      const Eigen::Index i = active[p];
      if (d(p) == 0.0) continue;
      const double g = -x(i) / d(p);
      if (g > (i == just_added ? settle : 0.0) && g < gamma) {
        gamma = g;
        event = p;
        entering = false;
      }
    }

    // Below this lambda, correlations are rounding noise: finish the path.
    if (lambda - gamma <= kNegligible * lambda_max) {
      gamma = lambda;
      event = -1;
    }
    stalled = gamma <= settle ? stalled + 1 : 0;
    if (stalled > kStallSteps) break;
    for (Eigen::Index p = 0; p < k; ++p) x(active[p]) += gamma * d(p);
    corr -= gamma * a;
    lambda -= gamma;
    const Eigen::Index leaving = !entering && event >= 0 ? active[event] : -1;
    // A coefficient that left its sign crossed zero inside the settle
    // window. It belongs off the active set.
    bool flipped = false;
    for (auto p = static_cast<Eigen::Index>(active.size()) - 1; p >= 0; --p) {
      if (x(active[p]) * sign[p] < 0.0) {
        x(active[p]) = 0.0;
        remove_at(p);
        flipped = true;
      }
    }
    if (step % kRefreshEvery == 0) resync();
    if (flipped || step % kRefreshEvery == 0) corr = correlate(y - a_ * x);
    just_added = -1;
    just_removed = -1;
    if (event < 0) {
      lambda = 0.0;
      break;
    }
    if (entering) {
      const double s = corr(event) > 0.0 ? 1.0 : -1.0;
      if (!try_add(event, s)) {
        // Dependent column: a_i = A_S c. Shift x along s (e_i - c) until an
        // active coefficient reaches zero, then exchange the two.
        const auto n_active = static_cast<Eigen::Index>(active.size());
        Eigen::VectorXd cross(n_active);
        for (Eigen::Index p = 0; p < n_active; ++p) cross(p) = a_.col(active[p]).dot(a_.col(event));
        const Eigen::VectorXd c = chol.solve(cross);
        Eigen::Index out_p = -1;
        double tau = std::numeric_limits<double>::infinity();
        for (Eigen::Index p = 0; p < n_active; ++p) {
          const double q = s * c(p);
          const double xi = x(active[p]);
          if (xi * q > 0.0 && xi / q < tau) {
            tau = xi / q;
            out_p = p;
          }
        }
        if (out_p < 0) break;
        const Eigen::VectorXd before = x;
        const Eigen::Index gone = active[out_p];
        const double gone_sign = sign[out_p];
        for (Eigen::Index p = 0; p < n_active; ++p) x(active[p]) -= s * tau * c(p);
        x(gone) = 0.0;
        remove_at(out_p);
        x(event) = s * tau;
        if (!try_add(event, s)) {
          x = before;
          try_add(gone, gone_sign);
          break;
        }
        just_removed = gone;
      }
      just_added = event;
    } else if (position[leaving] >= 0) {
      x(leaving) = 0.0;
      remove_at(position[leaving]);
      just_removed = leaving;
    }
  }

  // On the final segment r = lambda v, so v is the limiting dual.
  if (lambda <= kNegligible * lambda_max && certify(y, weights, x, y_scale, out, &v)) return out;
  out.z = x;
  out.residual = (a_ * x - y).norm();
  out.converged = false;
  return out;
}

L1Solution L1Solver::solve_admm(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                                const Eigen::VectorXd* warm_start, double y_scale) const {
  const Projector& proj = projector();
  const Eigen::Index n = a_.cols();
  L1Solution out;
  const Eigen::VectorXd c = proj.l.triangularView<Eigen::Lower>().solve(y);
  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - proj.b.transpose() * (proj.b * v - c);
  };

  double rho = settings_.step;
  Eigen::VectorXd x = proj.b.transpose() * c;
  Eigen::VectorXd z;
  Eigen::VectorXd thresholds = weights / rho;
  if (warm_start != nullptr) {
    z = *warm_start;
    if (certify(y, weights, z, y_scale, out)) return out;
  } else {
    soft_threshold(x, thresholds, z);
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z_old(n);
  std::vector<Eigen::Index> last_support;

  for (int it = 1; it <= settings_.max_iterations; ++it) {
    x = project(z - u);
    z_old.swap(z);
    soft_threshold(x + u, thresholds, z);
    u += x - z;
    out.iterations = it;

    if (it % kBalanceEvery == 0) {
      const double r = (x - z).norm();
      const double s = rho * (z - z_old).norm();
      if (r > kBalanceRatio * s) {
        rho *= kBalanceFactor;
        u /= kBalanceFactor;
        thresholds = weights / rho;
      } else if (s > kBalanceRatio * r) {
        rho /= kBalanceFactor;
        u *= kBalanceFactor;
        thresholds = weights / rho;
      }
    }

    if (it % kCheckEvery == 0) {
      auto support = support_of(z);
      if (support != last_support) {
        last_support = std::move(support);
        if (certify(y, weights, z, y_scale, out)) {
          out.iterations = it;
          return out;
        }
      }
      // Duality gap with nu recovered from the scaled multiplier.
      const Eigen::VectorXd bg = proj.b * (rho * u);
      const Eigen::VectorXd row_part = proj.b.transpose() * bg;
      const double dual_violation = (row_part.array().abs() / weights.array()).maxCoeff();
      const double dual = c.dot(bg) / std::max(1.0, dual_violation);
      const double primal = (weights.array() * x.array().abs()).sum();
      const double residual = (a_ * x - y).norm();
      if (primal - dual <= settings_.dual_tolerance * primal &&
          residual <= settings_.primal_tolerance * y_scale) {
        out.z = x;
        out.residual = residual;
        out.converged = true;
        return out;
      }
    }
  }
  out.z = x;
  out.residual = (a_ * x - y).norm();
  out.converged = false;
  return out;
}

L1Solution L1Solver::solve_reweighted(const Eigen::VectorXd& y) const {
  L1Solution sol = solve(y);
  bool all_converged = sol.converged;
  int iterations = sol.iterations;
  for (int round = 1; round < settings_.reweight_rounds; ++round) {
    const Eigen::VectorXd weights =
        (sol.z.array().abs() + settings_.reweight_epsilon).inverse().matrix();
    const Eigen::VectorXd previous = sol.z;
    sol = solve(y, weights, &previous);
    all_converged = all_converged && sol.converged;
    iterations += sol.iterations;
  }
  sol.converged = all_converged;
  sol.iterations = iterations;
  return sol;
}

L1Solution basis_pursuit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                         const SolverSettings& settings) {
  return L1Solver(a, settings).solve(y);
}

L1Solution weighted_l1(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& weights, const SolverSettings& settings) {
  return L1Solver(a, settings).solve(y, weights);
}

L1Solution reweighted_l1(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                         const SolverSettings& settings) {
  return L1Solver(a, settings).solve_reweighted(y);
}

int approx_l0(const Eigen::VectorXd& z, double tau) {
  if (!(tau > 0.0)) fail(ErrorCode::kInvalidArgument, "threshold must be positive");
  return static_cast<int>((z.array().abs() >= tau).count());
}

}  // namespace gdcs
