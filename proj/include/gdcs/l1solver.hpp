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

#ifndef GDCS_L1SOLVER_HPP_
#define GDCS_L1SOLVER_HPP_

#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Dense>

namespace gdcs {

enum class SolverMethod {
  kHomotopy,  // exact active-set path from lambda_max down to lambda = 0
  kAdmm,      // operator splitting, projection + soft threshold
};

std::string to_string(SolverMethod method);
SolverMethod parse_solver_method(const std::string& name);

struct SolverSettings {
  SolverMethod method = SolverMethod::kHomotopy;
  double primal_tolerance = 1e-7;  // relative: ||Az - y|| <= tol * max(1, ||y||)
  double dual_tolerance = 1e-7;    // relative duality gap / dual infeasibility
  int max_iterations = 20000;      // ADMM iterations, or homotopy breakpoints
  double step = 1.0;               // initial ADMM penalty
  double reweight_epsilon = 0.1;
  int reweight_rounds = 4;
  double zero_threshold = 1e-4;

  void validate() const;
};

struct L1Solution {
  Eigen::VectorXd z;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // ||Az - y||_2
};

// Equality-constrained weighted l1 minimisation, min sum_i w_i |z_i| s.t.
// Az = y.
//
// Homotopy follows the weighted lasso path of min 1/2 ||Az - y||^2 +
// lambda sum_i w_i |z_i| from lambda_max to 0, maintaining a Cholesky factor
// of the active Gram matrix under column insertions and deletions.
//
// ADMM alternates the projection onto {Az = y} with a weighted soft
// threshold and adapts the penalty by residual balancing. The factorisation
// of A A^T is computed once per solver and reused for every right-hand side
// and weight vector; when it is numerically singular (zero blocks, M_j > N)
// a 1e-12 * trace diagonal shift is applied. Whenever the soft-threshold
// support changes, the iterate is polished by least squares on that support.
//
// Both methods finish only on a dual certificate: the candidate is feasible
// and some nu with A_S^T nu = W_S sign(z_S) has |A_i^T nu| <= w_i for all i.
// A column that reaches the boundary while dependent on the active set,
// a_i = A_S c, is exchanged for an active one along x + t s_i (e_i - c),
// which changes neither Az nor the objective. A homotopy run that cannot be
// certified continues with ADMM from its end point; warm starts only apply
// to ADMM.
class L1Solver {
 public:
  L1Solver(Eigen::MatrixXd a, SolverSettings settings);

  const Eigen::MatrixXd& matrix() const { return a_; }
  const SolverSettings& settings() const { return settings_; }

  L1Solution solve(const Eigen::VectorXd& y) const;
  L1Solution solve(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                   const Eigen::VectorXd* warm_start = nullptr) const;

  // Round 0 with unit weights, then w_i = 1 / (|z_i| + eps) from the
  // previous round, reweight_rounds rounds in total.
  L1Solution solve_reweighted(const Eigen::VectorXd& y) const;

 private:
  struct Projector {
    Eigen::MatrixXd b;  // L^{-1} A with L L^T = A A^T (+ shift)
    Eigen::MatrixXd l;  // lower Cholesky factor
  };

  bool certify(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
               const Eigen::VectorXd& candidate, double y_scale, L1Solution& out,
               const Eigen::VectorXd* dual_hint = nullptr) const;
  L1Solution solve_admm(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                        const Eigen::VectorXd* warm_start, double y_scale) const;
  // Follows the path for `path_weights` (default `weights`) and certifies
  // the end point against `weights`.
  L1Solution solve_homotopy(const Eigen::VectorXd& y, const Eigen::VectorXd& weights,
                            double y_scale, const Eigen::VectorXd* path_weights = nullptr) const;
  const Projector& projector() const;
  // A^T v, over the nonzero row runs when A is mostly zero.
  Eigen::VectorXd correlate(const Eigen::VectorXd& v) const;
  // v += s * a_i.
  void add_column(double s, Eigen::Index i, Eigen::VectorXd& v) const;

  struct RowRun {
    Eigen::Index row;
    Eigen::Index length;
  };

  Eigen::MatrixXd a_;
  SolverSettings settings_;
  Eigen::VectorXd column_norms2_;
  // Column i owns runs_[run_start_[i]] .. runs_[run_start_[i + 1] - 1];
  // empty when products stay dense.
  std::vector<RowRun> runs_;
  std::vector<std::size_t> run_start_;
  mutable std::once_flag projector_once_;
  mutable std::unique_ptr<Projector> projector_;
};

L1Solution basis_pursuit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                         const SolverSettings& settings = {});

L1Solution weighted_l1(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& weights, const SolverSettings& settings = {});

L1Solution reweighted_l1(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                         const SolverSettings& settings = {});

// Number of entries with |z_i| >= tau.
int approx_l0(const Eigen::VectorXd& z, double tau);

}  // namespace gdcs

#endif  // GDCS_L1SOLVER_HPP_
