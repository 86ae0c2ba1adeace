// Standard-form SDP with multiple PSD blocks, free scalar variables and
// linear equality rows:
//
//   minimize    sum_b <C_b, X_b> + c . f
//   subject to  sum_b <A_rb, X_b> + F_r . f = rhs_r   (r = 1..m)
//               X_b PSD,  f free.
//
// Triplet convention: a term (block, i, j, coeff) with i < j stands for the
// symmetric matrix contribution A_ij = A_ji = coeff / 2, so that it adds
// coeff * X_ij to <A, X>. Diagonal terms contribute coeff * X_ii.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace volsos {

constexpr int kFreeBlock = -1;

struct SdpTerm {
  int block = 0;  // kFreeBlock means a free variable; then i is its index
  int i = 0;
  int j = 0;
  double coeff = 0.0;
};

struct SdpRow {
  std::vector<SdpTerm> terms;
  double rhs = 0.0;
  // Factor the row was multiplied by during normalization; the dual
  // multiplier of the original row is scale * dual of the emitted row.
  double scale = 1.0;
  std::string label;
};

struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<std::string> block_labels;
  int n_free = 0;
  std::vector<SdpRow> rows;
  std::vector<SdpTerm> objective;  // sense: minimize

  void validate() const;  // throws std::invalid_argument on bad indexing
};

struct SolverOptions {
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
  int max_iters = 200;
  double free_var_regularization = 1e-9;
  double step_fraction = 0.98;
  int verbosity = 0;
};

enum class SolveStatus { Optimal, NearOptimal, Infeasible, Unbounded, MaxIter };

std::string to_string(SolveStatus s);

struct ResidualReport {
  double primal_infeas = 0.0;   // ||b - A(X) - F f|| / (1 + ||b||)
  double dual_infeas = 0.0;     // ||C - Z - A'(y)||_F / (1 + ||C||_F)
  double free_dual_infeas = 0.0;  // ||c - F' y|| / (1 + ||c||)
  double rel_gap = 0.0;         // |pobj - dobj| / (1 + |pobj| + |dobj|)
  std::vector<double> min_block_eig;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<Eigen::MatrixXd> blocks;  // primal X_b
  Eigen::VectorXd free_values;          // primal f
  Eigen::VectorXd dual;                 // y, one multiplier per emitted row
  std::vector<Eigen::MatrixXd> dual_slacks;  // Z_b
  double objective_primal = 0.0;
  double objective_dual = 0.0;
  ResidualReport residuals;
  int iterations = 0;
  double wall_time_s = 0.0;
};

// Deterministic dense primal-dual interior point method (HKM search
// direction with a Mehrotra predictor-corrector step).
SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {});

ResidualReport residuals(const SdpProblem& p, const SdpSolution& s);

}  // namespace volsos
