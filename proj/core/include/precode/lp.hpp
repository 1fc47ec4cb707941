#ifndef PRECODE_LP_HPP
#define PRECODE_LP_HPP

#include <Eigen/Dense>
#include <vector>

namespace precode {

enum class LpStatus { kOptimal, kUnbounded, kInfeasible, kNumericalFailure };

const char* to_string(LpStatus status);

/// minimize objective . v  subject to  constraints * v <= rhs, v free.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
};

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  Eigen::VectorXd solution;  // valid when optimal
  double objective = 0.0;    // objective . solution
  int iterations = 0;
};

struct LpTolerances {
  double pivot = 1e-10;        // entries at or below this count as zero pivots
  double feasibility = 1e-8;   // residual acceptance on the returned point
  double reduced_cost = 1e-9;  // entering-column threshold
};

/// Two-phase dense primal simplex. Free variables are split into differences
/// of nonnegatives; rows with negative right-hand side get artificials.
/// Pivoting is Dantzig (most negative reduced cost, lowest index on ties)
/// with an automatic switch to Bland's rule after a stall budget, so the
/// solve terminates and identical inputs give bit-identical outputs.
///
/// A solver instance owns reusable scratch buffers: cheap to call in a loop,
/// one instance per thread.
class LpSolver {
 public:
  explicit LpSolver(LpTolerances tol = {}) : tol_(tol) {}

  LpSolution solve(const LpProblem& problem);
  LpSolution solve(const Eigen::MatrixXd& constraints, const Eigen::VectorXd& rhs,
                   const Eigen::VectorXd& objective);

 private:
  double* row(int i) { return tab_.data() + static_cast<std::size_t>(i) * stride_; }
  void pivot(int pivot_row, int pivot_col, int active_rows);
  int choose_entering(const double* obj_row, int limit, bool bland) const;
  int choose_leaving(int col, int m) const;

  LpTolerances tol_;
  std::vector<double> tab_;
  std::vector<int> basis_;
  int stride_ = 0;
};

/// One-shot convenience wrapper.
LpSolution solve_lp(const LpProblem& problem, LpTolerances tol = {});

}  // namespace precode

#endif  // PRECODE_LP_HPP
