#include "precode/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "precode/errors.hpp"

namespace precode {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

LpSolution LpSolver::solve(const LpProblem& problem) {
  return solve(problem.constraints, problem.rhs, problem.objective);
}

int LpSolver::choose_entering(const double* obj_row, int limit, bool bland) const {
  if (bland) {
    for (int j = 0; j < limit; ++j) {
      if (obj_row[j] < -tol_.reduced_cost) return j;
    }
    return -1;
  }
  int best = -1;
  double best_val = -tol_.reduced_cost;
  for (int j = 0; j < limit; ++j) {
    if (obj_row[j] < best_val) {
      best_val = obj_row[j];
      best = j;
    }
  }
  return best;
}

int LpSolver::choose_leaving(int col, int m) const {
  // Minimum-ratio row; ties resolved by the smallest basic-variable index,
  // which is the Bland leaving rule and keeps every choice deterministic.
  int leave = -1;
  double best_ratio = std::numeric_limits<double>::infinity();
  int best_basic = std::numeric_limits<int>::max();
  const auto* tab = tab_.data();
  const int rhs_col = stride_ - 1;
  for (int i = 0; i < m; ++i) {
    const double a = tab[static_cast<std::size_t>(i) * stride_ + col];
    if (a > tol_.pivot) {
      double r = tab[static_cast<std::size_t>(i) * stride_ + rhs_col];
      if (r < 0.0) r = 0.0;  // degeneracy guard against round-off
      const double ratio = r / a;
      if (ratio < best_ratio || (ratio == best_ratio && basis_[i] < best_basic)) {
        best_ratio = ratio;
        best_basic = basis_[i];
        leave = i;
      }
    }
  }
  return leave;
}

void LpSolver::pivot(int pivot_row, int pivot_col, int active_rows) {
  const int w = stride_;
  double* prow = row(pivot_row);
  const double inv = 1.0 / prow[pivot_col];
  for (int j = 0; j < w; ++j) prow[j] *= inv;
  prow[pivot_col] = 1.0;
  for (int i = 0; i < active_rows; ++i) {
    if (i == pivot_row) continue;
    double* r = row(i);
    const double f = r[pivot_col];
    if (f == 0.0) continue;
    for (int j = 0; j < w; ++j) r[j] -= f * prow[j];
    r[pivot_col] = 0.0;
  }
  basis_[pivot_row] = pivot_col;
}

LpSolution LpSolver::solve(const Eigen::MatrixXd& constraints, const Eigen::VectorXd& rhs,
                           const Eigen::VectorXd& objective) {
  const int m = static_cast<int>(constraints.rows());
  const int n = static_cast<int>(constraints.cols());
  if (m < 1 || n < 1 || rhs.size() != m || objective.size() != n) {
    throw ContractViolation("LpSolver::solve: inconsistent problem dimensions");
  }
  if (!constraints.allFinite() || !rhs.allFinite() || !objective.allFinite()) {
    throw ContractViolation("LpSolver::solve: problem data must be finite");
  }

  const int n_split = 2 * n;        // v = v+ - v-
  const int n_slack = m;
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) ++n_art;
  }
  const int structural = n_split + n_slack;
  const int total_cols = structural + n_art;
  stride_ = total_cols + 1;  // + right-hand side
  const int rhs_col = total_cols;

  const int obj2 = m;      // reduced-cost row for the real objective
  const int obj1 = m + 1;  // reduced-cost row for the infeasibility objective
  tab_.assign(static_cast<std::size_t>(m + 2) * stride_, 0.0);
  basis_.assign(m, -1);

  int next_art = structural;
  for (int i = 0; i < m; ++i) {
    double* r = row(i);
    const double sign = rhs(i) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double a = sign * constraints(i, j);
      r[j] = a;
      r[n + j] = -a;
    }
    r[n_split + i] = sign;
    r[rhs_col] = sign * rhs(i);
    if (sign > 0.0) {
      basis_[i] = n_split + i;
    } else {
      const int ac = next_art++;
      r[ac] = 1.0;
      basis_[i] = ac;
    }
  }

  {
    double* z = row(obj2);
    for (int j = 0; j < n; ++j) {
      z[j] = objective(j);
      z[n + j] = -objective(j);
    }
  }

  LpSolution out;
  const int max_iters = 10000 + 50 * (m + structural);
  const int bland_after = 500 + 10 * (m + structural);
  int iters = 0;

  auto run_phase = [&](int obj_row_index, int entering_limit) -> LpStatus {
    const int active = obj_row_index == obj1 ? m + 2 : m + 1;
    while (true) {
      if (iters > max_iters) return LpStatus::kNumericalFailure;
      const bool bland = iters > bland_after;
      const int enter = choose_entering(row(obj_row_index), entering_limit, bland);
      if (enter < 0) return LpStatus::kOptimal;
      const int leave = choose_leaving(enter, m);
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter, active);
      ++iters;
    }
  };

  if (n_art > 0) {
    double* w = row(obj1);
    for (int j = structural; j < total_cols; ++j) w[j] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (basis_[i] >= structural) {
        const double* r = row(i);
        for (int j = 0; j <= total_cols; ++j) w[j] -= r[j];
      }
    }
    // Artificials are barred from re-entering: entering_limit = structural.
    const LpStatus ph1 = run_phase(obj1, structural);
    if (ph1 != LpStatus::kOptimal) {
      out.status = ph1 == LpStatus::kUnbounded ? LpStatus::kNumericalFailure : ph1;
      out.iterations = iters;
      return out;
    }
    const double infeasibility = -row(obj1)[rhs_col];
    if (infeasibility > tol_.feasibility) {
      out.status = LpStatus::kInfeasible;
      out.iterations = iters;
      return out;
    }
    // Drive basic artificials (stuck at zero) out of the basis where a
    // structural pivot exists; a fully zero row is redundant and inert.
    for (int i = 0; i < m; ++i) {
      if (basis_[i] < structural) continue;
      const double* r = row(i);
      for (int j = 0; j < structural; ++j) {
        if (std::abs(r[j]) > tol_.pivot) {
          pivot(i, j, m + 2);
          ++iters;
          break;
        }
      }
    }
  }

  const LpStatus ph2 = run_phase(obj2, structural);
  out.iterations = iters;
  if (ph2 != LpStatus::kOptimal) {
    out.status = ph2;
    return out;
  }

  Eigen::VectorXd value = Eigen::VectorXd::Zero(total_cols);
  for (int i = 0; i < m; ++i) value(basis_[i]) = row(i)[rhs_col];
  out.solution.resize(n);
  for (int j = 0; j < n; ++j) out.solution(j) = value(j) - value(n + j);
  out.objective = objective.dot(out.solution);

  const double residual = (constraints * out.solution - rhs).maxCoeff();
  out.status = residual <= tol_.feasibility ? LpStatus::kOptimal : LpStatus::kNumericalFailure;
  return out;
}

LpSolution solve_lp(const LpProblem& problem, LpTolerances tol) {
  LpSolver solver(tol);
  return solver.solve(problem);
}

}  // namespace precode
