#include "precode/precoders.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "precode/errors.hpp"

namespace precode {

namespace {

void check_instance(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                    const SystemConfig& cfg) {
  cfg.validate();
  if (channel.rows() != cfg.users || channel.cols() != cfg.antennas) {
    throw ContractViolation("precoder: channel dimensions disagree with the configuration");
  }
  if (data_symbols.size() != cfg.users) {
    throw ContractViolation("precoder: one data symbol per user required");
  }
}

std::vector<int> map_to_alphabet(const Eigen::VectorXcd& x, const PskAlphabet& alphabet) {
  std::vector<int> idx(static_cast<std::size_t>(x.size()));
  for (Eigen::Index m = 0; m < x.size(); ++m) {
    idx[static_cast<std::size_t>(m)] = alphabet.nearest_point(x(m));
  }
  return idx;
}

PrecodeResult result_from_indices(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& s,
                                  const SystemConfig& cfg, std::vector<int> indices) {
  const PskAlphabet tx = cfg.transmit_alphabet();
  PrecodeResult r;
  r.x = symbols_from_indices(indices, tx);
  r.indices = std::move(indices);
  r.epsilon = safety_margin(channel, s, r.x, cfg.alpha_s);
  return r;
}

}  // namespace

RelaxationPair mddt_mapped(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                           const SystemConfig& cfg) {
  check_instance(channel, data_symbols, cfg);
  const RealFormulation f = build_full_lp(channel, data_symbols, cfg.alpha_s, cfg.alpha_x);
  LpSolver solver;
  const LpSolution sol = solver.solve(f.constraints, f.rhs, f.objective);
  if (sol.status != LpStatus::kOptimal) {
    throw SolveFailure(std::string("mddt_mapped: relaxation LP ended with status ") +
                       to_string(sol.status));
  }

  RelaxationPair pair;
  pair.continuous.x = complex_from_interleaved(sol.solution, 1, cfg.antennas);
  pair.continuous.epsilon = safety_margin(channel, data_symbols, pair.continuous.x, cfg.alpha_s);
  pair.continuous.stats.lp_solves = 1;
  pair.continuous.stats.branches_visited = 1;
  pair.continuous.stats.leaf_evaluations = 1;

  pair.mapped = result_from_indices(channel, data_symbols, cfg,
                                    map_to_alphabet(pair.continuous.x, cfg.transmit_alphabet()));
  pair.mapped.stats.lp_solves = 1;
  pair.mapped.stats.branches_visited = 1;
  pair.mapped.stats.leaf_evaluations = 1;
  return pair;
}

PrecodeResult bnb_optimal(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                          const SystemConfig& cfg, const BnbOptions& options) {
  check_instance(channel, data_symbols, cfg);
  const int M = cfg.antennas;
  const int ax = cfg.alpha_x;
  const PskAlphabet tx = cfg.transmit_alphabet();

  const RealFormulation f = build_full_lp(channel, data_symbols, cfg.alpha_s, cfg.alpha_x);
  LpSolver solver;
  SearchStats stats;

  // Incumbent from the mapped relaxation solution; objective sense is
  // minimization of -margin.
  double best_upper = std::numeric_limits<double>::infinity();
  std::vector<int> incumbent;
  {
    const LpSolution root = solver.solve(f.constraints, f.rhs, f.objective);
    ++stats.lp_solves;
    if (root.status == LpStatus::kOptimal) {
      const Eigen::VectorXcd xc = complex_from_interleaved(root.solution, 1, M);
      incumbent = map_to_alphabet(xc, tx);
      best_upper =
          -safety_margin(channel, data_symbols, symbols_from_indices(incumbent, tx), cfg.alpha_s);
      stats.best_bound_trace.emplace_back(0, best_upper);
    } else if (root.status != LpStatus::kUnbounded) {
      throw SolveFailure(std::string("bnb_optimal: root relaxation ended with status ") +
                         to_string(root.status));
    }
    // An unbounded relaxation (possible only for alpha_x = 2, whose hull is a
    // segment) yields no initial incumbent; the search then degenerates to
    // enumeration, which is still exact.
  }

  std::vector<std::vector<int>> level;
  level.reserve(ax);
  for (int j = 0; j < ax; ++j) level.push_back({j});
  stats.level_sizes.push_back(static_cast<long long>(level.size()));

  std::vector<std::complex<double>> prefix_pts;
  std::vector<double> bounds;

  for (int d = 1; d < M && !level.empty(); ++d) {
    bounds.assign(level.size(), 0.0);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::vector<int>& prefix = level[i];
      prefix_pts.resize(prefix.size());
      for (std::size_t m = 0; m < prefix.size(); ++m) prefix_pts[m] = tx.point(prefix[m]);

      const Subproblem sp = build_subproblem(f, prefix_pts);
      const LpSolution sol = solver.solve(sp.constraints, sp.rhs, sp.objective);
      ++stats.nodes_bounded;
      ++stats.lp_solves;

      double lb;
      if (sol.status == LpStatus::kOptimal) {
        lb = sol.objective;  // -relaxed margin, conditioned on the prefix
        // Snap the relaxed tail to the alphabet and score the completed
        // candidate exactly; it is feasible, so it tightens the incumbent.
        const Eigen::VectorXcd tail = complex_from_interleaved(sol.solution, 1, M - d);
        std::vector<int> candidate = prefix;
        for (Eigen::Index m = 0; m < tail.size(); ++m) {
          candidate.push_back(tx.nearest_point(tail(m)));
        }
        const double ub = -safety_margin(channel, data_symbols,
                                         symbols_from_indices(candidate, tx), cfg.alpha_s);
        if (ub < best_upper) {
          best_upper = ub;
          incumbent = std::move(candidate);
          stats.best_bound_trace.emplace_back(stats.nodes_bounded, best_upper);
        }
      } else if (sol.status == LpStatus::kUnbounded) {
        lb = -std::numeric_limits<double>::infinity();
      } else {
        throw SolveFailure(std::string("bnb_optimal: node relaxation ended with status ") +
                           to_string(sol.status) + " after " +
                           std::to_string(stats.nodes_bounded) + " bounded nodes");
      }
      bounds[i] = lb;
      if (options.record_nodes) stats.node_bounds.emplace_back(prefix, lb);
    }

    // Reduced set against the incumbent reached by the end of the level.
    std::vector<std::vector<int>> next;
    long long kept = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (bounds[i] <= best_upper + options.prune_tol) {
        ++kept;
        for (int j = 0; j < ax; ++j) {
          std::vector<int> child = level[i];
          child.push_back(j);
          next.push_back(std::move(child));
        }
      }
    }
    stats.pruned += static_cast<long long>(level.size()) - kept;
    stats.level_kept.push_back(kept);
    level = std::move(next);
    stats.level_sizes.push_back(static_cast<long long>(level.size()));
  }

  // Ultimate level: exact evaluation of every surviving full candidate.
  double best_eps = -std::numeric_limits<double>::infinity();
  std::vector<int> best;
  for (const std::vector<int>& candidate : level) {
    ++stats.leaf_evaluations;
    const double eps =
        safety_margin(channel, data_symbols, symbols_from_indices(candidate, tx), cfg.alpha_s);
    if (eps > best_eps) {
      best_eps = eps;
      best = candidate;
    }
  }
  if (best.empty()) {
    // Every branch was pruned (possible only with a negative prune slack);
    // the incumbent is the best feasible point seen.
    if (incumbent.empty()) {
      throw SolveFailure("bnb_optimal: search exhausted without a feasible candidate");
    }
    best = incumbent;
  }

  stats.branches_visited = stats.nodes_bounded + stats.leaf_evaluations;
  PrecodeResult result = result_from_indices(channel, data_symbols, cfg, std::move(best));
  result.stats = std::move(stats);
  return result;
}

PrecodeResult exhaustive(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                         const SystemConfig& cfg, long long budget) {
  check_instance(channel, data_symbols, cfg);
  const int M = cfg.antennas;
  const int ax = cfg.alpha_x;
  const int K = cfg.users;

  const double count_fp = std::pow(static_cast<double>(ax), M);
  if (count_fp > static_cast<double>(budget)) {
    throw SolveFailure("exhaustive: candidate count " + std::to_string(count_fp) +
                       " exceeds budget " + std::to_string(budget));
  }
  const long long count = static_cast<long long>(std::llround(count_fp));

  const PskAlphabet tx = cfg.transmit_alphabet();
  const double st = std::sin(std::numbers::pi / cfg.alpha_s);
  const double ct = std::cos(std::numbers::pi / cfg.alpha_s);

  // contribution[m][i] = rotated channel column m times alphabet point i;
  // partial sums over the first q antennas make odometer steps O(K).
  const Eigen::MatrixXcd rotated = data_symbols.conjugate().asDiagonal() * channel;
  std::vector<Eigen::VectorXcd> contribution(static_cast<std::size_t>(M) * ax);
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < ax; ++i) {
      contribution[static_cast<std::size_t>(m) * ax + i] = rotated.col(m) * tx.point(i);
    }
  }
  std::vector<Eigen::VectorXcd> partial(static_cast<std::size_t>(M) + 1,
                                        Eigen::VectorXcd::Zero(K));
  std::vector<int> idx(static_cast<std::size_t>(M), 0);
  for (int m = 0; m < M; ++m) {
    partial[m + 1] = partial[m] + contribution[static_cast<std::size_t>(m) * ax];
  }

  double best_eps = -std::numeric_limits<double>::infinity();
  std::vector<int> best;
  while (true) {
    const Eigen::VectorXcd& w = partial[M];
    double eps = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      eps = std::min(eps, w(k).real() * st - std::abs(w(k).imag()) * ct);
    }
    if (eps > best_eps) {
      best_eps = eps;
      best = idx;
    }

    int pos = M - 1;
    while (pos >= 0 && idx[pos] == ax - 1) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos; q < M; ++q) {
      partial[q + 1] = partial[q] + contribution[static_cast<std::size_t>(q) * ax + idx[q]];
    }
  }

  PrecodeResult result = result_from_indices(channel, data_symbols, cfg, std::move(best));
  result.stats.leaf_evaluations = count;
  result.stats.branches_visited = count;
  return result;
}

PrecodeResult zf_phase_quantized(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                                 const SystemConfig& cfg) {
  check_instance(channel, data_symbols, cfg);
  const Eigen::MatrixXcd gram = channel * channel.adjoint();
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
  if (!lu.isInvertible()) {
    throw SolveFailure("zf_phase_quantized: channel Gram matrix is singular; redraw the channel");
  }
  const Eigen::VectorXcd x_zf = channel.adjoint() * lu.solve(data_symbols);
  PrecodeResult result = result_from_indices(channel, data_symbols, cfg,
                                             map_to_alphabet(x_zf, cfg.transmit_alphabet()));
  result.stats.branches_visited = 1;
  result.stats.leaf_evaluations = 1;
  return result;
}

}  // namespace precode
