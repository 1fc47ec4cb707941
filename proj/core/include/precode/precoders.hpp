#ifndef PRECODE_PRECODERS_HPP
#define PRECODE_PRECODERS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "precode/geometry.hpp"
#include "precode/lp.hpp"
#include "precode/model.hpp"

namespace precode {

struct SearchStats {
  long long nodes_bounded = 0;      // tree nodes whose conditioned LP was solved
  long long leaf_evaluations = 0;   // full-length candidates scored exactly
  long long branches_visited = 0;   // nodes_bounded + leaf_evaluations
  long long lp_solves = 0;          // every LP invocation, root relaxation included
  long long pruned = 0;             // nodes discarded by bound comparison

  // Incumbent updates as (nodes bounded so far, incumbent objective -eps).
  std::vector<std::pair<long long, double>> best_bound_trace;

  // Tree-shape tallies, one entry per level: |G_d| and the survivors |G'_d|.
  std::vector<long long> level_sizes;
  std::vector<long long> level_kept;

  // Per-node (prefix, lower bound) log, filled only when requested.
  std::vector<std::pair<std::vector<int>, double>> node_bounds;
};

struct PrecodeResult {
  Eigen::VectorXcd x;
  std::vector<int> indices;  // transmit-alphabet indices; empty for continuous outputs
  double epsilon = 0.0;      // exact safety margin of x
  SearchStats stats;
};

struct BnbOptions {
  double prune_tol = 1e-9;   // slack added to the keep test lb <= incumbent + slack
  bool record_nodes = false; // fill SearchStats::node_bounds
};

struct RelaxationPair {
  PrecodeResult continuous;  // optimizer of the hull-relaxed program
  PrecodeResult mapped;      // continuous solution snapped to the transmit alphabet
};

/// Solve the hull relaxation once and also return its nearest-point mapping.
/// The continuous result is the full-resolution per-antenna-power baseline;
/// -continuous.epsilon lower-bounds and -mapped.epsilon upper-bounds the
/// discrete optimum.
RelaxationPair mddt_mapped(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                           const SystemConfig& cfg);

/// Globally optimal margin precoder: breadth-first branch-and-bound over the
/// per-antenna symbol tree, bounding each prefix by its conditioned LP
/// relaxation and pruning against the best mapped candidate seen so far.
/// Exact-tie optima resolve to the lexicographically smallest index
/// sequence, matching `exhaustive`.
PrecodeResult bnb_optimal(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                          const SystemConfig& cfg, const BnbOptions& options = {});

/// Brute-force search over all alpha_x^antennas candidates (lexicographic
/// order, first maximizer kept). Refuses when the candidate count exceeds
/// `budget`.
PrecodeResult exhaustive(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                         const SystemConfig& cfg, long long budget = 10'000'000);

/// Zero-forcing precoder followed by per-antenna phase quantization.
PrecodeResult zf_phase_quantized(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                                 const SystemConfig& cfg);

}  // namespace precode

#endif  // PRECODE_PRECODERS_HPP
