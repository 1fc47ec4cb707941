#ifndef PRECODE_SIMULATE_HPP
#define PRECODE_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "precode/precoders.hpp"

namespace precode {

enum class Precoder { kBnb, kMddtMapped, kContinuousMmddt, kZfQuantized, kExhaustive };

const char* to_string(Precoder p);
std::optional<Precoder> precoder_from_string(std::string_view name);

struct SweepConfig {
  int users = 2;
  std::vector<int> antennas = {6};
  int alpha_s = 8;
  int alpha_x = 8;
  std::vector<double> snr_grid_db;
  int n_channels = 1000;
  int n_symbol_vectors = 100;
  std::vector<Precoder> precoders = {Precoder::kBnb, Precoder::kMddtMapped,
                                     Precoder::kContinuousMmddt, Precoder::kZfQuantized};
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  double prune_tol = 1e-9;
  long long exhaustive_budget = 10'000'000;

  void validate_common() const;
  void validate_for_ber() const;
  void validate_for_complexity() const;
};

struct BerPoint {
  Precoder precoder = Precoder::kBnb;
  int antennas = 0;
  double snr_db = 0.0;
  long long bit_errors = 0;
  long long bits_total = 0;
  long long symbol_errors = 0;
  long long symbols_total = 0;
  double ber = 0.0;  // NaN in symbol-error-only mode (alpha_s not a power of two)
  double ser = 0.0;
};

struct BerSweepResult {
  std::vector<BerPoint> points;
  long long instances_total = 0;
  long long instances_excluded = 0;   // precoder failures, whole (channel, s) skipped
  long long zero_receive_events = 0;  // exactly-zero received samples (measure zero)
};

/// Error-rate sweep. Per channel: draw H once; per symbol vector: precode
/// once per enabled precoder; per SNR point: one shared noise draw for all
/// precoders (common random numbers), detect, accumulate. Channels are
/// independent work units with substreams derived from (master_seed,
/// channel), so results are reproducible for any thread count. Aborts when
/// excluded instances exceed 0.1%.
BerSweepResult run_ber_sweep(const SweepConfig& cfg);

struct ComplexitySample {
  int antennas = 0;
  int alpha_x = 0;
  double mean_branches = 0.0;
  double std_branches = 0.0;       // sample standard deviation
  double exhaustive_count = 0.0;   // alpha_x^antennas
  long long n_channels = 0;
  std::vector<long long> per_channel_branches;
};

/// Average branch-and-bound search size versus antenna count: one random
/// symbol vector per channel realization.
std::vector<ComplexitySample> run_complexity_sweep(const SweepConfig& cfg);

}  // namespace precode

#endif  // PRECODE_SIMULATE_HPP
