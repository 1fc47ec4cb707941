#include "precode/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "precode/errors.hpp"

namespace precode {

const char* to_string(Precoder p) {
  switch (p) {
    case Precoder::kBnb: return "bnb";
    case Precoder::kMddtMapped: return "mddt_mapped";
    case Precoder::kContinuousMmddt: return "continuous_mmddt";
    case Precoder::kZfQuantized: return "zf_quantized";
    case Precoder::kExhaustive: return "exhaustive";
  }
  return "unknown";
}

std::optional<Precoder> precoder_from_string(std::string_view name) {
  if (name == "bnb") return Precoder::kBnb;
  if (name == "mddt_mapped") return Precoder::kMddtMapped;
  if (name == "continuous_mmddt") return Precoder::kContinuousMmddt;
  if (name == "zf_quantized") return Precoder::kZfQuantized;
  if (name == "exhaustive") return Precoder::kExhaustive;
  return std::nullopt;
}

void SweepConfig::validate_common() const {
  if (users < 1) throw ContractViolation("SweepConfig: users must be >= 1");
  if (antennas.empty()) throw ContractViolation("SweepConfig: antenna grid must be non-empty");
  for (int m : antennas) {
    if (m < 1) throw ContractViolation("SweepConfig: antenna counts must be positive");
  }
  if (alpha_s < 2) throw ContractViolation("SweepConfig: alpha_s must be >= 2");
  if (alpha_x < 2) throw ContractViolation("SweepConfig: alpha_x must be >= 2");
  if (n_channels < 1) throw ContractViolation("SweepConfig: n_channels must be positive");
  if (threads < 0) throw ContractViolation("SweepConfig: threads must be >= 0");
}

void SweepConfig::validate_for_ber() const {
  validate_common();
  if (snr_grid_db.empty()) throw ContractViolation("SweepConfig: SNR grid must be non-empty");
  if (n_symbol_vectors < 1) throw ContractViolation("SweepConfig: n_symbol_vectors must be positive");
  if (precoders.empty()) throw ContractViolation("SweepConfig: enable at least one precoder");
}

void SweepConfig::validate_for_complexity() const {
  validate_common();
  if (std::find(precoders.begin(), precoders.end(), Precoder::kBnb) == precoders.end()) {
    throw ContractViolation("SweepConfig: complexity sweep requires the bnb precoder");
  }
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::uint64_t channel_stream_id(int antennas, int channel_index) {
  return (static_cast<std::uint64_t>(antennas) << 40) + static_cast<std::uint64_t>(channel_index);
}

// Run `n_channels` independent jobs over a small thread pool, rethrowing the
// first failure. Job results must be written into per-channel slots or
// commutative accumulators so scheduling cannot affect the outcome.
template <typename Job>
void parallel_channels(int n_channels, int threads, Job&& job) {
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto work = [&](int worker) {
    try {
      while (true) {
        const int c = next.fetch_add(1);
        if (c >= n_channels) break;
        job(worker, c);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

struct ErrorCounts {
  long long bit_errors = 0;
  long long symbol_errors = 0;
};

struct ChannelTally {
  // [precoder][snr] error counts for one worker.
  std::vector<std::vector<ErrorCounts>> counts;
  long long instances_excluded = 0;
  long long zero_receive_events = 0;

  ChannelTally(std::size_t n_precoders, std::size_t n_snr)
      : counts(n_precoders, std::vector<ErrorCounts>(n_snr)) {}

  void absorb(const ChannelTally& other) {
    for (std::size_t p = 0; p < counts.size(); ++p) {
      for (std::size_t g = 0; g < counts[p].size(); ++g) {
        counts[p][g].bit_errors += other.counts[p][g].bit_errors;
        counts[p][g].symbol_errors += other.counts[p][g].symbol_errors;
      }
    }
    instances_excluded += other.instances_excluded;
    zero_receive_events += other.zero_receive_events;
  }
};

}  // namespace

BerSweepResult run_ber_sweep(const SweepConfig& cfg) {
  cfg.validate_for_ber();
  const int threads = resolve_threads(cfg.threads);
  const std::size_t n_prec = cfg.precoders.size();
  const std::size_t n_snr = cfg.snr_grid_db.size();

  const bool bits_available = is_power_of_two(cfg.alpha_s);
  const int bits_per_symbol = bits_available ? GrayMap(cfg.alpha_s).bits_per_symbol() : 0;

  BerSweepResult result;

  for (int M : cfg.antennas) {
    SystemConfig sys;
    sys.users = cfg.users;
    sys.antennas = M;
    sys.alpha_s = cfg.alpha_s;
    sys.alpha_x = cfg.alpha_x;
    sys.validate();

    std::vector<ChannelTally> tallies(static_cast<std::size_t>(threads),
                                      ChannelTally(n_prec, n_snr));

    parallel_channels(cfg.n_channels, threads, [&](int worker, int c) {
      ChannelTally& tally = tallies[static_cast<std::size_t>(worker)];
      RandomStream rng = RandomStream::substream(cfg.master_seed, channel_stream_id(M, c));
      const Eigen::MatrixXcd channel = draw_channel(cfg.users, M, rng);
      const PskAlphabet data_alphabet = sys.data_alphabet();
      std::optional<GrayMap> gray;
      if (bits_available) gray.emplace(cfg.alpha_s);

      std::vector<int> s_idx(static_cast<std::size_t>(cfg.users));
      Eigen::VectorXcd noise_unit(cfg.users);

      for (int sv = 0; sv < cfg.n_symbol_vectors; ++sv) {
        for (int k = 0; k < cfg.users; ++k) s_idx[static_cast<std::size_t>(k)] = rng.uniform_index(cfg.alpha_s);
        const Eigen::VectorXcd s = symbols_from_indices(s_idx, data_alphabet);

        // Precoding is noise independent: one transmit vector per precoder,
        // reused across the whole SNR grid.
        std::vector<Eigen::VectorXcd> z(n_prec);
        bool failed = false;
        std::optional<RelaxationPair> relaxation;  // shared by the two relaxation outputs
        for (std::size_t p = 0; p < n_prec && !failed; ++p) {
          try {
            Eigen::VectorXcd x;
            switch (cfg.precoders[p]) {
              case Precoder::kBnb: {
                BnbOptions opt;
                opt.prune_tol = cfg.prune_tol;
                x = bnb_optimal(channel, s, sys, opt).x;
                break;
              }
              case Precoder::kMddtMapped:
              case Precoder::kContinuousMmddt: {
                if (!relaxation) relaxation = mddt_mapped(channel, s, sys);
                x = cfg.precoders[p] == Precoder::kMddtMapped ? relaxation->mapped.x
                                                              : relaxation->continuous.x;
                break;
              }
              case Precoder::kZfQuantized:
                x = zf_phase_quantized(channel, s, sys).x;
                break;
              case Precoder::kExhaustive:
                x = exhaustive(channel, s, sys, cfg.exhaustive_budget).x;
                break;
            }
            z[p] = noiseless_receive(channel, x);
          } catch (const SolveFailure&) {
            failed = true;
          }
        }
        if (failed) {
          ++tally.instances_excluded;
          continue;
        }

        for (std::size_t g = 0; g < n_snr; ++g) {
          // Common random numbers: one noise draw shared by every precoder.
          for (int k = 0; k < cfg.users; ++k) noise_unit(k) = rng.complex_gaussian(1.0);
          const double sigma = std::sqrt(sigma2_from_snr(cfg.snr_grid_db[g]));
          for (std::size_t p = 0; p < n_prec; ++p) {
            const Eigen::VectorXcd r = z[p] + sigma * noise_unit;
            for (int k = 0; k < cfg.users; ++k) {
              if (r(k) == std::complex<double>(0.0, 0.0)) ++tally.zero_receive_events;
              const int detected = data_alphabet.phase_quantize(r(k));
              const int sent = s_idx[static_cast<std::size_t>(k)];
              if (detected != sent) ++tally.counts[p][g].symbol_errors;
              if (gray) {
                const std::uint32_t diff = gray->encode(sent) ^ gray->encode(detected);
                tally.counts[p][g].bit_errors += std::popcount(diff);
              }
            }
          }
        }
      }
    });

    ChannelTally total(n_prec, n_snr);
    for (const ChannelTally& t : tallies) total.absorb(t);

    const long long instances = static_cast<long long>(cfg.n_channels) * cfg.n_symbol_vectors;
    result.instances_total += instances;
    result.instances_excluded += total.instances_excluded;
    result.zero_receive_events += total.zero_receive_events;

    const long long used = instances - total.instances_excluded;
    const long long symbols_total = used * cfg.users;
    const long long bits_total = bits_available ? symbols_total * bits_per_symbol : 0;

    for (std::size_t p = 0; p < n_prec; ++p) {
      for (std::size_t g = 0; g < n_snr; ++g) {
        BerPoint point;
        point.precoder = cfg.precoders[p];
        point.antennas = M;
        point.snr_db = cfg.snr_grid_db[g];
        point.symbol_errors = total.counts[p][g].symbol_errors;
        point.symbols_total = symbols_total;
        point.bit_errors = total.counts[p][g].bit_errors;
        point.bits_total = bits_total;
        point.ser = symbols_total > 0
                        ? static_cast<double>(point.symbol_errors) / static_cast<double>(symbols_total)
                        : 0.0;
        point.ber = bits_available && bits_total > 0
                        ? static_cast<double>(point.bit_errors) / static_cast<double>(bits_total)
                        : std::numeric_limits<double>::quiet_NaN();
        result.points.push_back(point);
      }
    }
  }

  if (result.instances_excluded * 1000 > result.instances_total) {
    throw SolveFailure("run_ber_sweep: excluded instances exceed 0.1% (" +
                       std::to_string(result.instances_excluded) + " of " +
                       std::to_string(result.instances_total) + ")");
  }
  return result;
}

std::vector<ComplexitySample> run_complexity_sweep(const SweepConfig& cfg) {
  cfg.validate_for_complexity();
  const int threads = resolve_threads(cfg.threads);

  std::vector<ComplexitySample> samples;
  for (int M : cfg.antennas) {
    SystemConfig sys;
    sys.users = cfg.users;
    sys.antennas = M;
    sys.alpha_s = cfg.alpha_s;
    sys.alpha_x = cfg.alpha_x;
    sys.validate();

    ComplexitySample sample;
    sample.antennas = M;
    sample.alpha_x = cfg.alpha_x;
    sample.n_channels = cfg.n_channels;
    sample.exhaustive_count = std::pow(static_cast<double>(cfg.alpha_x), M);
    sample.per_channel_branches.assign(static_cast<std::size_t>(cfg.n_channels), 0);

    parallel_channels(cfg.n_channels, threads, [&](int, int c) {
      RandomStream rng = RandomStream::substream(cfg.master_seed, channel_stream_id(M, c));
      const Eigen::MatrixXcd channel = draw_channel(cfg.users, M, rng);
      const PskAlphabet data_alphabet = sys.data_alphabet();
      std::vector<int> s_idx(static_cast<std::size_t>(cfg.users));
      for (int k = 0; k < cfg.users; ++k) s_idx[static_cast<std::size_t>(k)] = rng.uniform_index(cfg.alpha_s);
      const Eigen::VectorXcd s = symbols_from_indices(s_idx, data_alphabet);

      BnbOptions opt;
      opt.prune_tol = cfg.prune_tol;
      const PrecodeResult r = bnb_optimal(channel, s, sys, opt);
      sample.per_channel_branches[static_cast<std::size_t>(c)] = r.stats.branches_visited;
    });

    double mean = 0.0;
    for (long long b : sample.per_channel_branches) mean += static_cast<double>(b);
    mean /= static_cast<double>(cfg.n_channels);
    double var = 0.0;
    for (long long b : sample.per_channel_branches) {
      const double d = static_cast<double>(b) - mean;
      var += d * d;
    }
    sample.mean_branches = mean;
    sample.std_branches = cfg.n_channels > 1 ? std::sqrt(var / (cfg.n_channels - 1)) : 0.0;
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace precode
