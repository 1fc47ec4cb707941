#ifndef PRECODE_RNG_HPP
#define PRECODE_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace precode {

/// Seeded random stream with explicitly coded sampling algorithms, so a given
/// (seed, call sequence) reproduces bit-identically on any platform. Parallel
/// workers derive independent streams from (master_seed, stream_id); results
/// then do not depend on scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Decorrelated child stream for worker / channel `stream_id`.
  static RandomStream substream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal via the Marsaglia polar method (pair-cached).
  double normal();

  /// Complex Gaussian with total variance `variance` split evenly across
  /// real and imaginary parts.
  std::complex<double> complex_gaussian(double variance);

  /// Unbiased uniform integer in [0, n) by rejection.
  int uniform_index(int n);

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

/// SplitMix64 finalizer; used for seed mixing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace precode

#endif  // PRECODE_RNG_HPP
