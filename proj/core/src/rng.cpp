#include "precode/rng.hpp"

#include <cmath>

#include "precode/errors.hpp"

namespace precode {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream RandomStream::substream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RandomStream(mix64(mix64(master_seed) ^ mix64(stream_id + 0x51D2B1A98D2C7C5Dull)));
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * f;
  has_cached_ = true;
  return u * f;
}

std::complex<double> RandomStream::complex_gaussian(double variance) {
  const double sd = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {sd * re, sd * im};
}

int RandomStream::uniform_index(int n) {
  if (n <= 0) throw ContractViolation("RandomStream::uniform_index: n must be positive");
  const auto un = static_cast<std::uint64_t>(n);
  const std::uint64_t bucket = UINT64_MAX / un;
  const std::uint64_t limit = bucket * un;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return static_cast<int>(r / bucket);
}

}  // namespace precode
