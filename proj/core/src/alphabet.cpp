#include "precode/alphabet.hpp"

#include <cmath>
#include <numbers>

#include "precode/errors.hpp"

namespace precode {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PskAlphabet::PskAlphabet(int order, double amplitude)
    : order_(order), amplitude_(amplitude) {
  if (order < 2) throw ContractViolation("PskAlphabet: order must be >= 2");
  if (!(amplitude > 0.0)) throw ContractViolation("PskAlphabet: amplitude must be > 0");
  points_.reserve(order);
  for (int i = 0; i < order; ++i) {
    const double angle = std::numbers::pi * (2.0 * (i + 1) + 1.0) / order;
    points_.emplace_back(amplitude * std::cos(angle), amplitude * std::sin(angle));
  }
}

int PskAlphabet::phase_quantize(std::complex<double> r) const {
  // Sector i covers angles [2*pi*(i+1)/order, 2*pi*(i+2)/order), so the
  // sector number is one less than the angle bucket.
  double t = std::arg(r);  // arg(0) == 0, which lands in the last point's sector
  if (t < 0.0) t += kTwoPi;
  int bucket = static_cast<int>(std::floor(t * order_ / kTwoPi));
  if (bucket >= order_) bucket = order_ - 1;  // guard against rounding at 2*pi
  if (bucket < 0) bucket = 0;
  return (bucket + order_ - 1) % order_;
}

int PskAlphabet::nearest_point(std::complex<double> c) const {
  int best = 0;
  double best_d = std::norm(c - points_[0]);
  for (int i = 1; i < order_; ++i) {
    const double d = std::norm(c - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

GrayMap::GrayMap(int order) : order_(order), bits_(0) {
  if (!is_power_of_two(order) || order < 2) {
    throw UnsupportedConfig("GrayMap: alphabet order must be a power of two >= 2");
  }
  for (int v = order; v > 1; v >>= 1) ++bits_;
}

std::uint32_t GrayMap::encode(int index) const {
  if (index < 0 || index >= order_) throw ContractViolation("GrayMap::encode: index out of range");
  const auto u = static_cast<std::uint32_t>(index);
  return u ^ (u >> 1);
}

int GrayMap::decode(std::uint32_t bits) const {
  if (bits >= static_cast<std::uint32_t>(order_)) {
    throw ContractViolation("GrayMap::decode: bit pattern out of range");
  }
  std::uint32_t v = bits;
  for (std::uint32_t shift = 1; shift < static_cast<std::uint32_t>(bits_); shift <<= 1) {
    v ^= v >> shift;
  }
  return static_cast<int>(v);
}

}  // namespace precode
