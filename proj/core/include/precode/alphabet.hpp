#ifndef PRECODE_ALPHABET_HPP
#define PRECODE_ALPHABET_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace precode {

/// A constant-modulus PSK constellation with `order` phases. Point i
/// (0-based) sits at angle pi*(2*(i+1)+1)/order, so consecutive indices are
/// angular neighbours and the last point owns the sector containing angle 0.
///
/// The matching hard detector divides the plane into `order` circle sectors
/// of width 2*pi/order centred on the points. Sector membership uses the
/// half-open convention [centre - theta, centre + theta), which makes the
/// detector deterministic on boundary inputs.
class PskAlphabet {
 public:
  PskAlphabet(int order, double amplitude);

  int order() const { return order_; }
  double amplitude() const { return amplitude_; }

  std::complex<double> point(int index) const { return points_[index]; }
  const std::vector<std::complex<double>>& points() const { return points_; }

  /// Index of the sector containing arg(r). Magnitude-invariant; r == 0
  /// resolves to the sector containing angle 0.
  int phase_quantize(std::complex<double> r) const;

  /// Index minimizing |c - point(i)|, exact ties toward the smaller index.
  /// Agrees with phase_quantize except on measure-zero boundary inputs.
  int nearest_point(std::complex<double> c) const;

 private:
  int order_;
  double amplitude_;
  std::vector<std::complex<double>> points_;
};

/// Binary-reflected Gray labelling of a power-of-two PSK alphabet: labels of
/// angularly adjacent points (including the wrap pair) differ in one bit.
class GrayMap {
 public:
  explicit GrayMap(int order);  // throws UnsupportedConfig unless order = 2^b

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_; }

  std::uint32_t encode(int index) const;
  int decode(std::uint32_t bits) const;

 private:
  int order_;
  int bits_;
};

bool is_power_of_two(int n);

}  // namespace precode

#endif  // PRECODE_ALPHABET_HPP
