#ifndef PRECODE_GEOMETRY_HPP
#define PRECODE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "precode/model.hpp"

namespace precode {

/// Real-valued data of the relaxed max-min-margin program
///
///     minimize  objective . v   subject to  constraints * v <= rhs,
///
/// over v = [margin, Re x_1, Im x_1, ..., Re x_M, Im x_M]. The first
/// 2*users rows bound the margin by the distance of each user's rotated
/// receive point to its two decision-sector edges; the remaining
/// antennas*alpha_x rows confine every antenna signal to the convex hull of
/// the scaled transmit constellation (a regular polygon with face distance
/// cos(pi/alpha_x)/sqrt(M)).
struct RealFormulation {
  int users = 0;
  int antennas = 0;
  int alpha_s = 0;
  int alpha_x = 0;
  double theta = 0.0;  // detection half-sector, pi/alpha_s

  Eigen::MatrixXcd rotated_channel;  // diag(conj(s)) * H

  // Negated margin coefficients against (Re x_m, Im x_m), one K x M matrix
  // per coefficient slot: ccw_* rows measure distance to the
  // counterclockwise sector edge, cw_* to the clockwise edge.
  Eigen::MatrixXd ccw_re, ccw_im, cw_re, cw_im;

  Eigen::MatrixXd margin_block;  // 2K x (2M+1), [1 | interleaved coefficients]
  Eigen::MatrixXd constraints;   // (2K + M*alpha_x) x (2M+1)
  Eigen::VectorXd rhs;
  Eigen::VectorXd objective;     // [-1, 0, ..., 0]

  bool degenerate_channel = false;  // some user row of H is all zero

  int margin_rows() const { return 2 * users; }
  int hull_rows() const { return antennas * alpha_x; }
  int variables() const { return 2 * antennas + 1; }
};

/// Conditioned program after fixing the first `fixed_count` antenna symbols:
/// the margin column and the free-antenna columns survive, hull rows of
/// fixed antennas are dropped (they are constants satisfied by construction),
/// and the fixed contribution moves into the right-hand side.
struct Subproblem {
  int fixed_count = 0;  // d
  Eigen::MatrixXd constraints;  // (2K + (M-d)*alpha_x) x (2(M-d)+1)
  Eigen::VectorXd rhs;
  Eigen::VectorXd objective;
};

/// Exact minimum distance, over users, of the noiseless receive points to
/// their intended symbols' decision-sector edges. Negative when some user
/// would be misdetected even without noise.
double safety_margin(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                     const Eigen::VectorXcd& x, int alpha_s);

RealFormulation build_full_lp(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                              int alpha_s, int alpha_x);

/// prefix holds the fixed transmit symbols for antennas 0..d-1 (values from
/// the scaled transmit alphabet). Requires 1 <= d <= antennas-1.
Subproblem build_subproblem(const RealFormulation& f, std::span<const std::complex<double>> prefix);

/// Split a solver vector v = [margin, Re/Im interleaved] back into the
/// complex transmit vector.
Eigen::VectorXcd complex_from_interleaved(const Eigen::VectorXd& v, int offset, int count);

}  // namespace precode

#endif  // PRECODE_GEOMETRY_HPP
