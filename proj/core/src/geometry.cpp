#include "precode/geometry.hpp"

#include <cmath>
#include <numbers>

#include "precode/errors.hpp"

namespace precode {

double safety_margin(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                     const Eigen::VectorXcd& x, int alpha_s) {
  if (channel.rows() != data_symbols.size() || channel.cols() != x.size()) {
    throw ContractViolation("safety_margin: dimension mismatch");
  }
  const double theta = std::numbers::pi / alpha_s;
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < channel.rows(); ++k) {
    const std::complex<double> w = std::conj(data_symbols(k)) * (channel.row(k) * x).value();
    const double eps_k = w.real() * st - std::abs(w.imag()) * ct;
    margin = std::min(margin, eps_k);
  }
  return margin;
}

RealFormulation build_full_lp(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& data_symbols,
                              int alpha_s, int alpha_x) {
  if (channel.rows() != data_symbols.size()) {
    throw ContractViolation("build_full_lp: one data symbol per user required");
  }
  if (alpha_s < 2 || alpha_x < 2) throw ContractViolation("build_full_lp: alphabet orders must be >= 2");

  RealFormulation f;
  f.users = static_cast<int>(channel.rows());
  f.antennas = static_cast<int>(channel.cols());
  f.alpha_s = alpha_s;
  f.alpha_x = alpha_x;
  f.theta = std::numbers::pi / alpha_s;

  const int K = f.users;
  const int M = f.antennas;
  const double st = std::sin(f.theta);
  const double ct = std::cos(f.theta);

  f.rotated_channel = data_symbols.conjugate().asDiagonal() * channel;
  const Eigen::MatrixXd re = f.rotated_channel.real();
  const Eigen::MatrixXd im = f.rotated_channel.imag();

  f.ccw_re = im * ct - re * st;
  f.ccw_im = re * ct + im * st;
  f.cw_re = -im * ct - re * st;
  f.cw_im = im * st - re * ct;

  f.degenerate_channel = false;
  for (int k = 0; k < K; ++k) {
    if (channel.row(k).cwiseAbs().maxCoeff() == 0.0) f.degenerate_channel = true;
  }

  f.margin_block = Eigen::MatrixXd::Zero(2 * K, 2 * M + 1);
  f.margin_block.col(0).setOnes();
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) {
      f.margin_block(k, 1 + 2 * m) = f.ccw_re(k, m);
      f.margin_block(k, 2 + 2 * m) = f.ccw_im(k, m);
      f.margin_block(K + k, 1 + 2 * m) = f.cw_re(k, m);
      f.margin_block(K + k, 2 + 2 * m) = f.cw_im(k, m);
    }
  }

  const int rows = 2 * K + M * alpha_x;
  f.constraints = Eigen::MatrixXd::Zero(rows, 2 * M + 1);
  f.constraints.topRows(2 * K) = f.margin_block;
  // Hull faces, block i = 1..alpha_x at rotation 2*pi*i/alpha_x, one row per
  // antenna inside each block.
  for (int i = 1; i <= alpha_x; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / alpha_x;
    const double c = std::cos(phi);
    const double s = -std::sin(phi);
    for (int m = 0; m < M; ++m) {
      const int row = 2 * K + (i - 1) * M + m;
      f.constraints(row, 1 + 2 * m) = c;
      f.constraints(row, 2 + 2 * m) = s;
    }
  }

  f.rhs = Eigen::VectorXd::Zero(rows);
  const double face = std::cos(std::numbers::pi / alpha_x) / std::sqrt(static_cast<double>(M));
  f.rhs.tail(M * alpha_x).setConstant(face);

  f.objective = Eigen::VectorXd::Zero(2 * M + 1);
  f.objective(0) = -1.0;
  return f;
}

Subproblem build_subproblem(const RealFormulation& f, std::span<const std::complex<double>> prefix) {
  const int d = static_cast<int>(prefix.size());
  const int K = f.users;
  const int M = f.antennas;
  if (d < 1 || d > M - 1) {
    throw ContractViolation("build_subproblem: fixed prefix length must be in [1, antennas-1]");
  }

  const int free_antennas = M - d;
  const int rows = 2 * K + free_antennas * f.alpha_x;
  const int cols = 2 * free_antennas + 1;

  Subproblem sp;
  sp.fixed_count = d;
  sp.constraints = Eigen::MatrixXd::Zero(rows, cols);
  sp.rhs = Eigen::VectorXd::Zero(rows);
  sp.objective = Eigen::VectorXd::Zero(cols);
  sp.objective(0) = -1.0;

  // Margin rows: keep the margin column and free-antenna columns, move the
  // fixed antennas' contribution to the right-hand side.
  for (int r = 0; r < 2 * K; ++r) {
    sp.constraints(r, 0) = f.constraints(r, 0);
    double shift = 0.0;
    for (int m = 0; m < d; ++m) {
      shift += f.constraints(r, 1 + 2 * m) * prefix[m].real() +
               f.constraints(r, 2 + 2 * m) * prefix[m].imag();
    }
    sp.rhs(r) = f.rhs(r) - shift;
    for (int m = d; m < M; ++m) {
      sp.constraints(r, 1 + 2 * (m - d)) = f.constraints(r, 1 + 2 * m);
      sp.constraints(r, 2 + 2 * (m - d)) = f.constraints(r, 2 + 2 * m);
    }
  }

  // Hull rows survive only for free antennas; fixed-antenna hull rows are
  // constants already satisfied by any constellation prefix.
  for (int i = 0; i < f.alpha_x; ++i) {
    for (int m = d; m < M; ++m) {
      const int src = 2 * K + i * M + m;
      const int dst = 2 * K + i * free_antennas + (m - d);
      sp.constraints(dst, 1 + 2 * (m - d)) = f.constraints(src, 1 + 2 * m);
      sp.constraints(dst, 2 + 2 * (m - d)) = f.constraints(src, 2 + 2 * m);
      sp.rhs(dst) = f.rhs(src);
    }
  }
  return sp;
}

Eigen::VectorXcd complex_from_interleaved(const Eigen::VectorXd& v, int offset, int count) {
  Eigen::VectorXcd x(count);
  for (int m = 0; m < count; ++m) {
    x(m) = std::complex<double>(v(offset + 2 * m), v(offset + 2 * m + 1));
  }
  return x;
}

}  // namespace precode
