#ifndef PRECODE_MODEL_HPP
#define PRECODE_MODEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "precode/alphabet.hpp"
#include "precode/rng.hpp"

namespace precode {

/// Downlink dimensions and alphabets. The per-antenna transmit amplitude is
/// fixed to 1/sqrt(antennas) so every feasible transmit vector has unit
/// energy and SNR reduces to 1/sigma_n^2.
struct SystemConfig {
  int users = 2;      // K
  int antennas = 6;   // M
  int alpha_s = 8;    // data alphabet size
  int alpha_x = 8;    // transmit alphabet size
  double snr_db = 0.0;

  double transmit_amplitude() const { return 1.0 / std::sqrt(static_cast<double>(antennas)); }
  PskAlphabet data_alphabet() const { return PskAlphabet(alpha_s, 1.0); }
  PskAlphabet transmit_alphabet() const { return PskAlphabet(alpha_x, transmit_amplitude()); }

  void validate() const;  // throws ContractViolation
};

/// K x M flat-fading channel with i.i.d. unit-variance complex Gaussian
/// entries (real/imag variance 1/2 each).
Eigen::MatrixXcd draw_channel(int users, int antennas, RandomStream& rng);

/// z = H x (noiseless receive point per user).
Eigen::VectorXcd noiseless_receive(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& x);

/// sigma_n^2 for a target SNR in dB, with SNR = ||x||^2 / sigma_n^2.
double sigma2_from_snr(double snr_db, double x_norm_sq = 1.0);

/// r = z + n with i.i.d. complex Gaussian noise of total per-entry variance
/// sigma2.
Eigen::VectorXcd add_noise(const Eigen::VectorXcd& z, double sigma2, RandomStream& rng);

/// Per-user hard detection: sector index of each received sample in the
/// alpha_s-PSK decision grid. Amplitude-invariant.
std::vector<int> detect(const Eigen::VectorXcd& r, const PskAlphabet& data_alphabet);
std::vector<int> detect(const Eigen::VectorXcd& r, int alpha_s);

/// Map symbol indices to constellation points.
Eigen::VectorXcd symbols_from_indices(const std::vector<int>& indices, const PskAlphabet& alphabet);

}  // namespace precode

#endif  // PRECODE_MODEL_HPP
