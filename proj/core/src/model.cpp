#include "precode/model.hpp"

#include "precode/errors.hpp"

namespace precode {

void SystemConfig::validate() const {
  if (users < 1) throw ContractViolation("SystemConfig: users must be >= 1");
  if (antennas < 1) throw ContractViolation("SystemConfig: antennas must be >= 1");
  if (alpha_s < 2) throw ContractViolation("SystemConfig: alpha_s must be >= 2");
  if (alpha_x < 2) throw ContractViolation("SystemConfig: alpha_x must be >= 2");
  if (!std::isfinite(snr_db)) throw ContractViolation("SystemConfig: snr_db must be finite");
}

Eigen::MatrixXcd draw_channel(int users, int antennas, RandomStream& rng) {
  if (users < 1 || antennas < 1) throw ContractViolation("draw_channel: dimensions must be positive");
  Eigen::MatrixXcd h(users, antennas);
  // Row-major draw order keeps the stream layout independent of Eigen's
  // storage order.
  for (int k = 0; k < users; ++k) {
    for (int m = 0; m < antennas; ++m) {
      h(k, m) = rng.complex_gaussian(1.0);
    }
  }
  return h;
}

Eigen::VectorXcd noiseless_receive(const Eigen::MatrixXcd& channel, const Eigen::VectorXcd& x) {
  if (channel.cols() != x.size()) {
    throw ContractViolation("noiseless_receive: channel columns must match transmit vector length");
  }
  return channel * x;
}

double sigma2_from_snr(double snr_db, double x_norm_sq) {
  if (!std::isfinite(snr_db)) throw ContractViolation("sigma2_from_snr: snr_db must be finite");
  return x_norm_sq / std::pow(10.0, snr_db / 10.0);
}

Eigen::VectorXcd add_noise(const Eigen::VectorXcd& z, double sigma2, RandomStream& rng) {
  if (sigma2 < 0.0) throw ContractViolation("add_noise: sigma2 must be >= 0");
  Eigen::VectorXcd r(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    r(k) = z(k) + rng.complex_gaussian(sigma2);
  }
  return r;
}

std::vector<int> detect(const Eigen::VectorXcd& r, const PskAlphabet& data_alphabet) {
  std::vector<int> out(static_cast<std::size_t>(r.size()));
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    out[static_cast<std::size_t>(k)] = data_alphabet.phase_quantize(r(k));
  }
  return out;
}

std::vector<int> detect(const Eigen::VectorXcd& r, int alpha_s) {
  return detect(r, PskAlphabet(alpha_s, 1.0));
}

Eigen::VectorXcd symbols_from_indices(const std::vector<int>& indices, const PskAlphabet& alphabet) {
  Eigen::VectorXcd s(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    s(static_cast<Eigen::Index>(i)) = alphabet.point(indices[i]);
  }
  return s;
}

}  // namespace precode
