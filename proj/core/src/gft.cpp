#include "helix/gft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "helix/operator_algebra.hpp"

namespace helix {

namespace {
double kernel_frequency(double offset, int m, int length) {
  return (offset + 2.0 * std::numbers::pi * m) / length;
}
}  // namespace

GftSpectrum gft(const Eigen::VectorXcd& samples, double offset) {
  const int length = static_cast<int>(samples.size());
  if (length < 1) throw std::invalid_argument("gft: empty input");
  if (offset < 0 || offset >= 2.0 * std::numbers::pi)
    throw std::invalid_argument("gft: offset outside [0, 2pi)");
  GftSpectrum out;
  out.offset = offset;
  out.coefficients.resize(length);
  for (int m = 0; m < length; ++m) {
    const double freq = kernel_frequency(offset, m, length);
    Complex acc = 0;
    for (int k = 0; k < length; ++k) acc += samples(k) * std::exp(Complex(0, -freq * k));
    out.coefficients(m) = acc / static_cast<double>(length);
  }
  return out;
}

Eigen::VectorXcd inverse_gft(const GftSpectrum& spectrum) {
  const int length = spectrum.length();
  if (length < 1) throw std::invalid_argument("inverse_gft: empty spectrum");
  Eigen::VectorXcd samples(length);
  for (int k = 0; k < length; ++k) {
    Complex acc = 0;
    for (int m = 0; m < length; ++m) {
      const double freq = kernel_frequency(spectrum.offset, m, length);
      acc += spectrum.coefficients(m) * std::exp(Complex(0, freq * k));
    }
    samples(k) = acc;
  }
  return samples;
}

Eigen::VectorXcd transverse_profile(const Operator& rho) {
  const int sites = site_count(rho);
  if (sites < 2) throw std::invalid_argument("transverse_profile: need at least 2 sites");
  Eigen::VectorXcd profile(sites - 1);
  for (int k = 1; k <= sites - 1; ++k) {
    const Operator raise =
        embed(pauli(Pauli::X), k, sites) + Complex(0, 1) * embed(pauli(Pauli::Y), k, sites);
    profile(k - 1) = (raise * rho).trace();
  }
  return profile;
}

GftSpectrum profile_spectrum(const Operator& rho, double offset) {
  return gft(transverse_profile(rho), offset);
}

}  // namespace helix
