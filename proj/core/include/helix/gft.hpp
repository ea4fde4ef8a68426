#pragma once

#include "helix/types.hpp"

namespace helix {

// Generalized discrete Fourier spectrum with frequency offset Phi/M.
// Kernel frequencies are phi(m) = (Phi + 2 pi m) / M, m = 0..M-1; Phi = 0
// reduces to the ordinary DFT.
struct GftSpectrum {
  Eigen::VectorXcd coefficients;  // \hat f_m, m = 0..M-1
  double offset = 0.0;            // Phi in [0, 2pi)
  int length() const { return static_cast<int>(coefficients.size()); }
};

// \hat f_m = (1/M) sum_k f_k e^{-i phi(m) k}
GftSpectrum gft(const Eigen::VectorXcd& samples, double offset);

// f_k = sum_m \hat f_m e^{+i phi(m) k}; exact inverse of gft.
Eigen::VectorXcd inverse_gft(const GftSpectrum& spectrum);

// Transverse one-point profile f_{k-1} = tr((sx_k + i sy_k) rho),
// k = 1..N-1, fed through gft. Site N is excluded (M = N - 1).
Eigen::VectorXcd transverse_profile(const Operator& rho);
GftSpectrum profile_spectrum(const Operator& rho, double offset);

}  // namespace helix
