#pragma once

#include "helix/operator_algebra.hpp"
#include "helix/types.hpp"

namespace helix {

enum class Side { Left, Right };

// Full physical configuration of one boundary-driven chain: the single
// source of truth for one simulation.
struct ChainSpec {
  int sites = 2;             // N
  double coupling = 1.0;     // J
  double anisotropy = 0.0;   // Delta
  double theta_left = 0.0;   // polar angle of the left bath
  double phi_left = 0.0;     // azimuthal angle of the left bath
  double theta_right = 0.0;
  double phi_right = 0.0;
  double gamma = 1.0;        // dissipation strength, > 0

  // Throws on violated invariants (N >= 2, gamma > 0, finite angles in
  // canonical ranges theta in [0,pi], phi in [0,2pi)).
  void validate() const;

  // Same physical configuration with angles folded into canonical ranges.
  ChainSpec canonicalized() const;
};

// Spin-helix state parameters. The twisting angle is always derived,
// never stored independently.
struct SpinHelixSpec {
  int sites = 2;          // N
  double theta = 0.0;     // polar angle
  double total_twist = 0; // Phi in [0, 2pi)
  int winding = 0;        // m, 0 <= m <= N-2

  double twist_angle() const;  // phi(m) = (Phi + 2 pi m) / (N - 1)
  void validate() const;
};

struct BlochVector {
  double x = 0, y = 0, z = 0;
  double norm() const;
};

// Single-site bath state |psi(theta,phi)> and its orthogonal complement.
Ket boundary_state(double theta, double phi);
Ket boundary_state_perp(double theta, double phi);

// Two-site density h^XXZ = J (sx sx + sy sy + Delta (sz sz - I)).
Operator local_density(double delta, double j);

Operator xxz_hamiltonian(int sites, double j, double delta);
Operator xxz_hamiltonian(const ChainSpec& spec);

// Boundary polarization jump operator, embedded at site 1 or N.
// The unembedded 2x2 operator annihilates |psi(theta_side, phi_side)>.
Operator lindblad_operator(Side side, const ChainSpec& spec);

// Spin current on bond (n, n+1): J (sx_n sy_{n+1} - sy_n sx_{n+1}).
Operator spin_current_operator(int bond, int sites, double j);

// Energy current through bulk site n, defined only for 2 <= n <= N-1.
Operator energy_current_operator(int site, int sites, double delta, double j);

// Normalized product state with site-j factor
// (cos(theta/2) e^{-i phi (j-1)/2}, sin(theta/2) e^{+i phi (j-1)/2}).
Ket shs_state(const SpinHelixSpec& spec);

// Delta_cr(m, Phi) = cos((Phi + 2 pi m) / (N - 1)).
double critical_anisotropy(int winding, double total_twist, int sites);

// m = floor((N-1) phi / (2 pi)) for a twisting angle phi.
int winding_number(double twist_angle, int sites);

// Bloch vector of site `site` in state rho.
BlochVector site_magnetization(const Operator& rho, int site, int sites);

}  // namespace helix
