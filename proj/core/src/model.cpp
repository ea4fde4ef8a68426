#include "helix/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "builders.hpp"

namespace helix {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_azimuthal(double phi) {
  double p = std::fmod(phi, kTwoPi);
  if (p < 0) p += kTwoPi;
  return p;
}
}  // namespace

void ChainSpec::validate() const {
  if (sites < 2) throw std::invalid_argument("ChainSpec: need at least 2 sites");
  if (!(gamma > 0)) throw std::invalid_argument("ChainSpec: gamma must be positive");
  for (double a : {coupling, anisotropy, theta_left, phi_left, theta_right, phi_right, gamma})
    if (!std::isfinite(a)) throw std::invalid_argument("ChainSpec: non-finite field");
  for (double t : {theta_left, theta_right})
    if (t < 0 || t > std::numbers::pi)
      throw std::invalid_argument("ChainSpec: polar angle outside [0, pi]");
  for (double p : {phi_left, phi_right})
    if (p < 0 || p >= kTwoPi)
      throw std::invalid_argument("ChainSpec: azimuthal angle outside [0, 2pi)");
}

ChainSpec ChainSpec::canonicalized() const {
  ChainSpec out = *this;
  auto fold = [](double& theta, double& phi) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0) theta += kTwoPi;
    if (theta > std::numbers::pi) {
      theta = kTwoPi - theta;
      phi += std::numbers::pi;
    }
    phi = wrap_azimuthal(phi);
  };
  fold(out.theta_left, out.phi_left);
  fold(out.theta_right, out.phi_right);
  return out;
}

double SpinHelixSpec::twist_angle() const {
  return (total_twist + kTwoPi * winding) / (sites - 1);
}

void SpinHelixSpec::validate() const {
  if (sites < 2) throw std::invalid_argument("SpinHelixSpec: need at least 2 sites");
  if (total_twist < 0 || total_twist >= kTwoPi)
    throw std::invalid_argument("SpinHelixSpec: total twist outside [0, 2pi)");
  if (winding < 0 || winding > sites - 2)
    throw std::invalid_argument("SpinHelixSpec: winding outside 0..N-2");
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

Ket boundary_state(double theta, double phi) {
  Ket v(2);
  v << std::cos(theta / 2) * std::exp(Complex(0, -phi / 2)),
      std::sin(theta / 2) * std::exp(Complex(0, phi / 2));
  return v;
}

Ket boundary_state_perp(double theta, double phi) {
  Ket v(2);
  v << std::sin(theta / 2) * std::exp(Complex(0, -phi / 2)),
      -std::cos(theta / 2) * std::exp(Complex(0, phi / 2));
  return v;
}

Operator local_density(double delta, double j) {
  return detail::Kernels<double>::local_density(j, delta);
}

Operator xxz_hamiltonian(int sites, double j, double delta) {
  if (sites < 2) throw std::invalid_argument("xxz_hamiltonian: need at least 2 sites");
  return detail::Kernels<double>::xxz(sites, j, delta);
}

Operator xxz_hamiltonian(const ChainSpec& spec) {
  return xxz_hamiltonian(spec.sites, spec.coupling, spec.anisotropy);
}

Operator lindblad_operator(Side side, const ChainSpec& spec) {
  const double theta = side == Side::Left ? spec.theta_left : spec.theta_right;
  const double phi = side == Side::Left ? spec.phi_left : spec.phi_right;
  const Operator local = detail::Kernels<double>::lindblad_site(theta, phi, spec.gamma);
  return embed(local, side == Side::Left ? 1 : spec.sites, spec.sites);
}

Operator spin_current_operator(int bond, int sites, double j) {
  if (bond < 1 || bond >= sites)
    throw std::invalid_argument("spin_current_operator: bond " + std::to_string(bond) +
                                " outside 1..N-1");
  const Operator sx = pauli(Pauli::X), sy = pauli(Pauli::Y);
  return j * embed(kron(sx, sy) - kron(sy, sx), bond, sites);
}

Operator energy_current_operator(int site, int sites, double delta, double j) {
  if (site < 2 || site > sites - 1)
    throw std::invalid_argument("energy_current_operator: defined only for 2 <= n <= N-1");
  const Operator sz = pauli(Pauli::Z);
  // j_{n-1,n+1} needs the identity on site n in between
  const Operator sx = pauli(Pauli::X), sy = pauli(Pauli::Y), id = identity(2);
  const Operator j_skip =
      j * (kron(kron(sx, id), sy) - kron(kron(sy, id), sx));
  Operator out = -embed(sz, site, sites) * embed(j_skip, site - 1, sites);
  out += delta * spin_current_operator(site - 1, sites, j) * embed(sz, site + 1, sites);
  out += delta * embed(sz, site - 1, sites) * spin_current_operator(site, sites, j);
  return out;
}

Ket shs_state(const SpinHelixSpec& spec) {
  spec.validate();
  const double phi = spec.twist_angle();
  Ket state = boundary_state(spec.theta, 0.0);
  for (int site = 2; site <= spec.sites; ++site)
    state = kron(state, boundary_state(spec.theta, (site - 1) * phi));
  return state;
}

double critical_anisotropy(int winding, double total_twist, int sites) {
  if (sites < 2) throw std::invalid_argument("critical_anisotropy: need at least 2 sites");
  return std::cos((total_twist + kTwoPi * winding) / (sites - 1));
}

int winding_number(double twist_angle, int sites) {
  return static_cast<int>(std::floor((sites - 1) * twist_angle / kTwoPi));
}

BlochVector site_magnetization(const Operator& rho, int site, int sites) {
  BlochVector b;
  b.x = (embed(pauli(Pauli::X), site, sites) * rho).trace().real();
  b.y = (embed(pauli(Pauli::Y), site, sites) * rho).trace().real();
  b.z = (embed(pauli(Pauli::Z), site, sites) * rho).trace().real();
  return b;
}

}  // namespace helix
