#include "helix/zeno.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "helix/operator_algebra.hpp"

namespace helix {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// full-space index from boundary pair index a = 2*b1 + bN and interior
// index c (site 2 = most significant interior bit)
Eigen::Index full_index(int a, Eigen::Index c, int sites) {
  const Eigen::Index b1 = (a >> 1) & 1;
  const Eigen::Index bn = a & 1;
  return (b1 << (sites - 1)) | (c << 1) | bn;
}

// H sliced into the 16 boundary sectors: slab[a][a'](c,c') = H(full(a,c), full(a',c'))
std::array<std::array<Operator, 4>, 4> boundary_slabs(const Operator& h, int sites) {
  const Eigen::Index d1 = Eigen::Index(1) << (sites - 2);
  std::array<std::array<Operator, 4>, 4> slabs;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      slabs[a][b].resize(d1, d1);
      for (Eigen::Index c = 0; c < d1; ++c)
        for (Eigen::Index cc = 0; cc < d1; ++cc)
          slabs[a][b](c, cc) = h(full_index(a, c, sites), full_index(b, cc, sites));
    }
  return slabs;
}

// single-site operator embedded in the interior space at physical site m
Operator interior_embed(const Operator& op, int site, int sites) {
  return embed(op, site - 1, sites - 2);
}

Operator interior_identity(int sites) {
  return identity(Eigen::Index(1) << (sites - 2));
}

// C_{++}(m, th, phi) = J(sin th (e^{i phi} s-_m + e^{-i phi} s+_m)
//                       + Delta cos th sz_m - Delta I)
Operator c_plus_plus(int site, double theta, double phi, double delta, double j, int sites) {
  const Complex ep = std::exp(Complex(0, phi)), em = std::exp(Complex(0, -phi));
  return j * (std::sin(theta) * (ep * interior_embed(pauli(Pauli::Minus), site, sites) +
                                 em * interior_embed(pauli(Pauli::Plus), site, sites)) +
              delta * std::cos(theta) * interior_embed(pauli(Pauli::Z), site, sites) -
              delta * interior_identity(sites));
}

// C_{-+}(m, th, phi) = J(2 sin^2(th/2) e^{-i phi} s+_m
//                        - 2 cos^2(th/2) e^{i phi} s-_m + Delta sin th sz_m)
Operator c_minus_plus(int site, double theta, double phi, double delta, double j, int sites) {
  const Complex ep = std::exp(Complex(0, phi)), em = std::exp(Complex(0, -phi));
  const double s2 = std::sin(theta / 2), c2 = std::cos(theta / 2);
  return j * (2.0 * s2 * s2 * em * interior_embed(pauli(Pauli::Plus), site, sites) -
              2.0 * c2 * c2 * ep * interior_embed(pauli(Pauli::Minus), site, sites) +
              delta * std::sin(theta) * interior_embed(pauli(Pauli::Z), site, sites));
}

Operator c_plus_minus(int site, double theta, double phi, double delta, double j, int sites) {
  return c_minus_plus(site, theta, phi, delta, j, sites).adjoint();
}

Operator c_minus_minus(int site, double theta, double phi, double delta, double j, int sites) {
  const Complex ep = std::exp(Complex(0, phi)), em = std::exp(Complex(0, -phi));
  return j * (-std::sin(theta) * (ep * interior_embed(pauli(Pauli::Minus), site, sites) +
                                  em * interior_embed(pauli(Pauli::Plus), site, sites)) -
              delta * std::cos(theta) * interior_embed(pauli(Pauli::Z), site, sites) -
              delta * interior_identity(sites));
}

// interior chain Hamiltonian H' = sum_{j=2}^{N-2} h^XXZ_{j,j+1}
Operator interior_hamiltonian(double delta, double j, int sites) {
  Operator h = Operator::Zero(Eigen::Index(1) << (sites - 2), Eigen::Index(1) << (sites - 2));
  for (int bond = 2; bond <= sites - 2; ++bond)
    h += embed(local_density(delta, j), bond - 1, sites - 2);
  return h;
}

void require_interior(int sites, const char* what) {
  if (sites < 3)
    throw std::invalid_argument(std::string(what) + ": no interior sites for N = " +
                                std::to_string(sites));
}

}  // namespace

ZenoBasis zeno_basis(double theta, double total_twist, int sites) {
  if (sites < 2) throw std::invalid_argument("zeno_basis: need at least 2 sites");
  const Ket p1 = boundary_state(theta, 0.0);
  const Ket p1p = boundary_state_perp(theta, 0.0);
  const Ket pn = boundary_state(theta, total_twist);
  const Ket pnp = boundary_state_perp(theta, total_twist);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  ZenoBasis basis;
  basis.theta = theta;
  basis.total_twist = total_twist;
  basis.states[0] = kron(p1, pn);
  basis.states[1] = inv_sqrt2 * (kron(p1p, pn) - kron(p1, pnp));
  basis.states[2] = inv_sqrt2 * (kron(p1p, pn) + kron(p1, pnp));
  basis.states[3] = kron(p1p, pnp);
  return basis;
}

BlockDecomposition project_blocks(const Operator& hamiltonian, const ZenoBasis& basis,
                                  int sites) {
  require_interior(sites, "project_blocks");
  if (hamiltonian.rows() != (Eigen::Index(1) << sites))
    throw std::invalid_argument("project_blocks: dimension does not match site count");
  const auto slabs = boundary_slabs(hamiltonian, sites);
  const Eigen::Index d1 = Eigen::Index(1) << (sites - 2);

  BlockDecomposition out;
  out.sites = sites;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      Operator block = Operator::Zero(d1, d1);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const Complex w = std::conj(basis.states[j](a)) * basis.states[k](b);
          if (w != Complex(0)) block += w * slabs[a][b];
        }
      out.blocks[j][k] = std::move(block);
      out.present[j][k] = true;
    }
  return out;
}

BlockDecomposition closed_form_blocks(double theta, double total_twist, double delta,
                                      int sites, double j) {
  require_interior(sites, "closed_form_blocks");
  const Eigen::Index d1 = Eigen::Index(1) << (sites - 2);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const int left = 2, right = sites - 1;
  const double phi_l = 0.0, phi_r = total_twist;

  const Operator hp = interior_hamiltonian(delta, j, sites);
  const Operator cpp_l = c_plus_plus(left, theta, phi_l, delta, j, sites);
  const Operator cpp_r = c_plus_plus(right, theta, phi_r, delta, j, sites);
  const Operator cmp_l = c_minus_plus(left, theta, phi_l, delta, j, sites);
  const Operator cmp_r = c_minus_plus(right, theta, phi_r, delta, j, sites);
  const Operator cpm_l = c_plus_minus(left, theta, phi_l, delta, j, sites);
  const Operator cpm_r = c_plus_minus(right, theta, phi_r, delta, j, sites);
  const Operator cmm_l = c_minus_minus(left, theta, phi_l, delta, j, sites);
  const Operator cmm_r = c_minus_minus(right, theta, phi_r, delta, j, sites);

  BlockDecomposition out;
  out.sites = sites;
  for (auto& row : out.present) row.fill(false);
  auto set = [&out](int j_, int k_, Operator op) {
    out.blocks[j_][k_] = std::move(op);
    out.present[j_][k_] = true;
  };

  set(0, 0, hp + cpp_l + cpp_r);
  set(0, 1, inv_sqrt2 * (cmp_l - cmp_r));
  set(0, 2, inv_sqrt2 * (cmp_l + cmp_r));
  set(0, 3, Operator::Zero(d1, d1));
  set(2, 1, 0.5 * (cpp_r - cmm_r + cmm_l - cpp_l));
  set(3, 1, inv_sqrt2 * (-cpm_l + cpm_r));
  set(1, 1, hp - 2.0 * delta * identity(d1));

  // Hermitian conjugates of the blocks built above
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (out.present[a][b] && !out.present[b][a]) set(b, a, out.blocks[a][b].adjoint());
  return out;
}

Operator reconstruct_hamiltonian(const BlockDecomposition& decomposition,
                                 const ZenoBasis& basis) {
  const int sites = decomposition.sites;
  require_interior(sites, "reconstruct_hamiltonian");
  const Eigen::Index d1 = decomposition.interior_dim();
  const Eigen::Index dim = Eigen::Index(1) << sites;
  Operator h = Operator::Zero(dim, dim);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      if (!decomposition.present[j][k])
        throw std::invalid_argument("reconstruct_hamiltonian: missing block");
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const Complex w = basis.states[j](a) * std::conj(basis.states[k](b));
          if (w == Complex(0)) continue;
          for (Eigen::Index c = 0; c < d1; ++c)
            for (Eigen::Index cc = 0; cc < d1; ++cc)
              h(full_index(a, c, sites), full_index(b, cc, sites)) +=
                  w * decomposition.blocks[j][k](c, cc);
        }
    }
  return h;
}

Ket target_state(double theta, double twist_angle, int sites) {
  require_interior(sites, "target_state");
  Ket state = boundary_state(theta, twist_angle);
  for (int site = 3; site <= sites - 1; ++site)
    state = kron(state, boundary_state(theta, (site - 1) * twist_angle));
  return state;
}

PurityCondition purity_condition(double theta, double twist_angle, int sites, double delta,
                                 double j) {
  require_interior(sites, "purity_condition");
  const Operator h = xxz_hamiltonian(sites, j, delta);

  Ket psi = boundary_state(theta, 0.0);
  for (int site = 2; site <= sites; ++site)
    psi = kron(psi, boundary_state(theta, (site - 1) * twist_angle));

  const ZenoBasis basis = zeno_basis(theta, (sites - 1) * twist_angle, sites);
  const Ket target = target_state(theta, twist_angle, sites);
  const Eigen::Index d1 = Eigen::Index(1) << (sites - 2);
  Ket flip = Ket::Zero(psi.size());
  for (int a = 0; a < 4; ++a)
    for (Eigen::Index c = 0; c < d1; ++c)
      flip(full_index(a, c, sites)) = basis.states[1](a) * target(c);

  const Ket hpsi = h * psi;
  PurityCondition out;
  out.lambda = psi.dot(hpsi).real();
  out.kappa = flip.dot(hpsi);
  out.residual = (hpsi - out.lambda * psi - out.kappa * flip).norm();
  const double scale = std::max(1.0, hpsi.norm());
  out.holds = out.residual <= 1e-10 * scale;
  out.trivial = out.holds && std::abs(out.kappa) < 1e-12 * scale;
  return out;
}

PrincipalEigenvalue principal_eigencheck(const BlockDecomposition& decomposition,
                                         const Ket& target) {
  const Operator& h00 = decomposition.h(0, 0);
  if (target.size() != h00.rows())
    throw std::invalid_argument("principal_eigencheck: dimension mismatch");
  const Ket t = target / target.norm();
  PrincipalEigenvalue out;
  out.lambda = t.dot(h00 * t).real();
  out.residual = (h00 * t - out.lambda * t).norm();
  return out;
}

namespace {

struct TargetEigenbasis {
  double lambda0 = 0.0;
  double target_residual = 0.0;
  Eigen::MatrixXcd alphas;       // d1 x (d1-1), columns |alpha>
  Eigen::VectorXd eigenvalues;   // lambda_alpha per column
  Eigen::VectorXd full_spectrum; // all d1 eigenvalues, ascending
};

// Eigenbasis of h00 with |0> pinned to the target state. Eigendirections
// within `degtol` of lambda0 are re-orthogonalized against the target.
TargetEigenbasis target_adapted_eigenbasis(const Operator& h00, const Ket& target,
                                           double degtol) {
  const Eigen::Index d1 = h00.rows();
  const Ket t = target / target.norm();

  TargetEigenbasis out;
  out.lambda0 = t.dot(h00 * t).real();
  out.target_residual = (h00 * t - out.lambda0 * t).norm();

  Eigen::SelfAdjointEigenSolver<Operator> solver(h00);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gamma_ch: h00 eigensolver failed");
  out.full_spectrum = solver.eigenvalues();

  std::vector<Eigen::Index> group, rest;
  for (Eigen::Index i = 0; i < d1; ++i)
    (std::abs(solver.eigenvalues()(i) - out.lambda0) < degtol ? group : rest).push_back(i);

  out.alphas.resize(d1, d1 - 1);
  out.eigenvalues.resize(d1 - 1);
  Eigen::Index col = 0;

  if (!group.empty()) {
    // project the target out of the lambda0 eigenspace and re-orthonormalize;
    // the singular values are ~1 for genuine extra directions and ~1e-15 for
    // the direction the target itself occupied
    Eigen::MatrixXcd projected(d1, static_cast<Eigen::Index>(group.size()));
    for (std::size_t g = 0; g < group.size(); ++g) {
      const Ket v = solver.eigenvectors().col(group[g]);
      projected.col(static_cast<Eigen::Index>(g)) = v - t * t.dot(v);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(projected, Eigen::ComputeThinU);
    for (Eigen::Index g = 0; g < svd.singularValues().size(); ++g) {
      if (svd.singularValues()(g) < 1e-8) continue;
      if (col >= d1 - 1)
        throw std::runtime_error(
            "gamma_ch: target state is not an eigenvector of h00 within tolerance");
      const Ket v = svd.matrixU().col(g);
      out.alphas.col(col) = v;
      out.eigenvalues(col) = v.dot(h00 * v).real();
      ++col;
    }
  }
  for (Eigen::Index i : rest) {
    if (col >= d1 - 1)
      throw std::runtime_error(
          "gamma_ch: target state is not an eigenvector of h00 within tolerance");
    out.alphas.col(col) = solver.eigenvectors().col(i);
    out.eigenvalues(col) = solver.eigenvalues()(i);
    ++col;
  }
  if (col != d1 - 1)
    throw std::runtime_error(
        "gamma_ch: target-adapted eigenbasis has wrong dimension (target is not an "
        "eigenvector of h00 within tolerance)");
  return out;
}

}  // namespace

CharacteristicDissipation gamma_ch(double theta, double total_twist, int winding, int sites,
                                   double j) {
  require_interior(sites, "gamma_ch");
  const double twist = (total_twist + kTwoPi * winding) / (sites - 1);
  return gamma_ch_at_twist(theta, twist, sites, j);
}

CharacteristicDissipation gamma_ch_at_twist(double theta, double twist_angle, int sites,
                                            double j) {
  require_interior(sites, "gamma_ch");
  const double delta = std::cos(twist_angle);
  const Operator h = xxz_hamiltonian(sites, j, delta);
  const ZenoBasis basis = zeno_basis(theta, (sites - 1) * twist_angle, sites);
  const BlockDecomposition blocks = project_blocks(h, basis, sites);
  const Ket target = target_state(theta, twist_angle, sites);
  const Eigen::Index d1 = blocks.interior_dim();
  const Eigen::Index na = d1 - 1;

  CharacteristicDissipation cd;
  cd.kappa = target.dot(blocks.h(1, 0) * target);

  const TargetEigenbasis basis1 =
      target_adapted_eigenbasis(blocks.h(0, 0), target, tolerances.degeneracy);
  cd.lambda0 = basis1.lambda0;
  cd.spectrum = basis1.full_spectrum;
  cd.alpha_eigenvalues = basis1.eigenvalues;

  const Eigen::MatrixXcd& va = basis1.alphas;
  const Ket t = target / target.norm();

  // K_{ab} = sum_k (|<a|h^{k0}|b>|^2 - delta_ab <a|(h^{k0})+ h^{k0}|a>)
  cd.K = Eigen::MatrixXd::Zero(na, na);
  for (int k = 1; k < 4; ++k) {
    const Operator& hk0 = blocks.h(k, 0);
    const Eigen::MatrixXcd cols = hk0 * va;
    const Eigen::MatrixXcd elements = va.adjoint() * cols;
    cd.K += elements.cwiseAbs2();
    for (Eigen::Index a = 0; a < na; ++a) cd.K(a, a) -= cols.col(a).squaredNorm();
  }

  cd.couplings = va.adjoint() * (blocks.h(0, 1) * t);
  cd.h00_gap = na > 0 ? (cd.alpha_eigenvalues.array() - cd.lambda0).abs().minCoeff()
                      : std::numeric_limits<double>::infinity();

  // Lambda excludes near-degenerate directions; a coupled degeneracy means
  // the first-order expansion is inconsistent and Gamma_ch diverges.
  cd.degenerate_coupling = 0.0;
  bool coupled_degeneracy = false;
  Operator lambda_resolvent = Operator::Zero(d1, d1);
  for (Eigen::Index a = 0; a < na; ++a) {
    const double gap = std::abs(cd.alpha_eigenvalues(a) - cd.lambda0);
    if (gap < tolerances.degeneracy) {
      const double coupling = std::abs(cd.couplings(a));
      cd.degenerate_coupling = std::max(cd.degenerate_coupling, coupling);
      if (coupling > tolerances.coupling) coupled_degeneracy = true;
      continue;
    }
    lambda_resolvent +=
        (va.col(a) * va.col(a).adjoint()) / (cd.alpha_eigenvalues(a) - cd.lambda0);
  }

  // F = sum_k (h^{k1} + [Lambda h^{01}, h^{k0}])
  cd.F = Operator::Zero(d1, d1);
  const Operator lh01 = lambda_resolvent * blocks.h(0, 1);
  for (int k = 1; k < 4; ++k) {
    const Operator& hk0 = blocks.h(k, 0);
    cd.F += blocks.h(k, 1) + lh01 * hk0 - hk0 * lh01;
  }
  cd.R = (va.adjoint() * (cd.F * t)).cwiseAbs2();

  // spectral diagnostics of K
  const Eigen::EigenSolver<Eigen::MatrixXd> keig(cd.K, false);
  cd.k_min_eigenvalue = keig.eigenvalues().cwiseAbs().minCoeff();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cd.K);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(na - 1);

  if (coupled_degeneracy) {
    cd.divergence_reason = DivergenceReason::LambdaCoupledDegeneracy;
  } else if (smin <= tolerances.k_rcond * std::max(1.0, smax)) {
    // max(1, .) keeps the bound meaningful when K collapses entirely, as it
    // does for N = 3 at the free-fermion point
    cd.divergence_reason = DivergenceReason::KSingular;
  }
  if (!cd.finite()) {
    cd.gamma_ch_sq = std::numeric_limits<double>::infinity();
    cd.gamma_ch = std::numeric_limits<double>::infinity();
    return cd;
  }

  // K is negative semidefinite by construction while Gamma_ch^2 must come
  // out nonnegative; the N = 3 closed form fixes the overall sign used here.
  const Eigen::VectorXd solved = cd.K.partialPivLu().solve(cd.R);
  cd.gamma_ch_sq = -8.0 * std::norm(cd.kappa) * solved.sum();
  cd.gamma_ch = cd.gamma_ch_sq >= 0 ? std::sqrt(cd.gamma_ch_sq)
                                    : std::numeric_limits<double>::quiet_NaN();
  return cd;
}

double purity_prediction(double gamma_ch_value, double gamma) {
  const double ratio = gamma_ch_value / gamma;
  return ratio * ratio;
}

NessExpansionProbe ness_expansion_probe(const CharacteristicDissipation& cd) {
  const Eigen::Index na = cd.couplings.size();
  NessExpansionProbe probe;
  probe.m1 = Eigen::VectorXcd::Zero(na);
  for (Eigen::Index a = 0; a < na; ++a) {
    const double gap = cd.alpha_eigenvalues(a) - cd.lambda0;
    if (std::abs(gap) < tolerances.degeneracy) {
      if (std::abs(cd.couplings(a)) > tolerances.coupling)
        probe.degenerate_alphas.push_back(static_cast<int>(a));
      probe.m1(a) = 0;
      continue;
    }
    probe.m1(a) = 2.0 * Complex(0, 1) * cd.kappa * cd.couplings(a) / gap;
  }
  return probe;
}

double gamma_ch_n3_closed(double theta, double twist_angle) {
  const double s = std::sin(theta), sp = std::sin(twist_angle), tp = std::tan(twist_angle);
  return std::sqrt(8.0 * s * s * s * s * sp * sp * tp * tp);
}

double k_n3_closed(double theta, double twist_angle) {
  const double s = std::sin(theta);
  return -2.0 * (2.0 * std::cos(2.0 * twist_angle) * s * s + std::cos(2.0 * theta) + 3.0);
}

double c_ratio(int sites, double twist_angle, double theta) {
  const CharacteristicDissipation num = gamma_ch_at_twist(theta, twist_angle, sites);
  const CharacteristicDissipation den =
      gamma_ch_at_twist(std::numbers::pi / 2, twist_angle, sites);
  if (!num.finite() || !den.finite()) return std::numeric_limits<double>::quiet_NaN();
  return num.gamma_ch / den.gamma_ch;
}

}  // namespace helix
