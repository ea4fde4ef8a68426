#pragma once

#include <array>

#include "helix/model.hpp"
#include "helix/types.hpp"

namespace helix {

// Orthonormal 4-frame on the boundary pair (sites 1 and N). Index a of a
// boundary-pair amplitude is 2*b_1 + b_N with the usual site convention.
// e0 is the state targeted by the dissipation.
struct ZenoBasis {
  std::array<Eigen::Vector4cd, 4> states;  // e0..e3
  double theta = 0.0;
  double total_twist = 0.0;  // azimuthal angle of the site-N factor
};

// e0 = psi(th,0) x psi(th,Phi), e1/e2 the odd/even boundary-flip
// combinations, e3 = psi_perp(th,0) x psi_perp(th,Phi).
ZenoBasis zeno_basis(double theta, double total_twist, int sites);

// The 16 operators h^{jk} acting on the interior (sites 2..N-1), obtained
// by splitting the Hamiltonian over a ZenoBasis: H = sum |e^j><e^k| x h^{jk}.
struct BlockDecomposition {
  std::array<std::array<Operator, 4>, 4> blocks;
  std::array<std::array<bool, 4>, 4> present;  // closed forms are partial
  int sites = 0;

  const Operator& h(int j, int k) const { return blocks[j][k]; }
  Eigen::Index interior_dim() const { return Eigen::Index(1) << (sites - 2); }
};

// h^{jk} = tr_b((|e^k><e^j| x I_{2..N-1}) H); requires an interior (N >= 3).
BlockDecomposition project_blocks(const Operator& hamiltonian, const ZenoBasis& basis,
                                  int sites);

// The analytically available blocks: h^{00}, h^{01}, h^{02}, h^{03},
// h^{21}, h^{31}, h^{11} and their Hermitian conjugates. The remaining four
// have no closed form here and are flagged absent.
BlockDecomposition closed_form_blocks(double theta, double total_twist, double delta,
                                      int sites, double j = 1.0);

// Sum |e^j><e^k| x h^{jk} mapped back to the physical site ordering.
Operator reconstruct_hamiltonian(const BlockDecomposition& decomposition,
                                 const ZenoBasis& basis);

// Interior product state psi_target = prod_{j=2}^{N-1} psi(theta, (j-1) phi).
Ket target_state(double theta, double twist_angle, int sites);

// Checks H|Psi> = lambda |Psi> + kappa |psi_perp_Zeno> x |psi_target> by
// explicit residual projection. For Delta = cos(phi) the condition holds
// with lambda = 0, kappa = -i J sqrt(2) sin(theta) sin(phi).
struct PurityCondition {
  bool holds = false;
  double lambda = 0.0;
  Complex kappa;
  double residual = 0.0;  // norm of the part outside span{Psi, e1 x target}
  bool trivial = false;   // holds with kappa = 0 (Psi is an exact eigenstate)
};
PurityCondition purity_condition(double theta, double twist_angle, int sites, double delta,
                                 double j = 1.0);

// Rayleigh quotient of h^{00} on the target state plus the eigen-residual
// ||h00 |t> - lambda |t>||; lambda = 0 at Delta = cos(phi).
struct PrincipalEigenvalue {
  double lambda = 0.0;
  double residual = 0.0;
};
PrincipalEigenvalue principal_eigencheck(const BlockDecomposition& decomposition,
                                         const Ket& target);

enum class DivergenceReason { None, KSingular, LambdaCoupledDegeneracy };

// Everything Eqs. of the convergence theory produce for one (theta, Phi, m, N):
// the h^{00} spectrum in the target-adapted eigenbasis, the K matrix, the
// R vector, F, and the characteristic dissipation, or a divergence flag.
struct CharacteristicDissipation {
  double lambda0 = 0.0;              // principal eigenvalue
  Complex kappa;                     // boundary-flip coupling of the target
  Eigen::VectorXd spectrum;          // all eigenvalues of h^{00}, ascending
  Eigen::MatrixXd K;                 // (d1-1) x (d1-1)
  Eigen::VectorXd R;                 // R_alpha = |<alpha|F|0>|^2
  Operator F;
  Eigen::VectorXcd couplings;        // <alpha|h^{01}|0>, alpha = 1..d1-1
  Eigen::VectorXd alpha_eigenvalues; // lambda_alpha matching `couplings`
  double gamma_ch_sq = 0.0;
  double gamma_ch = 0.0;             // +infinity when divergent
  DivergenceReason divergence_reason = DivergenceReason::None;

  double k_min_eigenvalue = 0.0;     // min |eig K|
  double h00_gap = 0.0;              // min_alpha |lambda_alpha - lambda0|
  double degenerate_coupling = 0.0;  // max coupling over the degenerate alphas

  bool finite() const { return divergence_reason == DivergenceReason::None; }
};

// Characteristic dissipation for the helix (theta, Phi, m) on N sites with
// the anisotropy fixed internally to cos(phi(m)).
CharacteristicDissipation gamma_ch(double theta, double total_twist, int winding, int sites,
                                   double j = 1.0);

// Same, addressed by the twisting angle phi directly.
CharacteristicDissipation gamma_ch_at_twist(double theta, double twist_angle, int sites,
                                            double j = 1.0);

// epsilon(Gamma) = (Gamma_ch / Gamma)^2
double purity_prediction(double gamma_ch_value, double gamma);

// First-order expansion coefficients M^(1)_{alpha 0} = 2 i kappa
// <alpha|h01|0> / (lambda_alpha - lambda0); undefined entries are listed in
// degenerate_alphas (coupled degeneracies, the actual divergence witnesses).
struct NessExpansionProbe {
  Eigen::VectorXcd m1;
  std::vector<int> degenerate_alphas;
};
NessExpansionProbe ness_expansion_probe(const CharacteristicDissipation& cd);

// Appendix closed forms for N = 3 and the theta-dependence ratio.
double gamma_ch_n3_closed(double theta, double twist_angle);
double k_n3_closed(double theta, double twist_angle);

// C_N(phi, theta) = Gamma_ch(N, phi, theta) / Gamma_ch(N, phi, pi/2)
double c_ratio(int sites, double twist_angle, double theta);

}  // namespace helix
