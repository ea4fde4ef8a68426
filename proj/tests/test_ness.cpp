#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helix/gft.hpp"
#include "helix/ness.hpp"
#include "helix/operator_algebra.hpp"
#include "helix/zeno.hpp"
#include "test_support.hpp"

using namespace helix;
using helix::testing::kPi;
using helix::testing::max_abs;
using helix::testing::random_spec;

namespace {

// dense right-hand side of the master equation, independent of the
// superoperator assembly
Operator master_rhs(const ChainSpec& spec, const Operator& rho) {
  const Operator h = xxz_hamiltonian(spec);
  Operator out = Complex(0, -1) * (h * rho - rho * h);
  for (Side side : {Side::Left, Side::Right}) {
    const Operator l = lindblad_operator(side, spec);
    const Operator ld = l.adjoint();
    const Operator ldl = ld * l;
    out += l * rho * ld - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

Eigen::VectorXcd vec(const Operator& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

}  // namespace

TEST_CASE("liouvillian matches the dense right-hand side") {
  const ChainSpec spec = random_spec(3);
  const Liouvillian liouville = build_liouvillian(spec);
  for (int trial = 0; trial < 5; ++trial) {
    const Operator rho = helix::testing::random_hermitian(8);
    const Eigen::VectorXcd lhs = liouville.superoperator * vec(rho);
    const Eigen::VectorXcd rhs = vec(master_rhs(spec, rho));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("unitary part annihilates the identity") {
  // on rho = I the commutator drops out and only the dissipator acts
  const ChainSpec spec = random_spec(3);
  const Liouvillian liouville = build_liouvillian(spec);
  const Operator id = identity(8) / 8.0;
  Operator dissipator_only = Operator::Zero(8, 8);
  for (Side side : {Side::Left, Side::Right}) {
    const Operator l = lindblad_operator(side, spec);
    const Operator ldl = l.adjoint() * l;
    dissipator_only += l * id * l.adjoint() - 0.5 * (ldl * id + id * ldl);
  }
  CHECK((liouville.superoperator * vec(id) - vec(dissipator_only)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("trace preservation") {
  const ChainSpec spec = random_spec(4);
  CHECK(trace_preservation_defect(build_liouvillian(spec)) < 1e-10 * spec.gamma);
}

TEST_CASE("memory cap") {
  ChainSpec spec = random_spec(4);
  spec.sites = 8;
  CHECK_THROWS_AS(build_liouvillian(spec), std::invalid_argument);
}

TEST_CASE("matched aligned baths pin the all-up state") {
  ChainSpec spec;
  spec.sites = 2;
  spec.anisotropy = helix::testing::uniform(-1, 1);
  spec.gamma = 1.7;
  spec.theta_left = spec.theta_right = 0.0;
  spec.phi_left = spec.phi_right = 0.0;
  const NessResult result = solve_ness(build_liouvillian(spec), 1e-10);
  Operator expected = Operator::Zero(4, 4);
  expected(0, 0) = 1.0;
  CHECK(max_abs(result.rho.op - expected) < 1e-10);
  CHECK(result.kernel_multiplicity == 1);
}

TEST_CASE("solver invariants on random specs") {
  for (int trial = 0; trial < 4; ++trial) {
    const ChainSpec spec = random_spec(3 + trial % 2);
    const NessResult result = solve_ness(build_liouvillian(spec), 1e-10);
    CHECK(result.residual <= 1e-10);
    CHECK_NOTHROW(result.rho.validate());
    CHECK(result.kernel_multiplicity == 1);

    const NessObservables obs = observables(result.rho, spec);
    double lo = obs.spin_current[0], hi = obs.spin_current[0];
    for (double c : obs.spin_current) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    CHECK(hi - lo < 1e-8);
  }
}

TEST_CASE("steady state agrees with the dense null-space oracle") {
  // full SVD of the dense superoperator: the right-singular vector of the
  // smallest singular value spans the kernel
  for (int sites : {3, 4}) {
    const ChainSpec spec = random_spec(sites);
    const Liouvillian liouville = build_liouvillian(spec);
    const Operator dense = liouville.superoperator.toDense();
    Eigen::JacobiSVD<Operator> svd(dense, Eigen::ComputeThinV);
    const Eigen::Index last = svd.singularValues().size() - 1;
    CHECK(svd.singularValues()(last) < 1e-10);          // a kernel exists
    CHECK(svd.singularValues()(last - 1) > 1e-6);       // and it is simple
    const Operator raw =
        Eigen::Map<const Operator>(svd.matrixV().col(last).data(),
                                   liouville.hilbert_dim(), liouville.hilbert_dim());
    Operator kernel = 0.5 * (raw + raw.adjoint());
    kernel /= kernel.trace().real();

    const NessResult result = solve_ness(liouville, 1e-10);
    CHECK(trace_distance(result.rho, DensityMatrix{kernel, sites}) < 1e-8);
  }
}

TEST_CASE("steady state agrees with long-time evolution") {
  const ChainSpec spec = random_spec(3);
  const Liouvillian liouville = build_liouvillian(spec);
  const NessResult direct = solve_ness(liouville, 1e-10);

  DensityMatrix rho = maximally_mixed(3);
  for (int segment = 0; segment < 8; ++segment) {
    rho = evolve(liouville, rho, 100.0, 0.01);
    if (trace_distance(rho, direct.rho) < 1e-8) break;
  }
  CHECK(trace_distance(rho, direct.rho) < 1e-6);
}

TEST_CASE("zeno-regime purity follows the characteristic dissipation") {
  // N = 3 at matched anisotropy: eps ~ (Gamma_ch / Gamma)^2
  const double theta = kPi / 2, total = kPi / 5;
  const double twist = total / 2;
  ChainSpec spec;
  spec.sites = 3;
  spec.anisotropy = std::cos(twist);
  spec.theta_left = spec.theta_right = theta;
  spec.phi_right = total;
  spec.gamma = 1000.0;
  const NessResult result = solve_ness(build_liouvillian(spec), 1e-10);
  const double predicted =
      purity_prediction(gamma_ch_at_twist(theta, twist, 3).gamma_ch, spec.gamma);
  CHECK(result.purity_defect == doctest::Approx(predicted).epsilon(0.2));
}

TEST_CASE("zeno trend: purity defect scales as 1/Gamma^2") {
  const double theta = kPi / 2, total = kPi / 5;
  const double twist = total / 3;  // N = 4, m = 0
  ChainSpec spec;
  spec.sites = 4;
  spec.anisotropy = std::cos(twist);
  spec.theta_left = spec.theta_right = theta;
  spec.phi_right = total;

  double eps[3];
  const double gammas[3] = {1e2, 1e3, 1e4};
  for (int i = 0; i < 3; ++i) {
    spec.gamma = gammas[i];
    SolveOptions options;  // Auto escalates to extended precision here
    eps[i] = solve_ness(build_liouvillian(spec), options).purity_defect;
  }
  CHECK(eps[0] > eps[1]);
  CHECK(eps[1] > eps[2]);
  const double slope = std::log(eps[2] / eps[1]) / std::log(gammas[2] / gammas[1]);
  CHECK(slope > -2.1);
  CHECK(slope < -1.9);
}

TEST_CASE("free-fermion twist leaves a mixed steady state") {
  // N = 3, phi = pi/2, Delta = 0: purity approaches 2^-(N-2) = 1/2
  ChainSpec spec;
  spec.sites = 3;
  spec.anisotropy = 0.0;
  spec.theta_left = spec.theta_right = kPi / 2;
  spec.phi_right = kPi;  // (N-1) * pi/2 mod 2pi
  spec.gamma = 1000.0;
  const NessResult result = solve_ness(build_liouvillian(spec), 1e-10);
  const double purity = 1.0 - result.purity_defect;
  CHECK(std::abs(purity - 0.5) < 0.05);
}

TEST_CASE("evolve") {
  SUBCASE("negligible dissipation freezes Hamiltonian eigenprojectors") {
    ChainSpec spec = random_spec(3);
    spec.gamma = 1e-12;
    const Spectrum spectrum = hermitian_spectrum(xxz_hamiltonian(spec));
    const Ket ground = spectrum.eigenvectors.col(0);
    const DensityMatrix rho0 = pure_state(ground);
    const DensityMatrix rho1 = evolve(build_liouvillian(spec), rho0, 2.0, 0.005);
    CHECK(trace_distance(rho0, rho1) < 1e-9);
  }

  SUBCASE("purity stays within physical bounds") {
    const ChainSpec spec = random_spec(3);
    const Liouvillian liouville = build_liouvillian(spec);
    DensityMatrix rho = maximally_mixed(3);
    for (int segment = 0; segment < 5; ++segment) {
      rho = evolve(liouville, rho, 5.0, 0.01);
      const double purity = 1.0 - purity_defect(rho);
      CHECK(purity >= 1.0 / 8 - 1e-9);
      CHECK(purity <= 1.0 + 1e-9);
      CHECK_NOTHROW(rho.validate());
    }
  }

  SUBCASE("oversized steps are rejected") {
    ChainSpec spec = random_spec(3);
    spec.gamma = 4.0;
    const Liouvillian liouville = build_liouvillian(spec);
    CHECK_THROWS_AS(evolve(liouville, maximally_mixed(3), 50.0, 1.0), std::runtime_error);
  }

  SUBCASE("reports the trace drift") {
    const ChainSpec spec = random_spec(3);
    double drift = -1.0;
    evolve(build_liouvillian(spec), maximally_mixed(3), 1.0, 0.01, &drift);
    CHECK(drift >= 0.0);
    CHECK(drift <= 1e-9);
  }
}

TEST_CASE("observables") {
  SUBCASE("spin-helix projector") {
    SpinHelixSpec helix_spec{4, 0.8, kPi / 7, 1};
    ChainSpec spec;
    spec.sites = 4;
    spec.anisotropy = std::cos(helix_spec.twist_angle());
    spec.theta_left = spec.theta_right = helix_spec.theta;
    spec.phi_right = helix_spec.total_twist;
    const DensityMatrix rho = pure_state(shs_state(helix_spec));
    const NessObservables obs = observables(rho, spec);
    CHECK(obs.vne_entropy < 1e-10);
    CHECK(std::abs(obs.purity_defect) < 1e-12);
    for (double je : obs.energy_current) CHECK(std::abs(je) < 1e-10);
  }

  SUBCASE("maximally mixed two sites") {
    ChainSpec spec;
    spec.sites = 2;
    spec.gamma = 1.0;
    const NessObservables obs = observables(maximally_mixed(2), spec);
    CHECK(obs.vne_entropy == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(obs.purity_defect == doctest::Approx(0.75).epsilon(1e-12));
  }

  SUBCASE("entropy rejects unphysical states") {
    DensityMatrix bad = maximally_mixed(2);
    bad.op(0, 0) += 2e-8;
    bad.op(1, 1) -= 0.25 + 1e-7;  // negative eigenvalue below the clamp
    CHECK_THROWS(vne_entropy(bad));
  }
}

TEST_CASE("degenerate steady spaces are reported, not averaged") {
  // pure dephasing on one of two sites: every sz-diagonal state is steady
  ChainSpec spec;
  spec.sites = 2;
  spec.gamma = 1.0;
  spec.anisotropy = 0.0;
  Liouvillian liouville;
  liouville.spec = spec;
  const Operator l = embed(pauli(Pauli::Z), 1, 2);
  const Operator id = identity(4);
  const Operator ldl = l.adjoint() * l;
  Operator super = kron(l.conjugate(), l) - 0.5 * kron(id, ldl) -
                   0.5 * kron(ldl.transpose(), id);
  liouville.superoperator = super.sparseView();
  const NessResult result = solve_ness(liouville, 1e-10);
  CHECK(result.kernel_multiplicity > 1);
}

TEST_CASE("density matrix validation") {
  DensityMatrix ok = maximally_mixed(2);
  CHECK_NOTHROW(ok.validate());

  DensityMatrix bad = ok;
  bad.op(0, 1) = 0.3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ok;
  bad.op *= 1.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
