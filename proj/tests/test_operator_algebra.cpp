#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helix/operator_algebra.hpp"
#include "helix/model.hpp"
#include "test_support.hpp"

using namespace helix;
using helix::testing::kPi;
using helix::testing::max_abs;

TEST_CASE("pauli matrices") {
  CHECK(max_abs(pauli(Pauli::Z) - (Operator(2, 2) << 1, 0, 0, -1).finished()) == 0.0);

  Ket down(2);
  down << 0, 1;
  Ket up(2);
  up << 1, 0;
  CHECK((pauli(Pauli::Plus) * down - up).norm() == 0.0);
  CHECK((pauli(Pauli::Minus) * up - down).norm() == 0.0);

  CHECK(max_abs(pauli(Pauli::X) * pauli(Pauli::X) - identity(2)) == 0.0);
  CHECK(max_abs(pauli(Pauli::Y) * pauli(Pauli::Y) - identity(2)) == 0.0);
  // sigma+- = (sx +- i sy)/2
  CHECK(max_abs(pauli(Pauli::Plus) -
                0.5 * (pauli(Pauli::X) + Complex(0, 1) * pauli(Pauli::Y))) == 0.0);
}

TEST_CASE("embed places operators by site") {
  CHECK(max_abs(embed(pauli(Pauli::Z), 1, 2) - kron(pauli(Pauli::Z), identity(2))) == 0.0);
  CHECK(max_abs(embed(pauli(Pauli::Z), 2, 2) - kron(identity(2), pauli(Pauli::Z))) == 0.0);

  // trace picks up 2^(N-m) from the identity factors
  const Operator a = helix::testing::random_hermitian(4);
  const Operator e = embed(a, 2, 5);
  CHECK(std::abs(e.trace() - a.trace() * 8.0) < 1e-12);

  CHECK_THROWS_AS(embed(pauli(Pauli::X), 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed(a, 3, 3), std::invalid_argument);
}

TEST_CASE("embedded operators on disjoint supports commute") {
  const Pauli axes[] = {Pauli::X, Pauli::Y, Pauli::Z, Pauli::Plus};
  for (Pauli a : axes)
    for (Pauli b : axes) {
      const Operator lhs = embed(pauli(a), 1, 4) * embed(pauli(b), 3, 4);
      const Operator rhs = embed(pauli(b), 3, 4) * embed(pauli(a), 1, 4);
      CHECK(max_abs(lhs - rhs) == 0.0);
    }
}

TEST_CASE("partial trace") {
  const Operator rho = helix::testing::random_hermitian(2);
  Operator sigma = helix::testing::random_hermitian(4);
  sigma /= sigma.trace();

  SUBCASE("product state reduces to its factor") {
    const Operator joint = kron(rho, sigma);
    CHECK(max_abs(partial_trace(joint, {1}) - rho) < 1e-12);
    CHECK(max_abs(partial_trace(joint, {2, 3}) - sigma * rho.trace()) < 1e-12);
  }

  SUBCASE("trace is preserved") {
    const Operator a = helix::testing::random_hermitian(16);
    for (const std::vector<int>& keep :
         {std::vector<int>{1}, {2, 4}, {1, 2, 3}, {1, 2, 3, 4}})
      CHECK(std::abs(partial_trace(a, keep).trace() - a.trace()) < 1e-12);
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(partial_trace(sigma, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(sigma, {3}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(sigma, {1, 1}), std::invalid_argument);
  }
}

TEST_CASE("partial trace of an SHS projector leaves the interior helix") {
  // tracing out the boundary spins of |Psi><Psi| keeps the interior product
  SpinHelixSpec helix_spec{4, 0.9, kPi / 7, 1};
  const Ket psi = shs_state(helix_spec);
  const Operator projector = psi * psi.adjoint();
  const Operator reduced = partial_trace(projector, {2, 3});

  const double phi = helix_spec.twist_angle();
  const Ket target = kron(boundary_state(helix_spec.theta, phi),
                          boundary_state(helix_spec.theta, 2 * phi));
  CHECK(max_abs(reduced - target * target.adjoint()) < 1e-12);
}

TEST_CASE("dagger is an involution") {
  const Operator a = kron(helix::testing::random_hermitian(4),
                          pauli(Pauli::Plus));
  CHECK(max_abs(dagger(dagger(a)) - a) == 0.0);
}

TEST_CASE("hermitian spectrum") {
  const Spectrum z = hermitian_spectrum(pauli(Pauli::Z));
  CHECK(z.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(z.eigenvalues(1) == doctest::Approx(1.0));

  const Spectrum id4 = hermitian_spectrum(identity(4));
  for (int i = 0; i < 4; ++i) CHECK(id4.eigenvalues(i) == doctest::Approx(1.0));

  // XXZ on two sites at Delta = 1: singlet at -4, triplet at 0
  const Spectrum xxz = hermitian_spectrum(xxz_hamiltonian(2, 1.0, 1.0));
  CHECK(xxz.eigenvalues(0) == doctest::Approx(-4.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(xxz.eigenvalues(i)) < 1e-12);

  SUBCASE("reconstruction") {
    const Operator a = helix::testing::random_hermitian(8);
    const Spectrum s = hermitian_spectrum(a);
    const Operator back = s.eigenvectors * s.eigenvalues.asDiagonal() *
                          s.eigenvectors.adjoint();
    CHECK(max_abs(back - a) < 1e-10 * max_abs(a));
  }

  SUBCASE("rejects non-Hermitian input") {
    CHECK_THROWS_AS(hermitian_spectrum(pauli(Pauli::Plus)), std::invalid_argument);
  }
}

TEST_CASE("site_count rejects non power-of-two dimensions") {
  CHECK(site_count(identity(8)) == 3);
  const Operator odd = Operator::Zero(3, 3);
  CHECK_THROWS_AS(site_count(odd), std::invalid_argument);
}
