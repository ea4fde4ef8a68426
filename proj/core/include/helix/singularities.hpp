#pragma once

#include <cstdint>
#include <vector>

#include "helix/types.hpp"

namespace helix {

// Reduced rational multiple of pi in (0, pi): value = pi * num / den.
struct RationalAngle {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const;
  static RationalAngle reduced(std::int64_t num, std::int64_t den);

  friend bool operator<(const RationalAngle& a, const RationalAngle& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator==(const RationalAngle& a, const RationalAngle& b) {
    return a.num == b.num && a.den == b.den;
  }
};

enum class AngleSetKind { OmegaStar, OmegaK, OmegaLambda };

struct SingularAngleSet {
  std::vector<RationalAngle> angles;  // sorted ascending, deduplicated
  int sites = 0;
  AngleSetKind kind = AngleSetKind::OmegaStar;

  bool contains(const RationalAngle& angle) const;
};

// Omega*_N = { pi d / k : k = 2..N-1, d = 1..k-1 }, equal ratios counted once.
SingularAngleSet omega_star(int sites);

// |Omega*_N| by exact counting over denominators (totient sums); does not
// materialize the set.
std::int64_t omega_star_cardinality(int sites);

// Omega^(K)_N = { pi d / (2k) : k = 1..floor((N-1)/2), d = 1..2k-1 },
// valid at theta = pi/2.
SingularAngleSet omega_k(int sites);

// Omega^(Lambda)_N = Omega*_N \ Omega^(K)_N
SingularAngleSet omega_lambda(int sites);

// |Omega*_N| for N = 3..max_sites in one totient sieve.
std::vector<std::int64_t> omega_star_cardinalities(int max_sites);

// Coefficient a of the least-squares fit |Omega*_N| ~ a N^2 + b N + c
// over N = 3..max_sites.
double omega_quadratic_coefficient(int max_sites);

enum class SingularClass { Regular, KSingular, LambdaCoupled };

struct ClassifyResult {
  double k_min_eigenvalue = 0.0;  // min |eig K|
  double h00_gap = 0.0;           // min_alpha |lambda_alpha - lambda_0|
  double coupling = 0.0;          // max |<alpha|h01|0>| over the gap-closing alphas
  SingularClass predicted = SingularClass::Regular;
};

// Numerical divergence classifier at twisting angle varphi (Delta = cos
// varphi internally). Thresholds are relative to the matrix scales and are
// validated against the analytic sets at small N.
ClassifyResult classify_numerically(double varphi, double theta, int sites);

}  // namespace helix
