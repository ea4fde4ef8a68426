#include "helix/singularities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

#include "helix/zeno.hpp"

namespace helix {

double RationalAngle::value() const {
  return std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
}

RationalAngle RationalAngle::reduced(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0 || num >= den)
    throw std::invalid_argument("RationalAngle: ratio must lie in (0, 1)");
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

bool SingularAngleSet::contains(const RationalAngle& angle) const {
  return std::binary_search(angles.begin(), angles.end(), angle);
}

SingularAngleSet omega_star(int sites) {
  if (sites < 3) throw std::invalid_argument("omega_star: need at least 3 sites");
  std::set<RationalAngle> acc;
  for (int k = 2; k <= sites - 1; ++k)
    for (int d = 1; d < k; ++d) acc.insert(RationalAngle::reduced(d, k));
  SingularAngleSet out;
  out.sites = sites;
  out.kind = AngleSetKind::OmegaStar;
  out.angles.assign(acc.begin(), acc.end());
  return out;
}

std::int64_t omega_star_cardinality(int sites) {
  if (sites < 3) throw std::invalid_argument("omega_star_cardinality: need at least 3 sites");
  const auto counts = omega_star_cardinalities(sites);
  return counts.back();
}

std::vector<std::int64_t> omega_star_cardinalities(int max_sites) {
  if (max_sites < 3)
    throw std::invalid_argument("omega_star_cardinalities: need at least 3 sites");
  // totient sieve up to the largest denominator
  const int n = max_sites - 1;
  std::vector<std::int64_t> phi(n + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (int p = 2; p <= n; ++p)
    if (phi[p] == p)  // p prime
      for (int q = p; q <= n; q += p) phi[q] -= phi[q] / p;

  std::vector<std::int64_t> counts;  // counts[i] = |Omega*_{i+3}|
  counts.reserve(max_sites - 2);
  std::int64_t running = 0;
  for (int sites = 3; sites <= max_sites; ++sites) {
    running += phi[sites - 1];
    counts.push_back(running);
  }
  return counts;
}

double omega_quadratic_coefficient(int max_sites) {
  const auto counts = omega_star_cardinalities(max_sites);
  // normal equations for y ~ a n^2 + b n + c
  double s4 = 0, s3 = 0, s2 = 0, s1 = 0, s0 = 0;
  double t2 = 0, t1 = 0, t0 = 0;
  for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
    const double n = i + 3;
    const double y = static_cast<double>(counts[i]);
    const double n2 = n * n;
    s4 += n2 * n2;
    s3 += n2 * n;
    s2 += n2;
    s1 += n;
    s0 += 1;
    t2 += y * n2;
    t1 += y * n;
    t0 += y;
  }
  Eigen::Matrix3d m;
  m << s4, s3, s2, s3, s2, s1, s2, s1, s0;
  Eigen::Vector3d rhs(t2, t1, t0);
  return m.ldlt().solve(rhs)(0);
}

SingularAngleSet omega_k(int sites) {
  if (sites < 3) throw std::invalid_argument("omega_k: need at least 3 sites");
  std::set<RationalAngle> acc;
  for (int k = 1; k <= (sites - 1) / 2; ++k)
    for (int d = 1; d < 2 * k; ++d) acc.insert(RationalAngle::reduced(d, 2 * k));
  SingularAngleSet out;
  out.sites = sites;
  out.kind = AngleSetKind::OmegaK;
  out.angles.assign(acc.begin(), acc.end());
  return out;
}

SingularAngleSet omega_lambda(int sites) {
  const SingularAngleSet star = omega_star(sites);
  const SingularAngleSet k = omega_k(sites);
  SingularAngleSet out;
  out.sites = sites;
  out.kind = AngleSetKind::OmegaLambda;
  std::set_difference(star.angles.begin(), star.angles.end(), k.angles.begin(),
                      k.angles.end(), std::back_inserter(out.angles));
  return out;
}

ClassifyResult classify_numerically(double varphi, double theta, int sites) {
  const CharacteristicDissipation cd = gamma_ch_at_twist(theta, varphi, sites);

  ClassifyResult out;
  out.k_min_eigenvalue = cd.k_min_eigenvalue;
  out.h00_gap = cd.h00_gap;

  // coupling at the gap-closing directions (ties included)
  const double gap_window = std::max(cd.h00_gap * (1 + 1e-6), 1e-12);
  for (Eigen::Index a = 0; a < cd.couplings.size(); ++a)
    if (std::abs(cd.alpha_eigenvalues(a) - cd.lambda0) <= gap_window)
      out.coupling = std::max(out.coupling, std::abs(cd.couplings(a)));

  const double k_scale = std::max(1.0, cd.K.cwiseAbs().maxCoeff());
  const double gap_scale =
      std::max(1.0, cd.spectrum.cwiseAbs().maxCoeff());
  const double coupling_scale = 1.0;

  if (cd.k_min_eigenvalue < tolerances.singular_scale * k_scale)
    out.predicted = SingularClass::KSingular;
  else if (cd.h00_gap < tolerances.singular_scale * gap_scale &&
           out.coupling > tolerances.singular_scale * coupling_scale)
    out.predicted = SingularClass::LambdaCoupled;
  else
    out.predicted = SingularClass::Regular;
  return out;
}

}  // namespace helix
