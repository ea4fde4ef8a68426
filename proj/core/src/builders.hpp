// Scalar-generic constructors for the physical operators. The double
// instantiation backs the public model API; the long double instantiation
// backs the extended-precision steady-state path, where the purity defect
// falls below what double-rounded matrix entries can resolve.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "helix/model.hpp"

namespace helix::detail {

template <typename Real>
struct Kernels {
  using C = std::complex<Real>;
  using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  using Sparse = Eigen::SparseMatrix<C>;

  static Mat sigma_x() {
    Mat m(2, 2);
    m << C(0), C(1), C(1), C(0);
    return m;
  }
  static Mat sigma_y() {
    Mat m(2, 2);
    m << C(0), C(0, -1), C(0, 1), C(0);
    return m;
  }
  static Mat sigma_z() {
    Mat m(2, 2);
    m << C(1), C(0), C(0), C(-1);
    return m;
  }
  static Mat sigma_plus() {
    Mat m(2, 2);
    m << C(0), C(1), C(0), C(0);
    return m;
  }
  static Mat sigma_minus() {
    Mat m(2, 2);
    m << C(0), C(0), C(1), C(0);
    return m;
  }
  static Mat identity(Eigen::Index dim) { return Mat::Identity(dim, dim); }

  static Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  }

  static Mat embed(const Mat& op, int first_site, int sites, int op_sites) {
    const Eigen::Index left = Eigen::Index(1) << (first_site - 1);
    const Eigen::Index right = Eigen::Index(1) << (sites - first_site - op_sites + 1);
    return kron(kron(identity(left), op), identity(right));
  }

  // J (sx sx + sy sy + Delta (sz sz - I)) on two sites
  static Mat local_density(Real j, Real delta) {
    Mat h = kron(sigma_x(), sigma_x()) + kron(sigma_y(), sigma_y()) +
            delta * (kron(sigma_z(), sigma_z()) - identity(4));
    return j * h;
  }

  static Mat xxz(int sites, Real j, Real delta) {
    const Eigen::Index dim = Eigen::Index(1) << sites;
    Mat h = Mat::Zero(dim, dim);
    const Mat local = local_density(j, delta);
    for (int bond = 1; bond < sites; ++bond) h += embed(local, bond, sites, 2);
    return h;
  }

  // sqrt(Gamma)/2 (-sin(theta) sz + (1+cos) e^{-i phi} s+ + (-1+cos) e^{+i phi} s-)
  static Mat lindblad_site(Real theta, Real phi, Real gamma) {
    using std::cos;
    using std::exp;
    using std::sin;
    using std::sqrt;
    const C phase_minus = exp(C(0, -phi));
    const C phase_plus = exp(C(0, phi));
    Mat m = -sin(theta) * sigma_z() + (Real(1) + cos(theta)) * phase_minus * sigma_plus() +
            (Real(-1) + cos(theta)) * phase_plus * sigma_minus();
    return (sqrt(gamma) / Real(2)) * m;
  }

  // Lindblad superoperator in column-stacking convention: the map
  // A rho B becomes (B^T otimes A) acting on vec(rho).
  static Sparse superoperator(const ChainSpec& spec) {
    const int n = spec.sites;
    const Eigen::Index dim = Eigen::Index(1) << n;
    const Mat h = xxz(n, Real(spec.coupling), Real(spec.anisotropy));
    const Mat l1 = embed(lindblad_site(Real(spec.theta_left), Real(spec.phi_left),
                                       Real(spec.gamma)),
                         1, n, 1);
    const Mat l2 = embed(lindblad_site(Real(spec.theta_right), Real(spec.phi_right),
                                       Real(spec.gamma)),
                         n, n, 1);

    const Eigen::Index sdim = dim * dim;
    std::vector<Eigen::Triplet<C>> trip;
    trip.reserve(static_cast<std::size_t>(dim) * dim * 8);

    // vec index of rho(r, c) is r + c * dim
    auto add_left = [&](const Mat& a, C w) {  // w * (A rho)
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < dim; ++r)
          for (Eigen::Index k = 0; k < dim; ++k)
            if (a(r, k) != C(0)) trip.emplace_back(r + c * dim, k + c * dim, w * a(r, k));
    };
    auto add_right = [&](const Mat& b, C w) {  // w * (rho B)
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index k = 0; k < dim; ++k)
          if (b(k, c) != C(0))
            for (Eigen::Index r = 0; r < dim; ++r)
              trip.emplace_back(r + c * dim, r + k * dim, w * b(k, c));
    };
    auto add_both = [&](const Mat& a, const Mat& b, C w) {  // w * (A rho B)
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index k2 = 0; k2 < dim; ++k2) {
          if (b(k2, c) == C(0)) continue;
          for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index k1 = 0; k1 < dim; ++k1)
              if (a(r, k1) != C(0))
                trip.emplace_back(r + c * dim, k1 + k2 * dim, w * a(r, k1) * b(k2, c));
        }
    };

    add_left(h, C(0, -1));
    add_right(h, C(0, 1));
    for (const Mat* l : {&l1, &l2}) {
      const Mat ld = l->adjoint();
      const Mat ldl = ld * (*l);
      add_both(*l, ld, C(1));
      add_left(ldl, C(Real(-0.5)));
      add_right(ldl, C(Real(-0.5)));
    }

    Sparse s(sdim, sdim);
    s.setFromTriplets(trip.begin(), trip.end());
    s.prune([](Eigen::Index, Eigen::Index, const C& v) { return v != C(0); });
    s.makeCompressed();
    return s;
  }
};

}  // namespace helix::detail
