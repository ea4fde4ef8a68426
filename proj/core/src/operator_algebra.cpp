#include "helix/operator_algebra.hpp"

#include <stdexcept>
#include <string>

namespace helix {

Operator pauli(Pauli axis) {
  Operator m(2, 2);
  switch (axis) {
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
    case Pauli::Plus:
      m << 0, 1, 0, 0;
      break;
    case Pauli::Minus:
      m << 0, 0, 1, 0;
      break;
    case Pauli::Identity:
      m << 1, 0, 0, 1;
      break;
  }
  return m;
}

Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Ket kron(const Ket& a, const Ket& b) {
  Ket out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace {

int log2_dim(Eigen::Index dim, const char* what) {
  if (dim < 1) throw std::invalid_argument(std::string(what) + ": empty dimension");
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d % 2 != 0)
      throw std::invalid_argument(std::string(what) + ": dimension " +
                                  std::to_string(dim) + " is not a power of 2");
    d /= 2;
    ++n;
  }
  return n;
}

}  // namespace

int site_count(const Operator& op) {
  if (op.rows() != op.cols()) throw std::invalid_argument("site_count: operator not square");
  return log2_dim(op.rows(), "site_count");
}

int site_count(const Ket& ket) { return log2_dim(ket.size(), "site_count"); }

Operator embed(const Operator& op, int first_site, int sites) {
  const int m = site_count(op);
  if (first_site < 1 || first_site + m - 1 > sites)
    throw std::invalid_argument("embed: sites " + std::to_string(first_site) + ".." +
                                std::to_string(first_site + m - 1) + " out of range 1.." +
                                std::to_string(sites));
  const Eigen::Index left = Eigen::Index(1) << (first_site - 1);
  const Eigen::Index right = Eigen::Index(1) << (sites - first_site - m + 1);
  return kron(kron(identity(left), op), identity(right));
}

Operator partial_trace(const Operator& op, const std::vector<int>& keep) {
  const int n = site_count(op);
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<bool> kept(n + 1, false);
  for (int s : keep) {
    if (s < 1 || s > n)
      throw std::invalid_argument("partial_trace: site " + std::to_string(s) + " out of range");
    if (kept[s]) throw std::invalid_argument("partial_trace: duplicate site in keep set");
    kept[s] = true;
  }
  std::vector<int> keep_sites, drop_sites;
  for (int s = 1; s <= n; ++s) (kept[s] ? keep_sites : drop_sites).push_back(s);

  const Eigen::Index dk = Eigen::Index(1) << keep_sites.size();
  const Eigen::Index dd = Eigen::Index(1) << drop_sites.size();
  // full index from (keep bits, drop bits), respecting the site ordering
  auto full_index = [&](Eigen::Index k, Eigen::Index d) {
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < keep_sites.size(); ++i) {
      const int bit = static_cast<int>((k >> (keep_sites.size() - 1 - i)) & 1);
      idx |= Eigen::Index(bit) << (n - keep_sites[i]);
    }
    for (std::size_t i = 0; i < drop_sites.size(); ++i) {
      const int bit = static_cast<int>((d >> (drop_sites.size() - 1 - i)) & 1);
      idx |= Eigen::Index(bit) << (n - drop_sites[i]);
    }
    return idx;
  };

  Operator out = Operator::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r)
    for (Eigen::Index c = 0; c < dk; ++c)
      for (Eigen::Index d = 0; d < dd; ++d)
        out(r, c) += op(full_index(r, d), full_index(c, d));
  return out;
}

double hermiticity_defect(const Operator& op) {
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

Spectrum hermitian_spectrum(const Operator& op) {
  const double defect = hermiticity_defect(op);
  if (defect > tolerances.hermiticity)
    throw std::invalid_argument("hermitian_spectrum: non-Hermitian input, defect " +
                                std::to_string(defect));
  Eigen::SelfAdjointEigenSolver<Operator> solver(op);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_spectrum: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace helix
