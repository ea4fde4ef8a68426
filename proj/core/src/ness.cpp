#include "helix/ness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "builders.hpp"
#include "helix/gft.hpp"
#include "helix/operator_algebra.hpp"

namespace helix {

namespace {

Eigen::VectorXcd vectorize(const Operator& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Operator unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim) {
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Operator hermitize_normalize(const Operator& raw) {
  Operator rho = 0.5 * (raw + raw.adjoint());
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-10)
    throw std::runtime_error("solve_ness: kernel vector has (near) zero trace");
  rho /= tr;
  return rho;
}

// row 0 of the superoperator replaced by the trace functional
template <typename Scalar>
Eigen::SparseMatrix<Scalar> with_trace_row(const Eigen::SparseMatrix<Scalar>& s,
                                           Eigen::Index dim) {
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(static_cast<std::size_t>(s.nonZeros()) + dim);
  for (Eigen::Index k = 0; k < s.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(s, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index i = 0; i < dim; ++i) trip.emplace_back(0, i + i * dim, Scalar(1));
  Eigen::SparseMatrix<Scalar> m(s.rows(), s.cols());
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

struct ExtendedSolve {
  Operator rho;
  double purity_defect = 0.0;
};

// Full pipeline in long double: the double-rounded superoperator entries
// put an absolute floor around 1e-9 on the achievable purity defect, which
// Zeno-regime solves at Gamma >= 1e3 fall below.
ExtendedSolve solve_extended(const ChainSpec& spec) {
  using C = std::complex<long double>;
  const Eigen::Index dim = Eigen::Index(1) << spec.sites;
  const Eigen::SparseMatrix<C> s = detail::Kernels<long double>::superoperator(spec);
  const Eigen::SparseMatrix<C> m = with_trace_row(s, dim);

  Eigen::SparseLU<Eigen::SparseMatrix<C>> lu(m);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_ness: extended-precision factorization failed");
  Eigen::Matrix<C, Eigen::Dynamic, 1> b =
      Eigen::Matrix<C, Eigen::Dynamic, 1>::Zero(dim * dim);
  b(0) = C(1);
  Eigen::Matrix<C, Eigen::Dynamic, 1> x = lu.solve(b);

  Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> rho =
      Eigen::Map<Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>>(x.data(), dim, dim);
  rho = (rho + rho.adjoint().eval()) / C(2);
  rho /= rho.trace().real();

  ExtendedSolve out;
  long double frob2 = 0;
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) frob2 += std::norm(rho(r, c));
  out.purity_defect = static_cast<double>(1.0L - frob2);
  out.rho = rho.cast<Complex>();
  return out;
}

struct InverseIteration {
  Eigen::VectorXcd vector;  // normalized kernel candidate
  double residual = 0.0;    // ||S v||
  int iterations = 0;
  bool converged = false;
};

InverseIteration inverse_iterate(const Eigen::SparseLU<SparseOperator>& shifted_lu,
                                 const SparseOperator& s, Eigen::VectorXcd start,
                                 double target_residual, int max_iterations) {
  InverseIteration out;
  start.normalize();
  Eigen::VectorXcd v = start;
  double best = (s * v).norm();
  out.vector = v;
  out.residual = best;
  for (int it = 0; it < max_iterations; ++it) {
    v = shifted_lu.solve(v);
    const double n = v.norm();
    if (!(n > 0) || !std::isfinite(n)) break;
    v /= n;
    const double resid = (s * v).norm();
    ++out.iterations;
    if (resid < best) {
      best = resid;
      out.vector = v;
      out.residual = resid;
    }
    if (resid <= target_residual) {
      out.converged = true;
      break;
    }
    if (resid > 10 * best && it > 4) break;  // stalled
  }
  out.converged = out.converged || out.residual <= target_residual;
  return out;
}

}  // namespace

Liouvillian build_liouvillian(const ChainSpec& spec) {
  spec.validate();
  if (spec.sites > max_liouvillian_sites)
    throw std::invalid_argument("build_liouvillian: N = " + std::to_string(spec.sites) +
                                " exceeds the configured cap of " +
                                std::to_string(max_liouvillian_sites));
  Liouvillian l;
  l.spec = spec;
  l.superoperator = detail::Kernels<double>::superoperator(spec);
  return l;
}

double trace_preservation_defect(const Liouvillian& liouvillian) {
  const Eigen::Index dim = liouvillian.hilbert_dim();
  Eigen::VectorXcd trace_row = Eigen::VectorXcd::Zero(dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) trace_row(i + i * dim) = 1.0;
  return (liouvillian.superoperator.adjoint() * trace_row.conjugate()).norm();
}

void DensityMatrix::validate() const {
  if (op.rows() != op.cols() || op.rows() != (Eigen::Index(1) << sites))
    throw std::invalid_argument("DensityMatrix: dimension does not match site count");
  if (hermiticity_defect(op) > tolerances.hermiticity)
    throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
  if (std::abs(op.trace().real() - 1.0) > tolerances.trace ||
      std::abs(op.trace().imag()) > tolerances.trace)
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Operator> es(op, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerances.eigenvalue_clamp)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
}

DensityMatrix maximally_mixed(int sites) {
  const Eigen::Index dim = Eigen::Index(1) << sites;
  return {Operator::Identity(dim, dim) / static_cast<double>(dim), sites};
}

DensityMatrix pure_state(const Ket& psi) {
  const int n = site_count(psi);
  const Ket normalized = psi / psi.norm();
  return {normalized * normalized.adjoint(), n};
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  Eigen::SelfAdjointEigenSolver<Operator> es(a.op - b.op, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

NessResult solve_ness(const Liouvillian& liouvillian, double tol) {
  SolveOptions options;
  options.tolerance = tol;
  return solve_ness(liouvillian, options);
}

NessResult solve_ness(const Liouvillian& liouvillian, const SolveOptions& options) {
  if (!(options.tolerance > 0)) throw std::invalid_argument("solve_ness: tolerance <= 0");
  const SparseOperator& s = liouvillian.superoperator;
  const Eigen::Index dim = liouvillian.hilbert_dim();
  const int sites = liouvillian.spec.sites;

  NessResult result;
  result.method = NessMethod::NullSpace;

  bool have_solution = false;
  Eigen::VectorXcd x;

  // primary path: direct LU with the trace constraint in place of row 0
  {
    const SparseOperator m = with_trace_row(s, dim);
    Eigen::SparseLU<SparseOperator> lu(m);
    if (lu.info() == Eigen::Success) {
      Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim * dim);
      b(0) = 1.0;
      x = lu.solve(b);
      for (int refine = 0; refine < 3; ++refine) {
        const Eigen::VectorXcd r = b - m * x;
        if (r.norm() <= 1e-16 * dim) break;
        x += lu.solve(r);
      }
      have_solution = x.allFinite();
    }
  }

  // shifted factorization: uniqueness check and fallback
  Eigen::SparseLU<SparseOperator> shifted_lu;
  bool have_shifted = false;
  const bool need_check = options.check_uniqueness || !have_solution;
  if (need_check) {
    const double scale = 1.0 + s.coeffs().cwiseAbs().maxCoeff();
    double shift = 1e-12 * scale;
    for (int attempt = 0; attempt < 3 && !have_shifted; ++attempt) {
      SparseOperator shifted = s;
      SparseOperator eye(dim * dim, dim * dim);
      eye.setIdentity();
      shifted -= Complex(shift) * eye;
      shifted_lu.compute(shifted);
      if (shifted_lu.info() == Eigen::Success)
        have_shifted = true;
      else
        shift *= 100;
    }
    if (!have_shifted)
      throw std::runtime_error("solve_ness: shifted factorization failed");
  }

  if (!have_solution) {
    Eigen::VectorXcd start = Eigen::VectorXcd::Zero(dim * dim);
    for (Eigen::Index i = 0; i < dim; ++i) start(i + i * dim) = 1.0;
    const InverseIteration fallback = inverse_iterate(
        shifted_lu, s, start, 0.1 * options.tolerance, options.max_iterations);
    if (!fallback.converged)
      throw std::runtime_error("solve_ness: no convergence within the iteration budget");
    x = fallback.vector;
    result.method = NessMethod::InverseIteration;
    result.iterations = fallback.iterations;
  }

  Operator rho = hermitize_normalize(unvectorize(x, dim));
  result.residual = (s * vectorize(rho)).norm();
  if (result.residual > options.tolerance) {
    // the trace-row system can be poorly scaled; fall back to iteration
    if (!have_shifted) throw std::runtime_error("solve_ness: residual above tolerance");
    const InverseIteration retry =
        inverse_iterate(shifted_lu, s, vectorize(rho), 0.1 * options.tolerance,
                        options.max_iterations);
    const Operator rho2 = hermitize_normalize(unvectorize(retry.vector, dim));
    const double resid2 = (s * vectorize(rho2)).norm();
    if (resid2 < result.residual) {
      rho = rho2;
      result.residual = resid2;
      result.method = NessMethod::InverseIteration;
      result.iterations += retry.iterations;
    }
    if (result.residual > options.tolerance)
      throw std::runtime_error("solve_ness: residual " + std::to_string(result.residual) +
                               " above tolerance");
  }

  result.rho = DensityMatrix{rho, sites};
  result.purity_defect = 1.0 - rho.squaredNorm();

  if (options.check_uniqueness) {
    // a second start, orthogonalized against the found kernel vector; in a
    // degenerate steady space it converges to a different element
    Eigen::VectorXcd vr = vectorize(rho);
    vr.normalize();
    Eigen::VectorXcd start(dim * dim);
    for (Eigen::Index i = 0; i < start.size(); ++i)
      start(i) = Complex((i % 2 == 0) ? 1.0 : -1.0, (i % 3 == 0) ? 0.5 : -0.5);
    start -= vr * vr.dot(start);
    const InverseIteration second = inverse_iterate(
        shifted_lu, s, start, 0.1 * options.tolerance, options.max_iterations);
    if (second.converged) {
      const Operator raw = unvectorize(second.vector, dim);
      const Operator herm = 0.5 * (raw + raw.adjoint());
      const double tr = std::abs(herm.trace().real());
      if (tr < 1e-8) {
        result.kernel_multiplicity = 2;  // traceless steady direction
      } else {
        const DensityMatrix other{herm / herm.trace().real(), sites};
        if (trace_distance(result.rho, other) > tolerances.kernel_distance)
          result.kernel_multiplicity = 2;
      }
    }
  }

  const bool want_extended =
      options.precision == SolvePrecision::Extended ||
      (options.precision == SolvePrecision::Auto && result.purity_defect < 1e-6 &&
       sites <= 5);
  if (want_extended) {
    if (sites > 5)
      throw std::invalid_argument("solve_ness: extended precision supports N <= 5");
    const ExtendedSolve ext = solve_extended(liouvillian.spec);
    result.rho = DensityMatrix{ext.rho, sites};
    result.purity_defect = ext.purity_defect;
    result.residual = (s * vectorize(ext.rho)).norm();
  }
  return result;
}

DensityMatrix evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0,
                     double t_final, double step, double* trace_drift) {
  if (!(t_final >= 0) || !(step > 0)) throw std::invalid_argument("evolve: bad time grid");
  const SparseOperator& s = liouvillian.superoperator;
  const Eigen::Index dim = liouvillian.hilbert_dim();
  if (rho0.op.rows() != dim) throw std::invalid_argument("evolve: dimension mismatch");

  const int steps = std::max(1, static_cast<int>(std::lround(t_final / step)));
  const double h = t_final / steps;
  Eigen::VectorXcd v = vectorize(rho0.op);

  auto trace_of = [&](const Eigen::VectorXcd& w) {
    Complex tr = 0;
    for (Eigen::Index i = 0; i < dim; ++i) tr += w(i + i * dim);
    return tr;
  };
  const double trace0 = trace_of(v).real();

  Eigen::VectorXcd k1, k2, k3, k4;
  for (int n = 0; n < steps; ++n) {
    k1 = s * v;
    k2 = s * (v + (0.5 * h) * k1);
    k3 = s * (v + (0.5 * h) * k2);
    k4 = s * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((n & 63) == 0 && !v.allFinite())
      throw std::runtime_error("evolve: diverged, step too large");
  }

  const double drift = std::abs(trace_of(v).real() - trace0);
  if (trace_drift) *trace_drift = drift;
  if (drift > 1e-9)
    throw std::runtime_error("evolve: trace drift " + std::to_string(drift) +
                             " exceeds 1e-9, step too large");
  return DensityMatrix{hermitize_normalize(unvectorize(v, dim)), liouvillian.spec.sites};
}

double vne_entropy(const DensityMatrix& rho) {
  const Spectrum spec = hermitian_spectrum(rho.op);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double p = spec.eigenvalues(i);
    if (p < -tolerances.eigenvalue_clamp)
      throw std::invalid_argument("vne_entropy: eigenvalue " + std::to_string(p) +
                                  " below the clamp tolerance");
    if (p < tolerances.entropy_cutoff) continue;  // 0 log 0 = 0
    entropy -= p * std::log2(p);
  }
  return entropy;
}

double purity_defect(const DensityMatrix& rho) { return 1.0 - rho.op.squaredNorm(); }

NessObservables observables(const DensityMatrix& rho, const ChainSpec& spec) {
  rho.validate();
  if (rho.sites != spec.sites)
    throw std::invalid_argument("observables: spec does not match density matrix");
  const int n = spec.sites;

  NessObservables out;
  out.vne_entropy = vne_entropy(rho);
  out.purity_defect = purity_defect(rho);
  out.spin_current.reserve(n - 1);
  for (int bond = 1; bond < n; ++bond)
    out.spin_current.push_back(
        (spin_current_operator(bond, n, spec.coupling) * rho.op).trace().real());
  for (int site = 2; site <= n - 1; ++site)
    out.energy_current.push_back(
        (energy_current_operator(site, n, spec.anisotropy, spec.coupling) * rho.op)
            .trace()
            .real());
  out.transverse_profile = transverse_profile(rho.op);
  out.magnetization.reserve(n);
  for (int site = 1; site <= n; ++site)
    out.magnetization.push_back(site_magnetization(rho.op, site, n));
  return out;
}

}  // namespace helix
