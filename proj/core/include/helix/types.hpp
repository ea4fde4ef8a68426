#pragma once

#include <complex>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace helix {

using Complex = std::complex<double>;

// Dense complex square matrix on an n-qubit Hilbert space. The universal
// carrier for Hamiltonians, Lindblad operators, currents and density
// matrices. Dimension is always a power of two.
using Operator = Eigen::MatrixXcd;

// Pure state on an n-qubit Hilbert space.
using Ket = Eigen::VectorXcd;

using SparseOperator = Eigen::SparseMatrix<Complex>;

// Site convention used by every embedding in this library: site 1 is the
// leftmost (most significant) tensor factor, and |+> = (1,0)^T is the
// sigma^z = +1 eigenstate. Basis index i carries the bit of site j at
// position (n - j) counted from the least significant end.
inline int site_bit(Eigen::Index index, int site, int sites) {
  return static_cast<int>((index >> (sites - site)) & 1);
}

// Tolerances shared across all modules. Every numeric threshold in the
// library comes from this single record.
struct Tolerances {
  double hermiticity = 1e-10;       // max-entry bound for ||A - A^dag||
  double state_norm = 1e-12;        // deviation from unit norm
  double trace = 1e-12;             // deviation from unit trace
  double dark_state = 1e-12;        // ||L |psi>|| for a dark state
  double eigenvalue_clamp = 1e-8;   // most negative admissible rho eigenvalue
  double entropy_cutoff = 1e-14;    // eigenvalues below this enter as 0*log0
  double kernel_distance = 1e-8;    // trace distance for kernel uniqueness
  double degeneracy = 1e-9;         // |lambda_alpha - lambda_0| grouping
  double coupling = 1e-10;          // |<alpha|h01|0>| treated as uncoupled
  double k_rcond = 1e-10;           // reciprocal condition bound for K
  double singular_scale = 1e-8;     // relative scale in the classifier
};

inline constexpr Tolerances tolerances{};

}  // namespace helix
