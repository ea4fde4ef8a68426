#pragma once

#include <vector>

#include "helix/types.hpp"

namespace helix {

enum class Pauli { X, Y, Z, Plus, Minus, Identity };

// Standard 2x2 Pauli matrix; Plus/Minus are (sigma^x +- i sigma^y)/2.
Operator pauli(Pauli axis);

Operator identity(Eigen::Index dim);

Operator kron(const Operator& a, const Operator& b);

Ket kron(const Ket& a, const Ket& b);

// Number of sites carried by a 2^n x 2^n operator (or 2^n ket).
// Throws if the dimension is not a power of two.
int site_count(const Operator& op);
int site_count(const Ket& ket);

// Tensor product with identities on all other sites. `op` acts on
// contiguous sites first_site .. first_site + m - 1 of an N-site chain.
Operator embed(const Operator& op, int first_site, int sites);

// Trace out every site not listed in `keep` (1-based, any order).
Operator partial_trace(const Operator& op, const std::vector<int>& keep);

inline Operator dagger(const Operator& op) { return op.adjoint(); }

double hermiticity_defect(const Operator& op);

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns match eigenvalues
};

// Eigendecomposition of a Hermitian operator. Throws if the input is not
// Hermitian within the shared tolerance.
Spectrum hermitian_spectrum(const Operator& op);

}  // namespace helix
