#pragma once

#include <vector>

#include "helix/model.hpp"
#include "helix/types.hpp"

namespace helix {

// Lindblad superoperator in column-stacking convention: vec(rho)[r + c*dim]
// = rho(r, c), so the map A rho B acts as (B^T otimes A).
struct Liouvillian {
  SparseOperator superoperator;  // 4^N x 4^N
  ChainSpec spec;

  Eigen::Index hilbert_dim() const { return Eigen::Index(1) << spec.sites; }
};

// Hard cap on the chain size accepted by build_liouvillian; 4^N storage.
inline constexpr int max_liouvillian_sites = 7;

Liouvillian build_liouvillian(const ChainSpec& spec);

// || vec(I)^T L ||: zero for a trace-preserving generator.
double trace_preservation_defect(const Liouvillian& liouvillian);

struct DensityMatrix {
  Operator op;
  int sites = 0;

  // Hermitian within tolerance, unit trace, smallest eigenvalue >= -1e-8.
  void validate() const;
};

DensityMatrix maximally_mixed(int sites);
DensityMatrix pure_state(const Ket& psi);

// 1/2 ||a - b||_1
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

enum class NessMethod { NullSpace, InverseIteration, TimeEvolution };

enum class SolvePrecision {
  Auto,      // escalate to Extended when the purity defect hits the double floor
  Double,
  Extended,  // long double assembly and factorization (N <= 5)
};

struct SolveOptions {
  double tolerance = 1e-10;
  SolvePrecision precision = SolvePrecision::Auto;
  bool check_uniqueness = true;
  int max_iterations = 200;  // inverse-iteration budget
};

struct NessResult {
  DensityMatrix rho;
  double residual = 0.0;  // ||L vec(rho)||_2
  NessMethod method = NessMethod::NullSpace;
  int iterations = 0;
  // 1 - tr rho^2 evaluated at solve precision; at strong dissipation this
  // is far below what the double-rounded rho can resolve.
  double purity_defect = 0.0;
  int kernel_multiplicity = 1;  // > 1: degenerate steady space detected
};

NessResult solve_ness(const Liouvillian& liouvillian, double tol);
NessResult solve_ness(const Liouvillian& liouvillian, const SolveOptions& options);

// Fixed-step RK4 integration of the master equation. Throws if the trace
// drifts by more than 1e-9 (step too large). The final state is
// trace-renormalized; the raw drift is written to *trace_drift if given.
DensityMatrix evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0,
                     double t_final, double step, double* trace_drift = nullptr);

struct NessObservables {
  double vne_entropy = 0.0;                // bits
  double purity_defect = 0.0;              // 1 - tr rho^2
  std::vector<double> spin_current;        // bonds 1..N-1
  std::vector<double> energy_current;      // bulk sites 2..N-1
  Eigen::VectorXcd transverse_profile;     // f_k, k = 1..N-1
  std::vector<BlochVector> magnetization;  // sites 1..N
};

NessObservables observables(const DensityMatrix& rho, const ChainSpec& spec);

// -tr(rho log2 rho); eigenvalues below the entropy cutoff contribute 0,
// eigenvalues below -1e-8 are an error.
double vne_entropy(const DensityMatrix& rho);

double purity_defect(const DensityMatrix& rho);

}  // namespace helix
