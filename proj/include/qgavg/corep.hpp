#pragma once

#include <vector>

#include "qgavg/fqg.hpp"
#include "qgavg/report.hpp"

namespace qgavg {

// Per-irrep data beyond the raw coefficients: the positive matrix steering
// the orthogonality relations (normalized so its trace equals the trace of
// its inverse) and the character.
struct IrrepTableEntry {
  int dim = 0;
  Mat rho;
  BlockedOperator character;
};

struct IrrepTable {
  std::vector<IrrepTableEntry> entries;
};

// Reads rho off the Haar state: R_{ji} = h((U_{i0})* U_{j0}) is a positive
// multiple of rho^{-1}; the trace normalization fixes the scale. Throws if R
// fails to be positive invertible.
Mat extract_rho(const FiniteQuantumGroup& G, int alpha);

// Sum of the diagonal coefficients of each irrep.
std::vector<BlockedOperator> characters(const FiniteQuantumGroup& G);

IrrepTable build_irrep_table(const FiniteQuantumGroup& G);

// All orthogonality relations h((U^b_{ik})* U^a_{jl}) against
// delta_{ab} delta_{kl} (rho_a^{-1})_{ji} / Tr rho_a, plus the trace
// normalization of each rho.
Report schur_check(const FiniteQuantumGroup& G, const IrrepTable& table, double tol = 1e-12);

// Characters: orthonormality under the Haar state, unit character at the
// trivial block, and closure of the span under products and the star; the
// product structure constants come out as nonnegative integers and are
// verified as such.
Report class_algebra_check(const FiniteQuantumGroup& G, double tol = 1e-12);

}  // namespace qgavg
