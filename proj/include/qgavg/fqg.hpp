#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qgavg/core.hpp"
#include "qgavg/groups.hpp"
#include "qgavg/linmap.hpp"
#include "qgavg/report.hpp"

namespace qgavg {

// One irreducible unitary corepresentation of the compact side, stored as an
// element of M_dim tensor the compact algebra.
struct Irrep {
  int dim = 0;
  BlockedOperator corep;  // on tensor_shape([dim], dual_shape)

  // The coefficient U_{ij} as an element of the compact algebra.
  BlockedOperator entry(int i, int j) const;
};

// A finite quantum group presented through both of its faces: the compact
// side (a multimatrix algebra with coproduct, counit, antipode and Haar
// state; field names carry hats) and the discrete side derived from it by
// duality. Both act on the one GNS space H built from the Haar state.
//
// Only the tracial case is supported: the Haar state must be a trace and the
// antipode involutive. assemble_fqg rejects anything else, so the unitary
// antipode coincides with the antipode throughout.
struct FiniteQuantumGroup {
  std::string name;

  // Compact side.
  AlgebraShape dual_shape;
  LinearMap coproduct_hat;  // dual_shape -> dual_shape x dual_shape
  Functional counit_hat;
  LinearMap antipode_hat;
  LinearMap unitary_antipode_hat;
  Functional haar_hat;  // faithful trace-like state
  std::vector<Irrep> irreps;
  int trivial_block = -1;  // discrete block of the trivial corepresentation

  // Discrete side, transported through the pairing <lambda(omega), a> = omega(a).
  AlgebraShape discrete_shape;  // one block per irrep, size irreps[k].dim
  LinearMap coproduct;          // discrete_shape -> discrete_shape x discrete_shape
  Functional counit;
  LinearMap antipode;
  Functional haar_weight;  // sum over blocks of d_b Tr_b; scale-dependent
                           // results must say they use this normalization

  // GNS data. H has one basis vector per compact coordinate: Lambda of the
  // matrix-unit basis is orthogonal with per-coordinate norms sqrt_w.
  int gns_dim = 0;
  Vec sqrt_w;
  Mat W_hat;  // multiplicative unitary on H x H, first leg compact
  Mat W;      // leg-flipped adjoint of W_hat
  Mat J_hat;  // modular conjugation of the compact trace: v -> J_hat * conj(v)
  Mat J;      // modular conjugation for the discrete side, same convention
  Mat lambda_mat;  // functional coefficients -> discrete coordinates
  Mat lambda_inv;
  std::vector<Mat> rep_units;  // discrete matrix-unit coordinates acting on H

  Vec gns(const BlockedOperator& x) const;  // Lambda(x) in the ON basis
  BlockedOperator gns_inv(const Vec& v) const;
  Mat represent(const BlockedOperator& x) const;  // compact algebra on H
  Mat represent_discrete(const BlockedOperator& xhat) const;

  BlockedOperator lambda(const Functional& omega) const;  // Fourier transform
  Functional lambda_inv_of(const BlockedOperator& xhat) const;

  // omega against the first leg of an operator on H x H whose first leg lies
  // in the represented compact algebra.
  Mat slice_first(const Mat& T, const Functional& omega) const;
};

// Conjugation of T by an antiunitary stored as matrix-times-conjugation.
Mat antiunitary_conj(const Mat& K, const Mat& T);

inline std::pair<Mat, Mat> modular_conjugations(const FiniteQuantumGroup& G) {
  return {G.J_hat, G.J};
}

// Builds the full structure from compact side data. Validates the input
// (Haar a faithful tracial state, coreps unitary with complete linearly
// independent coefficients, coproduct a unital *-homomorphism satisfying the
// corepresentation property) and derives the discrete side, the GNS space,
// the multiplicative unitary and the modular conjugations. Throws on
// structurally invalid input.
FiniteQuantumGroup assemble_fqg(std::string name, const AlgebraShape& compact,
                                LinearMap coproduct_hat, Functional counit_hat,
                                LinearMap antipode_hat, Functional haar_hat,
                                std::vector<Irrep> irreps);

// Compact side = group von Neumann algebra of g, blocked by its irreps; the
// discrete side comes out as functions on g.
FiniteQuantumGroup build_function_algebra(const FiniteGroupData& g);

// Compact side = functions on g; the discrete side is the group algebra,
// blocked by the irreps of g.
FiniteQuantumGroup build_dual_of_group(const FiniteGroupData& g);

// Named models built into the library: z2, z3, s3 (function-algebra face),
// s3dual, d4dual, q8dual (dual face). Throws on unknown names.
FiniteQuantumGroup builtin_model(const std::string& name);
std::vector<std::string> builtin_model_names();

// Every finitely checkable law of the structure, one residual per check.
Report verify_axioms(const FiniteQuantumGroup& G, double tol = 1e-10);

}  // namespace qgavg
