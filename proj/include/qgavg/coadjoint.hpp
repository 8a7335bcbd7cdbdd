#pragma once

#include <cstdint>

#include "qgavg/fqg.hpp"
#include "qgavg/linmap.hpp"
#include "qgavg/report.hpp"

namespace qgavg {

// Averaging of the discrete side over the adjoint action of the compact
// side, together with the conditional expectations that mirror it on the
// compact face. Only defined over a tracial Haar state; the build re-checks
// traciality and throws otherwise.
struct CoadjointContext {
  FiniteQuantumGroup G;

  // x -> (h x id)(What* (1 x x) What). Unital CP idempotent from the
  // discrete side onto its center; each matrix unit e^a_{mn} goes to
  // delta_{mn} p_a / dim(a).
  LinearMap average;

  // Conditional expectation of the twofold compact product onto the image
  // of the coproduct, preserving the doubled Haar state. On coefficient
  // pairs: U^a_{ij} x U^b_{kl} -> delta_{ab} delta_{jk} cop(U^a_{il}) / dim(a).
  LinearMap pair_expectation;

  // Conditional expectation of the compact side onto the span of the
  // irreducible characters, preserving the Haar state:
  // U^a_{ij} -> delta_{ij} chi_a / dim(a).
  LinearMap class_expectation;

  // Left inverse of the coproduct routed through pair_expectation. The
  // build solves against the coproduct image and refuses a pair_expectation
  // whose image escapes it; there is no extension beyond that image.
  LinearMap coproduct_section;
};

// True when every block representer of the haar state is a positive scalar.
// The averaging construction needs this; build_coadjoint refuses otherwise.
bool has_tracial_haar(const FiniteQuantumGroup& G);

CoadjointContext build_coadjoint(const FiniteQuantumGroup& G);

BlockedOperator coadjoint_average(const CoadjointContext& C, const BlockedOperator& x);

// Action maps travel along the averaging: T on the compact side goes to
// coproduct_section (id x T) coproduct. Sends the action map of a
// multiplier to the action map of its average.
LinearMap transported_action(const CoadjointContext& C, const LinearMap& T);

// Every finitely checkable law of the four maps: projection and image
// identities, complete positivity, the coefficient formulas, agreement of
// pair_expectation with the state-orthogonal projection, the transported
// action identity on a full basis, and both routes from functionals to
// averaged Fourier transforms.
Report verify_coadjoint(const FiniteQuantumGroup& G, double tol = 1e-10);

// Seeded round trip: random central CP multipliers come back unchanged from
// averaging their Fourier preimage, stay CP, and keep their block support.
Report central_density_witness(const FiniteQuantumGroup& G, std::uint64_t seed = 0,
                               double tol = 1e-10);

}  // namespace qgavg
