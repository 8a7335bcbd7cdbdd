#pragma once

#include <array>

#include "qgavg/choi.hpp"
#include "qgavg/fqg.hpp"
#include "qgavg/report.hpp"

namespace qgavg {

// Central = every block a scalar multiple of its identity.
bool is_central(const BlockedOperator& b, double tol = 1e-10);
std::vector<cplx> central_values(const BlockedOperator& b);  // throws unless central
BlockedOperator central_multiplier(const AlgebraShape& s, const std::vector<cplx>& c);

// A discrete-side element acting on the compact side by moving Fourier
// coefficients: theta is fixed by b lambda(omega) = lambda(theta_star(omega)).
struct Multiplier {
  BlockedOperator b;
  LinearMap theta;       // on compact side elements
  LinearMap theta_star;  // on compact side functional coefficients
  bool central = false;
};

Multiplier theta_of(const FiniteQuantumGroup& G, const BlockedOperator& b);

// Adjoint of the multiplicative operator as an element of the two-face
// product discrete x compact: the sum of discrete matrix units tensor the
// matching corepresentation coefficients.
BlockedOperator w_element_star(const FiniteQuantumGroup& G);

// Norm of a functional = sum of block trace norms of its representer.
double functional_norm(const Functional& omega);

// Complete positivity of the action map, decided two ways: positivity of the
// Choi matrix of theta and positivity of the functional lambda^{-1}(b). The
// two verdicts must agree; disagreement throws.
struct CpVerdict {
  bool cp = false;
  double min_choi_eig = 0.0;
  double functional_defect = 0.0;
};

CpVerdict is_cp(const FiniteQuantumGroup& G, const BlockedOperator& b);

// Module actions by slicing the coproduct of the side a lives on:
// convolve_right(a, omega) = (omega x id) Delta(a),
// convolve_left(omega, a) = (id x omega) Delta(a),
// convolve(omega, omega') = (omega x omega') Delta.
BlockedOperator convolve_right(const FiniteQuantumGroup& G, const BlockedOperator& a,
                               const Functional& omega);
BlockedOperator convolve_left(const FiniteQuantumGroup& G, const Functional& omega,
                              const BlockedOperator& a);
Functional convolve(const FiniteQuantumGroup& G, const Functional& a, const Functional& b);

// Residual of the slice formula for the action map of a convolved
// multiplier: the map of convolve_right(a, omega) against the two-leg
// expression routed through the multiplicative operator, compared on a full
// coordinate basis. a lives on the discrete side, omega on its functionals.
double theta_of_convolution_residual(const FiniteQuantumGroup& G, const BlockedOperator& a,
                                     const Functional& omega);

// Defining identity, centralizer property, coefficient transport, and the
// algebra law of the action map, measured for one multiplier.
Report multiplier_report(const FiniteQuantumGroup& G, const BlockedOperator& b,
                         double tol = 1e-10);

// Writes a central b as sum of i^k lambda(omega_k) with positive functionals
// omega_k whose transforms are again central. Works through the commutative
// algebra spanned by the characters: polarization plus blockwise positive
// and negative parts.
struct CentralDecomposition {
  std::array<Functional, 4> omega;
  std::array<BlockedOperator, 4> part;  // lambda(omega_k)
  double residual = 0.0;                // reconstruction error on b
};

CentralDecomposition positive_decomposition(const FiniteQuantumGroup& G,
                                            const BlockedOperator& b);

}  // namespace qgavg
