#pragma once

#include <string>
#include <vector>

#include "qgavg/choi.hpp"
#include "qgavg/corep.hpp"
#include "qgavg/fqg.hpp"
#include "qgavg/multiplier.hpp"
#include "qgavg/report.hpp"
#include "qgavg/structure.hpp"

namespace qgavg {

// Drinfeld double of a finite quantum group. The underlying algebra is the
// plain product of the discrete and compact faces; the coproduct conjugates
// the two middle legs by the multiplicative element before untangling them.
// Everything acts on the doubled GNS space H x H, and the dual face is
// realized concretely there as the algebra generated by the transforms of
// the product coordinate functionals.
struct DrinfeldDouble {
  FiniteQuantumGroup base;

  AlgebraShape shape;   // discrete face x compact face
  LinearMap coproduct;  // shape -> shape x shape
  Functional haar;      // discrete weight x compact state, invariant both sides
  Functional counit;
  Functional eta;       // counit x compact haar state; the averaging state
  LinearMap pi;         // quotient onto the compact face (counit on leg 0)
  LinearMap xi;         // two-sided convolution by eta; idempotent and UCP

  IrrepTable table;  // block data of the base, used by the scalar formula

  std::vector<Mat> rep_units;  // representation of shape coordinates on H x H
  Mat Z;                       // unitary twist pairing the two faces
  std::string z_convention;    // which candidate form of Z survived
  Mat pz;                      // rank-one-per-fiber projection cutting the dual face

  // Dual face data: the transforms of the coordinate product functionals,
  // their block structure as a concrete algebra, and the change of
  // coordinates from functional values on the dual units to shape coords.
  std::vector<Mat> dual_units;
  AlgebraStructure dual_structure;
  LinearMap lambda_d;  // dual functional values -> shape coordinates
  Mat lambda_d_inv;

  Mat represent(const BlockedOperator& x) const;
};

DrinfeldDouble build_double(const FiniteQuantumGroup& G);

// Two-sided average of one element together with its central factor. The
// three routes must agree: the threefold coproduct sliced by the averaging
// state on both outer legs, the conjugation form producing the factor, and
// the per-block scalar formula for that factor.
struct DoubleAverage {
  BlockedOperator averaged;  // equals factor tensor the compact identity
  BlockedOperator factor;    // central element of the discrete face
  double slice_residual = 0.0;
  double factor_residual = 0.0;
  double block_residual = 0.0;
};

DoubleAverage xi_double(const DrinfeldDouble& D, const BlockedOperator& x, double tol = 1e-10);

// Fixed space of the averaging: dimension equals the number of discrete
// blocks and a basis is given by the central projections tensor identity.
Report center_image_check(const DrinfeldDouble& D, double tol = 1e-10);

// Transform of a product functional into the dual face, as an operator on
// H x H and in dual block coordinates.
Mat lambda_double_mat(const DrinfeldDouble& D, const Functional& omega,
                      const Functional& omega_hat);
BlockedOperator lambda_double(const DrinfeldDouble& D, const Functional& omega,
                              const Functional& omega_hat);

// Transform of a dual-face functional, given by its values on the dual
// coordinate units, into the two-face algebra.
BlockedOperator lambda_dual(const DrinfeldDouble& D, const Vec& mu);

// Compression of the dual face by pz together with its predual, plus the
// report tying them to the averaging through the transform.
struct DoubleCompression {
  LinearMap xi_inf;  // y -> pz y pz in dual coordinates
  LinearMap xi_one;  // coefficient transpose of xi_inf
  Report report;
};

DoubleCompression pz_maps(const DrinfeldDouble& D, double tol = 1e-10);

// Restriction of a compression-fixed dual functional to the compact face
// sitting in the first tensor leg. The transform of the result is central,
// and tensoring it with the identity recovers the transform of the input.
// Input not fixed by the compression is a domain error.
Functional iota(const DrinfeldDouble& D, const Vec& mu, double tol = 1e-8);

// Action of a two-face element on the dual face through the transform.
struct DoubleMultiplier {
  BlockedOperator b;
  LinearMap theta;       // on dual face elements
  LinearMap theta_star;  // on dual functional values
};

DoubleMultiplier theta_double(const DrinfeldDouble& D, const BlockedOperator& b);

// Central discrete element c acting on the double as c tensor identity. The
// positivity verdict and the norm of the image of the unit must match those
// of c acting on the compact face alone.
struct EmbeddedMultiplier {
  BlockedOperator embedded;
  DoubleMultiplier mult;
  CpReport cp_base;
  CpReport cp_double;
  double unit_gap = 0.0;
};

EmbeddedMultiplier multiplier_embedding(const DrinfeldDouble& D, const BlockedOperator& c,
                                        double tol = 1e-10);

// Every finitely checkable law of the double in one report.
Report verify_double(const DrinfeldDouble& D, double tol = 1e-10);

}  // namespace qgavg
