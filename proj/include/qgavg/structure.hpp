#pragma once

#include "qgavg/linmap.hpp"

namespace qgavg {

// Concrete block decomposition of a *-closed unital algebra of matrices:
// minimal central projections, a full system of matrix units, and the
// induced coordinatization by a blocked shape.
struct AlgebraStructure {
  int hdim = 0;
  AlgebraShape shape;      // dims of the minimal blocks, in discovery order
  std::vector<int> mult;   // multiplicity of each block inside the space
  std::vector<Mat> central_projections;
  std::vector<std::vector<Mat>> units;  // units[k][i*d+j] realizes e^k_{ij}

  Mat to_matrix(const Vec& coords) const;
  Mat represent(const BlockedOperator& x) const;
  // HS expansion over the units; residual reports how far T is from the span.
  Vec from_matrix(const Mat& T, double* residual = nullptr) const;
  // from_matrix with a hard error when T lies off the algebra.
  BlockedOperator compress(const Mat& T, double tol = 1e-8) const;
};

// Structure of the *-algebra generated by `spanning` inside B(C^n). The
// routine closes the span under products and adjoints, locates the center,
// and synthesizes matrix units from seeded random elements. Integer and
// residual consistency is asserted throughout.
AlgebraStructure extract_structure(const std::vector<Mat>& spanning, std::uint64_t seed = 0,
                                   double tol = 1e-8);

}  // namespace qgavg
