#pragma once

#include "qgavg/core.hpp"

#include <functional>

namespace qgavg {

// Linear map between blocked algebras, stored densely on coordinates.
// The same type carries maps between functional coefficient spaces; the
// shapes then name the algebras the functionals live on.
struct LinearMap {
  AlgebraShape domain, codomain;
  Mat mat;  // codomain.total x domain.total

  static LinearMap identity(const AlgebraShape& s);
  static LinearMap zero(const AlgebraShape& dom, const AlgebraShape& cod);

  BlockedOperator operator()(const BlockedOperator& x) const;
  LinearMap operator*(const LinearMap& g) const;  // composition, this after g
  LinearMap operator+(const LinearMap& g) const;
  LinearMap operator-(const LinearMap& g) const;
  double frob() const { return mat.norm(); }
};

double map_distance(const LinearMap& f, const LinearMap& g);

// f tensor g. Dense on coordinates; keep the products small.
LinearMap tensor_map(const LinearMap& f, const LinearMap& g);

LinearMap left_mult(const BlockedOperator& a);   // x -> a x
LinearMap right_mult(const BlockedOperator& a);  // x -> x a

// omega composed with f, as a functional on f's domain.
Functional pullback(const LinearMap& f, const Functional& omega);

// Transpose on coefficient vectors: <adjoint_map(f)(omega), x> = <omega, f(x)>
// where <.,.> is the matrix-unit coefficient pairing. The shapes of the result
// name functional coefficient spaces.
LinearMap adjoint_map(const LinearMap& f);

// Inverse direction: transports a map of functional coefficient spaces back
// to a map of elements through the same pairing. Same matrix transpose.
LinearMap predual_transport(const LinearMap& f);

// Pair split of the two-fold product: result[c] = (coord in a, coord in b).
std::vector<std::pair<int, int>> split_pair(const AlgebraShape& a, const AlgebraShape& b);

// Multiplication as a linear map from the two-fold product to the algebra.
LinearMap mult_map(const AlgebraShape& s);

// Flip of the two-fold product of s with itself.
LinearMap flip_map(const AlgebraShape& s);

// Permutation with coords(x^*) = transpose_perm(s) * conj(coords(x)).
Mat transpose_perm(const AlgebraShape& s);

// ---- leg utilities over products of blocked shapes ----

// Per-leg location of one product coordinate.
struct LegCoord {
  int b, i, j;
};

LegCoord leg_decompose(const AlgebraShape& s, int c);
int product_combine(const std::vector<AlgebraShape>& legs, const std::vector<LegCoord>& w);

// Visits coordinates of tensor_shape(legs) in increasing order, with the
// per-leg block and entry indices.
void for_each_product_coord(const std::vector<AlgebraShape>& legs,
                            const std::function<void(int, const std::vector<LegCoord>&)>& f);

// Relabeling that makes output leg k the input leg sigma[k].
LinearMap leg_permutation(const std::vector<AlgebraShape>& legs, const std::vector<int>& sigma);

// id x ... x omega x ... x id contracting the given leg.
LinearMap slice_leg(const std::vector<AlgebraShape>& legs, int leg, const Functional& omega);

// id x ... x f x ... x id on the given leg. Dense; keep products small.
LinearMap map_at_leg(const std::vector<AlgebraShape>& legs, int leg, const LinearMap& f);

// x placed on the legs listed in `where` (in x's own leg order), identity on
// the rest.
BlockedOperator embed_legs(const BlockedOperator& x, const std::vector<AlgebraShape>& legs,
                           const std::vector<int>& where);

// map_at_leg applied to one coordinate vector without forming the dense
// product-space matrix; the output runs over legs with legs[leg] replaced by
// f.codomain.
Vec apply_at_leg_vec(const std::vector<AlgebraShape>& legs, int leg, const LinearMap& f,
                     const Vec& c);

// slice_leg applied to one coordinate vector; the output runs over the
// remaining legs in order.
Vec slice_leg_vec(const std::vector<AlgebraShape>& legs, int leg, const Functional& omega,
                  const Vec& c);

// ---- flat tensor-factor utilities on plain vectors ----

// Apply A, acting on the factors `legs` (in that order), to v over the full
// product of dims.
Vec apply_on_legs(const Mat& A, const std::vector<int>& dims, const std::vector<int>& legs,
                  const Vec& v);

}  // namespace qgavg
