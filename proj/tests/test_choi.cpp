#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgavg/choi.hpp"

using namespace qgavg;

namespace {

LinearMap transpose_on(const AlgebraShape& s) {
  LinearMap f = LinearMap::zero(s, s);
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) f.mat(s.coord(b, j, i), s.coord(b, i, j)) = 1.0;
  }
  return f;
}

// CP map A -> B: compress V embed(x) V* to the codomain blocks.
LinearMap kraus_compress(const AlgebraShape& A, const AlgebraShape& B, const Mat& V) {
  LinearMap f = LinearMap::zero(A, B);
  for (int c = 0; c < A.total; ++c) {
    Vec u = Vec::Zero(A.total);
    u(c) = 1.0;
    Mat m = V * BlockedOperator::from_coords(A, u).embed() * V.adjoint();
    BlockedOperator y = BlockedOperator::zero(B);
    for (int b = 0; b < B.blocks(); ++b) {
      int o = B.embed_off[b], d = B.dims[b];
      y.blocks[b] = m.block(o, o, d, d);
    }
    f.mat.col(c) = y.coords();
  }
  return f;
}

bool psd_full(const Mat& C, double tol = kPsdTol) {
  double n = spec_norm(C);
  return spec_norm(C - C.adjoint()) <= tol * (1 + n) && min_eig_hermitian(C) >= -tol * (1 + n);
}

}  // namespace

TEST_CASE("choi of the identity is the entangled projector") {
  AlgebraShape m2 = AlgebraShape::of({2});
  Mat C = choi_matrix(LinearMap::identity(m2));
  Mat P = Mat::Zero(4, 4);
  // |Omega><Omega| with Omega = e0 x e0 + e1 x e1
  P(0, 0) = P(0, 3) = P(3, 0) = P(3, 3) = 1.0;
  CHECK((C - P).norm() <= 1e-14);
  CHECK(min_eig_hermitian(C) >= -1e-14);

  CpReport r = cp_check(LinearMap::identity(m2));
  CHECK(r.cp);
  CHECK(std::abs(r.min_eig) <= 1e-14);
}

TEST_CASE("transpose on M2 is not CP and has cb norm 2") {
  AlgebraShape m2 = AlgebraShape::of({2});
  LinearMap t = transpose_on(m2);
  Mat C = choi_matrix(t);
  CHECK(std::abs(min_eig_hermitian(C) + 1.0) <= 1e-12);
  CpReport r = cp_check(t);
  CHECK(!r.cp);
  CHECK(std::abs(r.min_eig + 1.0) <= 1e-12);

  CbOpts opts;
  CbResult cb = cb_norm(t, opts);
  CHECK(!cb.exact);
  CHECK(cb.converged);
  CHECK(cb.restarts_used >= 8);
  CHECK(std::abs(cb.value - 2.0) <= 1e-3);
}

TEST_CASE("state times identity is CP") {
  AlgebraShape s = AlgebraShape::of({1, 2});
  // h = normalized trace over the embedding
  Functional h;
  h.shape = s;
  h.coeff = Vec::Zero(s.total);
  h.coeff(s.coord(0, 0, 0)) = 1.0 / 3.0;
  h.coeff(s.coord(1, 0, 0)) = 1.0 / 3.0;
  h.coeff(s.coord(1, 1, 1)) = 1.0 / 3.0;
  LinearMap f = LinearMap::zero(s, s);
  Vec one = BlockedOperator::identity(s).coords();
  for (int c = 0; c < s.total; ++c) f.mat.col(c) = h.coeff(c) * one;
  CHECK(psd_full(choi_matrix(f)));
  CHECK(cp_check(f).cp);
}

TEST_CASE("cb norm on the CP path equals the norm at the unit") {
  AlgebraShape m2 = AlgebraShape::of({2});
  Mat A1 = Mat::Identity(2, 2);
  Mat A2 = Mat::Zero(2, 2);
  A2(0, 0) = std::sqrt(2.0);
  LinearMap f = LinearMap::zero(m2, m2);
  for (int c = 0; c < 4; ++c) {
    Vec u = Vec::Zero(4);
    u(c) = 1.0;
    Mat x = BlockedOperator::from_coords(m2, u).embed();
    Mat y = A1 * x * A1.adjoint() + A2 * x * A2.adjoint();
    BlockedOperator img = BlockedOperator::zero(m2);
    img.blocks[0] = y;
    f.mat.col(c) = img.coords();
  }
  // f(1) = diag(3, 1)
  CHECK((f(BlockedOperator::identity(m2)).blocks[0] - (Mat(2, 2) << 3, 0, 0, 1).finished())
            .norm() <= 1e-14);

  CbResult cb = cb_norm(f);
  CHECK(cb.exact);
  CHECK(cb.value == f(BlockedOperator::identity(m2)).norm());
  CHECK(std::abs(cb.value - 3.0) <= 1e-12);

  // seed independence on the exact path, bitwise
  CbOpts o1, o2;
  o1.seed = 7;
  o2.seed = 991;
  CHECK(cb_norm(f, o1).value == cb_norm(f, o2).value);

  // the iterative path agrees with the exact value
  CbOpts raw;
  raw.cp_shortcut = false;
  CbResult est = cb_norm(f, raw);
  CHECK(!est.exact);
  CHECK(std::abs(est.value - 3.0) <= 1e-3);
}

TEST_CASE("block-pair verdicts match the full choi matrix") {
  AlgebraShape A = AlgebraShape::of({1, 2});
  AlgebraShape B = AlgebraShape::of({2, 1});
  Rng rng(21);
  int agree = 0;
  for (int t = 0; t < 20; ++t) {
    LinearMap f;
    if (t % 2 == 0) {
      f = kraus_compress(A, B, rng.gaussian(B.embed, A.embed));
    } else {
      f = LinearMap::zero(A, B);
      f.mat = rng.gaussian(B.total, A.total);
    }
    bool full = psd_full(choi_matrix(f));
    bool pair = cp_check(f).cp;
    if (full == pair) ++agree;
    if (t % 2 == 0) CHECK(pair);
  }
  CHECK(agree == 20);
}

TEST_CASE("amplified positivity follows the choi verdict") {
  AlgebraShape A = AlgebraShape::of({1, 2});
  AlgebraShape B = AlgebraShape::of({2, 1});
  Rng rng(22);
  LinearMap f = kraus_compress(A, B, rng.gaussian(B.embed, A.embed));
  for (int k = 1; k <= 4; ++k) {
    AlgebraShape mk = AlgebraShape::of({k});
    LinearMap amp = tensor_map(f, LinearMap::identity(mk));
    for (int t = 0; t < 5; ++t) {
      BlockedOperator x = rng.psd_element(amp.domain);
      BlockedOperator y = amp(x);
      double scale = 1.0 + y.norm();
      for (const Mat& m : y.blocks) CHECK(min_eig_hermitian(m) >= -1e-10 * scale);
    }
  }

  // the entangled witness exposes the transpose
  AlgebraShape m2 = AlgebraShape::of({2});
  LinearMap t2 = tensor_map(transpose_on(m2), LinearMap::identity(m2));
  Vec omega = Vec::Zero(4);
  omega(0) = omega(3) = 1.0;
  Mat w = omega * omega.adjoint();
  BlockedOperator x = BlockedOperator::zero(t2.domain);
  // M2 x M2 has the single block M4 with kron coordinates
  x.blocks[0] = w;
  BlockedOperator y = t2(x);
  CHECK(min_eig_hermitian(y.blocks[0]) <= -0.9);
}

TEST_CASE("cb norm is stable under an identity tensor factor") {
  AlgebraShape A = AlgebraShape::of({1, 2});
  Rng rng(23);
  LinearMap f = kraus_compress(A, A, rng.gaussian(A.embed, A.embed));
  AlgebraShape m2 = AlgebraShape::of({2});
  LinearMap g = tensor_map(LinearMap::identity(m2), f);
  CbResult a = cb_norm(f), b = cb_norm(g);
  CHECK(a.exact);
  CHECK(b.exact);
  CHECK(std::abs(a.value - b.value) <= 1e-12 * (1 + a.value));
}

TEST_CASE("adjoint map is the coefficient transpose and an involution") {
  AlgebraShape A = AlgebraShape::of({1, 2});
  AlgebraShape B = AlgebraShape::of({3});
  Rng rng(24);
  LinearMap f = LinearMap::zero(A, B);
  f.mat = rng.gaussian(B.total, A.total);

  LinearMap adj = adjoint_map(f);
  CHECK((adjoint_map(adj).mat - f.mat).norm() <= 1e-15);

  Functional w = rng.functional(B);
  BlockedOperator x = rng.element(A);
  Functional wf;
  wf.shape = A;
  wf.coeff = adj.mat * w.coeff;
  CHECK(std::abs(wf(x) - w(f(x))) <= 1e-12);
  CHECK((predual_transport(f).mat - adj.mat).norm() == 0.0);
}

TEST_CASE("cb norm estimate is deterministic for fixed options") {
  AlgebraShape m2 = AlgebraShape::of({2});
  LinearMap t = transpose_on(m2);
  CbOpts opts;
  opts.seed = 5;
  CbResult a = cb_norm(t, opts), b = cb_norm(t, opts);
  CHECK(a.value == b.value);
}
