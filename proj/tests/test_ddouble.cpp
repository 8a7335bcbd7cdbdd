#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <vector>

#include "doctest.h"
#include "qgavg/averaging.hpp"
#include "qgavg/ddouble.hpp"
#include "qgavg/linmap.hpp"

using namespace qgavg;

namespace {

BlockedOperator coord_unit(const AlgebraShape& s, int c) {
  Vec v = Vec::Zero(s.total);
  v(c) = 1.0;
  return BlockedOperator::from_coords(s, v);
}

std::vector<int> sorted_dims(const AlgebraShape& s) {
  std::vector<int> d = s.dims;
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("double of the order two function algebra builds and verifies") {
  FiniteQuantumGroup G = builtin_model("z2");
  DrinfeldDouble D = build_double(G);
  CHECK(D.shape.total == 4);
  CHECK(D.coproduct.codomain.total == 16);
  CHECK(D.dual_structure.shape.total == 4);
  CHECK((D.lambda_d_inv * D.lambda_d.mat - Mat::Identity(4, 4)).norm() < 1e-10);
  Report r = verify_double(D);
  CAPTURE(r.render_text());
  CHECK(r.all_pass());
}

TEST_CASE("coproduct needs no twist over abelian bases") {
  for (const char* name : {"z2", "z3"}) {
    FiniteQuantumGroup G = builtin_model(name);
    DrinfeldDouble D = build_double(G);
    const AlgebraShape& ds = G.discrete_shape;
    const AlgebraShape& cs = G.dual_shape;
    LinearMap tm = tensor_map(G.coproduct, G.coproduct_hat);
    LinearMap perm = leg_permutation({ds, ds, cs, cs}, {0, 2, 1, 3});
    LinearMap plain{D.shape, D.coproduct.codomain, perm.mat * tm.mat};
    CAPTURE(name);
    CHECK(map_distance(D.coproduct, plain) < 1e-12);
  }
}

TEST_CASE("fixed space dimension equals the discrete block count") {
  const std::vector<std::pair<const char*, int>> want = {
      {"z2", 2}, {"z3", 3}, {"s3", 6}, {"s3dual", 3}};
  for (const auto& [name, blocks] : want) {
    FiniteQuantumGroup G = builtin_model(name);
    CAPTURE(name);
    CHECK(G.discrete_shape.blocks() == blocks);
    DrinfeldDouble D = build_double(G);
    CHECK(image_dimension(D.xi) == blocks);
    Report r = center_image_check(D);
    CAPTURE(r.render_text());
    CHECK(r.all_pass());
  }
}

TEST_CASE("averaging a matrix unit yields the normalized central projection") {
  FiniteQuantumGroup G = builtin_model("s3dual");
  DrinfeldDouble D = build_double(G);
  const AlgebraShape& ds = G.discrete_shape;
  int std_block = -1;
  for (int b = 0; b < ds.blocks(); ++b)
    if (ds.dims[b] == 2) std_block = b;
  REQUIRE(std_block >= 0);
  BlockedOperator x = tensor_elem(coord_unit(ds, ds.coord(std_block, 0, 0)),
                                  BlockedOperator::identity(G.dual_shape));
  DoubleAverage a = xi_double(D, x);
  Vec want = Vec::Zero(ds.total);
  want(ds.coord(std_block, 0, 0)) = 0.5;
  want(ds.coord(std_block, 1, 1)) = 0.5;
  CHECK((a.factor.coords() - want).norm() < 1e-12);
  BlockedOperator lift = tensor_elem(BlockedOperator::from_coords(ds, want),
                                     BlockedOperator::identity(G.dual_shape));
  CHECK((a.averaged - lift).coords().norm() < 1e-12);
}

TEST_CASE("averaging over a commutative discrete face is the haar slice") {
  FiniteQuantumGroup G = builtin_model("z3");
  DrinfeldDouble D = build_double(G);
  const AlgebraShape& ds = G.discrete_shape;
  const AlgebraShape& cs = G.dual_shape;
  BlockedOperator one_c = BlockedOperator::identity(cs);
  LinearMap hslice = slice_leg({ds, cs}, 1, G.haar_hat);
  Rng rng(3);
  for (int t = 0; t < 4; ++t) {
    BlockedOperator x = rng.element(D.shape);
    BlockedOperator want = tensor_elem(hslice(x), one_c);
    CHECK((D.xi(x) - want).coords().norm() < 1e-10 * (1.0 + x.coords().norm()));
  }
  // conditional expectation module property
  for (int t = 0; t < 3; ++t) {
    BlockedOperator x = rng.element(D.shape), y = rng.element(D.shape);
    BlockedOperator lhs = D.xi(x * D.xi(y));
    BlockedOperator rhs = D.xi(x) * D.xi(y);
    CHECK((lhs - rhs).coords().norm() <
          1e-10 * (1.0 + x.coords().norm()) * (1.0 + y.coords().norm()));
  }
}

TEST_CASE("four leg operator satisfies the pentagon") {
  FiniteQuantumGroup G = builtin_model("z3");
  DrinfeldDouble D = build_double(G);
  int n = G.gns_dim;
  std::vector<int> dims(6, n);
  auto wd = [&](int ha, int hb, Vec v) {
    v = apply_on_legs(D.Z, dims, {hb, hb + 1}, v);
    v = apply_on_legs(G.W_hat, dims, {ha + 1, hb + 1}, v);
    v = apply_on_legs(D.Z.adjoint(), dims, {hb, hb + 1}, v);
    v = apply_on_legs(G.W, dims, {ha, hb}, v);
    return v;
  };
  Rng rng(9);
  long total = 1;
  for (int d : dims) total *= d;
  for (int t = 0; t < 2; ++t) {
    Vec v = rng.cvector(static_cast<int>(total));
    Vec l = wd(2, 4, v);
    l = wd(0, 4, l);
    l = wd(0, 2, l);
    Vec r = wd(0, 2, v);
    r = wd(2, 4, r);
    CHECK((l - r).norm() / v.norm() < 1e-10);
  }
}

TEST_CASE("dual face blocks match the classical double of the symmetric group") {
  FiniteQuantumGroup G = builtin_model("s3");
  DrinfeldDouble D = build_double(G);
  CHECK(D.dual_structure.shape.total == 36);
  CHECK(sorted_dims(D.dual_structure.shape) == std::vector<int>{1, 1, 2, 2, 2, 2, 3, 3});
}

TEST_CASE("compression report passes and matches a random coefficient identity") {
  FiniteQuantumGroup G = builtin_model("z3");
  DrinfeldDouble D = build_double(G);
  DoubleCompression p = pz_maps(D);
  CAPTURE(p.report.render_text());
  CHECK(p.report.all_pass());

  // coefficient identity on a random pair instead of the unit bases
  const AlgebraShape& ds = G.discrete_shape;
  int n = G.gns_dim;
  Mat idh = Mat::Identity(n, n);
  Rng rng(17);
  BlockedOperator xh = rng.element(G.dual_shape);
  BlockedOperator xd = rng.element(ds);
  Mat a = kron(G.represent(xh), idh);
  Mat y = D.Z.adjoint() * kron(idh, G.represent_discrete(xd)) * D.Z * a;
  cplx xe = xd.coords()(ds.coord(G.trivial_block, 0, 0));
  Mat lhs = D.pz * y * D.pz;
  Mat rhs = xe * D.pz * a * D.pz;
  CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + xh.norm()) * (1.0 + xd.norm()));

  DoubleCompression p2 = pz_maps(build_double(builtin_model("s3dual")));
  CAPTURE(p2.report.render_text());
  CHECK(p2.report.all_pass());
}

TEST_CASE("restriction accepts fixed functionals and rejects the rest") {
  FiniteQuantumGroup G = builtin_model("z3");
  DrinfeldDouble D = build_double(G);
  DoubleCompression p = pz_maps(D);
  Rng rng(19);
  Vec mu = p.xi_one.mat * rng.cvector(D.dual_structure.shape.total);
  Functional f = iota(D, mu);
  CHECK(f.shape.total == G.dual_shape.total);
  Vec lhs = tensor_elem(G.lambda(f), BlockedOperator::identity(G.dual_shape)).coords();
  CHECK((lhs - D.lambda_d.mat * mu).norm() < 1e-10 * (1.0 + mu.norm()));

  Vec raw = rng.cvector(D.dual_structure.shape.total);
  REQUIRE((p.xi_one.mat * raw - raw).norm() > 1e-4);
  CHECK_THROWS(iota(D, raw));
}

TEST_CASE("embedded multipliers keep verdicts and unit norms") {
  FiniteQuantumGroup G = builtin_model("z2");
  DrinfeldDouble D = build_double(G);
  const AlgebraShape& ds = G.discrete_shape;

  EmbeddedMultiplier unit = multiplier_embedding(D, BlockedOperator::identity(ds));
  CHECK(unit.cp_base.cp);
  CHECK(unit.cp_double.cp);
  CHECK(map_distance(unit.mult.theta, LinearMap::identity(D.dual_structure.shape)) < 1e-10);

  std::vector<cplx> vals(ds.blocks(), cplx(1.0));
  vals[1 - G.trivial_block] = cplx(-3.0);
  EmbeddedMultiplier neg = multiplier_embedding(D, central_multiplier(ds, vals));
  CHECK(!neg.cp_base.cp);
  CHECK(!neg.cp_double.cp);

  EmbeddedMultiplier proj = multiplier_embedding(D, G.lambda(G.haar_hat));
  CHECK(proj.cp_base.cp);
  CHECK(proj.cp_double.cp);
  CHECK(proj.unit_gap < 1e-10);
}

TEST_CASE("double reports are deterministic") {
  auto run = [] {
    DrinfeldDouble D = build_double(builtin_model("s3dual"));
    return verify_double(D);
  };
  Report a = run();
  Report b = run();
  CHECK(a.all_pass());
  CHECK(a.render_text() == b.render_text());
  CHECK(a.digest() == b.digest());
}

TEST_CASE("full verification passes on the remaining builtin doubles") {
  for (const char* name : {"z3", "s3"}) {
    DrinfeldDouble D = build_double(builtin_model(name));
    Report r = verify_double(D);
    CAPTURE(name);
    CAPTURE(r.render_text());
    CHECK(r.all_pass());
  }
}

TEST_CASE("quaternion dual double verifies with the classical block data") {
  FiniteQuantumGroup G = builtin_model("q8dual");
  DrinfeldDouble D = build_double(G);
  CHECK(G.discrete_shape.blocks() == 5);
  CHECK(image_dimension(D.xi) == 5);
  CHECK(D.dual_structure.shape.total == 64);
  std::vector<int> want;
  for (int i = 0; i < 8; ++i) want.push_back(1);
  for (int i = 0; i < 14; ++i) want.push_back(2);
  CHECK(sorted_dims(D.dual_structure.shape) == want);
  Report r = verify_double(D);
  CAPTURE(r.render_text());
  CHECK(r.all_pass());
}
