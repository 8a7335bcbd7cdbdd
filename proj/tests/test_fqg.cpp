#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qgavg/fqg.hpp"

using namespace qgavg;

namespace {

const Check& find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  REQUIRE(false);
  static Check dummy;
  return dummy;
}

Vec basis_vec(const FiniteQuantumGroup& G, int g) {
  // Dual-of-group models: one compact block per group element.
  Vec v = Vec::Zero(G.dual_shape.total);
  v(g) = 1.0;
  return G.gns(BlockedOperator::from_coords(G.dual_shape, v));
}

}  // namespace

TEST_CASE("every builtin satisfies the axioms") {
  for (const auto& name : builtin_model_names()) {
    CAPTURE(name);
    auto G = builtin_model(name);
    auto rep = verify_axioms(G, 1e-10);
    if (!rep.all_pass()) MESSAGE(rep.render_text());
    CHECK(rep.all_pass());
    CHECK(rep.max_residual() <= 1e-12);  // builders should be exact to rounding
  }
}

TEST_CASE("function algebra of z2") {
  auto G = builtin_model("z2");
  CHECK(G.discrete_shape.dims == std::vector<int>{1, 1});
  CHECK(G.gns_dim == 2);
  // Haar state in the group-element basis: 1 at the identity, 0 elsewhere.
  CHECK(std::abs(G.haar_hat(G.irreps[0].entry(0, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(G.haar_hat(G.irreps[1].entry(0, 0))) < 1e-14);
  // Abelian compact side: the conjugation is plain entrywise conjugation.
  CHECK((G.J_hat - Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("dual of z2") {
  auto G = build_dual_of_group(cyclic_group(2));
  CHECK(G.discrete_shape.dims == std::vector<int>{1, 1});
  for (int g = 0; g < 2; ++g) {
    Vec v = Vec::Zero(2);
    v(g) = 1.0;
    CHECK(std::abs(G.haar_hat(BlockedOperator::from_coords(G.dual_shape, v)) - 0.5) < 1e-14);
  }
}

TEST_CASE("pentagon residual on z3") {
  auto G = builtin_model("z3");
  auto rep = verify_axioms(G);
  CHECK(find_check(rep, "pentagon identity").residual <= 1e-12);
}

TEST_CASE("discrete shapes of the builtin models") {
  CHECK(builtin_model("s3").discrete_shape.dims == std::vector<int>(6, 1));
  CHECK(builtin_model("s3dual").discrete_shape.dims == std::vector<int>{1, 1, 2});
  CHECK(builtin_model("d4dual").discrete_shape.dims == std::vector<int>{1, 1, 1, 1, 2});
  CHECK(builtin_model("q8dual").discrete_shape.dims == std::vector<int>{1, 1, 1, 1, 2});
}

TEST_CASE("multiplicative operator acts by group translation") {
  // Function algebra face: basis Lambda(group element), W fixes the first
  // leg and multiplies into the second.
  auto g = symmetric_group_3();
  auto G = build_function_algebra(g);
  auto xi = [&](int a) { return G.gns(G.irreps[a].entry(0, 0)); };
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t) {
      Vec lhs = G.W * kron_vec(xi(s), xi(t));
      Vec rhs = kron_vec(xi(s), xi(g.table[s][t]));
      CHECK((lhs - rhs).norm() < 1e-12);
    }
}

TEST_CASE("dual face: translation operators through the Fourier transform") {
  auto g = symmetric_group_3();
  auto G = build_dual_of_group(g);
  for (int a = 0; a < 6; ++a) {
    Vec ev = Vec::Zero(6);
    ev(a) = 1.0;
    Mat L = G.represent_discrete(G.lambda(Functional{G.dual_shape, ev}));
    for (int t = 0; t < 6; ++t)
      CHECK((L * basis_vec(G, t) - basis_vec(G, g.table[a][t])).norm() < 1e-12);
    // Summing block-traces weighted by block dimension recovers the scaled
    // point mass at the identity.
    cplx tot = G.haar_weight(G.lambda(Functional{G.dual_shape, ev}));
    CHECK(std::abs(tot - (a == g.identity ? 6.0 : 0.0)) < 1e-12);
  }
  // And W itself translates: second leg by the inverse of the first.
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t) {
      Vec lhs = G.W * kron_vec(basis_vec(G, s), basis_vec(G, t));
      Vec rhs = kron_vec(basis_vec(G, g.table[g.inverse(t)][s]), basis_vec(G, t));
      CHECK((lhs - rhs).norm() < 1e-12);
    }
}

TEST_CASE("gns map is an isometry for the Haar inner product") {
  auto G = builtin_model("q8dual");
  Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    auto x = rng.element(G.dual_shape), y = rng.element(G.dual_shape);
    cplx ip = G.gns(x).dot(G.gns(y));  // Eigen dot conjugates the left argument
    cplx want = G.haar_hat(x.adjoint() * y);
    CHECK(std::abs(ip - want) < 1e-12);
  }
}

TEST_CASE("representation on H is a unital star-homomorphism") {
  auto G = builtin_model("s3dual");
  Rng rng(7);
  CHECK((G.represent(BlockedOperator::identity(G.dual_shape)) - Mat::Identity(6, 6)).norm() <
        1e-13);
  for (int t = 0; t < 5; ++t) {
    auto x = rng.element(G.dual_shape), y = rng.element(G.dual_shape);
    CHECK((G.represent(x * y) - G.represent(x) * G.represent(y)).norm() < 1e-12);
    CHECK((G.represent(x.adjoint()) - G.represent(x).adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("first-leg slice recovers simple tensors") {
  auto G = builtin_model("s3dual");
  Rng rng(11);
  for (int t = 0; t < 4; ++t) {
    auto a = rng.element(G.dual_shape);
    Mat B = rng.gaussian(G.gns_dim, G.gns_dim);
    Functional om = rng.functional(G.dual_shape);
    Mat got = G.slice_first(kron(G.represent(a), B), om);
    CHECK((got - om(a) * B).norm() < 1e-11 * (1 + a.norm()) * B.norm() * (1 + om.coeff.norm()));
  }
}

TEST_CASE("a corrupted coproduct is caught") {
  auto G = builtin_model("s3dual");
  G.coproduct_hat.mat(0, 0) += 1e-3;
  auto rep = verify_axioms(G);
  CHECK_FALSE(rep.all_pass());
  CHECK(find_check(rep, "coassociativity (compact side)").residual >= 1e-4);
}

TEST_CASE("assemble rejects a non-invariant state") {
  auto G = builtin_model("z2");
  Vec bad(2);
  bad << 0.6, 0.4;
  CHECK_THROWS(assemble_fqg("bad", G.dual_shape, G.coproduct_hat, G.counit_hat, G.antipode_hat,
                            Functional{G.dual_shape, bad}, G.irreps));
}

TEST_CASE("unknown builtin names are rejected") { CHECK_THROWS(builtin_model("zz")); }
