#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qgavg/multiplier.hpp"

using namespace qgavg;

TEST_CASE("unit multiplier acts as the identity and is completely positive") {
  for (const auto& name : builtin_model_names()) {
    CAPTURE(name);
    auto G = builtin_model(name);
    Multiplier m = theta_of(G, BlockedOperator::identity(G.discrete_shape));
    CHECK(map_distance(m.theta, LinearMap::identity(G.dual_shape)) < 1e-12);
    CHECK(m.central);
    CpVerdict v = is_cp(G, m.b);
    CHECK(v.cp);
    CHECK(v.functional_defect < 1e-12);
  }
}

TEST_CASE("transform of the Haar state averages to the unit") {
  for (const auto& name : builtin_model_names()) {
    CAPTURE(name);
    auto G = builtin_model(name);
    Multiplier m = theta_of(G, G.lambda(G.haar_hat));
    Mat expected = BlockedOperator::identity(G.dual_shape).coords() *
                   G.haar_hat.coeff.transpose();
    CHECK((m.theta.mat - expected).norm() < 1e-12);
  }
}

TEST_CASE("central multiplier scales corepresentation coefficients blockwise") {
  auto G = builtin_model("s3dual");
  BlockedOperator b = central_multiplier(G.discrete_shape, {1.0, 1.0, 0.0});
  Multiplier m = theta_of(G, b);
  CHECK(m.central);
  auto c = central_values(b);
  CHECK(std::abs(c[2]) < 1e-15);
  for (size_t al = 0; al < G.irreps.size(); ++al) {
    int d = G.irreps[al].dim;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        BlockedOperator u = G.irreps[al].entry(i, j);
        CHECK((m.theta(u) - c[al] * u).coords().norm() < 1e-12);
      }
  }
  // Density of the transformed functional is (1 + sign)/6 pointwise, never
  // negative, so this one sits exactly on the positive boundary.
  CpVerdict v = is_cp(G, b);
  CHECK(v.cp);
}

TEST_CASE("two-point models decide complete positivity by two masses") {
  auto G = builtin_model("z2");
  std::vector<double> grid = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  for (double c0 : grid)
    for (double c1 : grid) {
      CAPTURE(c0);
      CAPTURE(c1);
      BlockedOperator b = central_multiplier(G.discrete_shape, {c0, c1});
      bool expected = (c0 + c1 >= -1e-12) && (c0 - c1 >= -1e-12);
      CHECK(is_cp(G, b).cp == expected);
    }
}

TEST_CASE("convolution with point evaluations translates functions") {
  auto g = symmetric_group_3();
  auto G = builtin_model("s3");
  Rng rng(11);
  BlockedOperator a = rng.element(G.discrete_shape);
  for (int u = 0; u < g.order; ++u) {
    Functional ev{G.discrete_shape, Vec::Zero(G.discrete_shape.total)};
    ev.coeff[u] = 1.0;
    BlockedOperator right = convolve_right(G, a, ev);
    BlockedOperator left = convolve_left(G, ev, a);
    for (int t = 0; t < g.order; ++t) {
      CHECK(std::abs(right.coords()[t] - a.coords()[g.mult(t, u)]) < 1e-12);
      CHECK(std::abs(left.coords()[t] - a.coords()[g.mult(u, t)]) < 1e-12);
    }
  }
}

TEST_CASE("counit is neutral for convolution on both faces") {
  for (const auto& name : builtin_model_names()) {
    CAPTURE(name);
    auto G = builtin_model(name);
    Rng rng(5);
    BlockedOperator a = rng.element(G.discrete_shape);
    CHECK((convolve_right(G, a, G.counit) - a).coords().norm() < 1e-12);
    CHECK((convolve_left(G, G.counit, a) - a).coords().norm() < 1e-12);
    if (G.dual_shape == G.discrete_shape) continue;  // dispatch is by shape
    BlockedOperator x = rng.element(G.dual_shape);
    CHECK((convolve_right(G, x, G.counit_hat) - x).coords().norm() < 1e-12);
    CHECK((convolve_left(G, G.counit_hat, x) - x).coords().norm() < 1e-12);
  }
}

TEST_CASE("convolution actions associate and commute across sides") {
  for (const auto& name : {"z3", "s3", "s3dual", "q8dual"}) {
    CAPTURE(name);
    auto G = builtin_model(name);
    Rng rng(17);
    BlockedOperator a = rng.element(G.discrete_shape);
    Functional om = rng.functional(G.discrete_shape);
    Functional op = rng.functional(G.discrete_shape);
    BlockedOperator lhs = convolve_right(G, convolve_right(G, a, om), op);
    BlockedOperator rhs = convolve_right(G, a, convolve(G, om, op));
    CHECK((lhs - rhs).coords().norm() < 1e-10);
    BlockedOperator mix1 = convolve_right(G, convolve_left(G, om, a), op);
    BlockedOperator mix2 = convolve_left(G, om, convolve_right(G, a, op));
    CHECK((mix1 - mix2).coords().norm() < 1e-10);
    CHECK(convolve_right(G, a, om).norm() <= a.norm() * functional_norm(om) + 1e-10);
  }
}

TEST_CASE("functional norm on one-dimensional blocks is the l1 norm") {
  auto G = builtin_model("s3");
  Rng rng(23);
  Functional om = rng.functional(G.discrete_shape);
  double l1 = 0.0;
  for (int c = 0; c < G.discrete_shape.total; ++c) l1 += std::abs(om.coeff[c]);
  CHECK(std::abs(functional_norm(om) - l1) < 1e-12);
}

TEST_CASE("action map of a convolved multiplier obeys the slice formula") {
  for (const auto& name : {"z3", "s3", "s3dual", "q8dual"}) {
    CAPTURE(name);
    auto G = builtin_model(name);
    Rng rng(29);
    BlockedOperator a = rng.element(G.discrete_shape);
    Functional om = rng.functional(G.discrete_shape);
    CHECK(theta_of_convolution_residual(G, a, om) < 1e-10);
  }
  auto G = builtin_model("s3");
  Rng rng(31);
  BlockedOperator a = rng.element(G.discrete_shape);
  CHECK(theta_of_convolution_residual(G, a, G.counit) < 1e-12);
  Multiplier m1 = theta_of(G, convolve_right(G, a, G.counit));
  Multiplier m2 = theta_of(G, a);
  CHECK(map_distance(m1.theta, m2.theta) < 1e-12);
}

TEST_CASE("action maps compose like their multipliers multiply") {
  auto G = builtin_model("q8dual");
  Rng rng(37);
  BlockedOperator b1 = rng.element(G.discrete_shape);
  BlockedOperator b2 = rng.element(G.discrete_shape);
  Multiplier m1 = theta_of(G, b1);
  Multiplier m2 = theta_of(G, b2);
  Multiplier mp = theta_of(G, b1 * b2);
  CHECK(map_distance(mp.theta_star, m1.theta_star * m2.theta_star) < 1e-10);
}

TEST_CASE("central multipliers form a commutative pointwise algebra") {
  auto G = builtin_model("d4dual");
  Rng rng(41);
  std::vector<cplx> c1, c2, cp;
  for (int k = 0; k < G.discrete_shape.blocks(); ++k) {
    c1.push_back(rng.cgauss());
    c2.push_back(rng.cgauss());
    cp.push_back(c1[k] * c2[k]);
  }
  Multiplier m1 = theta_of(G, central_multiplier(G.discrete_shape, c1));
  Multiplier m2 = theta_of(G, central_multiplier(G.discrete_shape, c2));
  Multiplier mp = theta_of(G, central_multiplier(G.discrete_shape, cp));
  CHECK(map_distance(m1.theta * m2.theta, m2.theta * m1.theta) < 1e-12);
  CHECK(map_distance(m1.theta * m2.theta, mp.theta) < 1e-12);
}

TEST_CASE("multiplier law report passes on every builtin") {
  for (const auto& name : builtin_model_names()) {
    CAPTURE(name);
    auto G = builtin_model(name);
    Rng rng(43);
    Report r = multiplier_report(G, rng.element(G.discrete_shape));
    CAPTURE(r.render_text());
    CHECK(r.all_pass());
    std::vector<cplx> c;
    for (int k = 0; k < G.discrete_shape.blocks(); ++k) c.push_back(rng.cgauss());
    Report rc = multiplier_report(G, central_multiplier(G.discrete_shape, c));
    CHECK(rc.all_pass());
  }
}

TEST_CASE("positive decomposition of a central multiplier") {
  auto G = builtin_model("s3dual");
  Rng rng(47);
  std::vector<cplx> c;
  for (int k = 0; k < G.discrete_shape.blocks(); ++k) c.push_back(rng.cgauss());
  BlockedOperator b = central_multiplier(G.discrete_shape, c);
  CentralDecomposition d = positive_decomposition(G, b);
  CHECK(d.residual < 1e-10);
  for (int k = 0; k < 4; ++k) {
    CHECK(d.omega[k].positivity_defect() < 1e-10);
    CHECK(is_central(d.part[k], 1e-9));
    CHECK(is_cp(G, d.part[k]).cp);
  }
}

TEST_CASE("two-point decomposition matches the closed form") {
  auto G = builtin_model("z2");
  BlockedOperator b = central_multiplier(G.discrete_shape, {1.0, -3.0});
  CHECK_FALSE(is_cp(G, b).cp);
  CentralDecomposition d = positive_decomposition(G, b);
  CHECK(d.residual < 1e-12);
  auto v0 = central_values(d.part[0]);
  auto v2 = central_values(d.part[2]);
  CHECK(std::abs(v0[0] - 2.0) < 1e-12);
  CHECK(std::abs(v0[1] + 2.0) < 1e-12);
  CHECK(std::abs(v2[0] - 1.0) < 1e-12);
  CHECK(std::abs(v2[1] - 1.0) < 1e-12);
  CHECK(d.part[1].norm() < 1e-12);
  CHECK(d.part[3].norm() < 1e-12);
}

TEST_CASE("decomposition rejects non-central input") {
  auto G = builtin_model("s3dual");
  Rng rng(53);
  BlockedOperator b = rng.element(G.discrete_shape);
  CHECK_FALSE(is_central(b));
  CHECK_THROWS(positive_decomposition(G, b));
}

TEST_CASE("completely positive multipliers take the exact norm path") {
  auto G = builtin_model("z2");
  BlockedOperator b = central_multiplier(G.discrete_shape, {2.0, 1.0});
  CHECK(is_cp(G, b).cp);
  Multiplier m = theta_of(G, b);
  CbResult exact = cb_norm(m.theta);
  CHECK(exact.exact);
  CHECK(std::abs(exact.value - m.theta(BlockedOperator::identity(G.dual_shape)).norm()) <
        1e-12);
  CHECK(std::abs(exact.value - 2.0) < 1e-12);
  CbOpts opts;
  opts.cp_shortcut = false;
  CbResult ascent = cb_norm(m.theta, opts);
  CHECK(ascent.value <= exact.value + 1e-8);
  CHECK(ascent.value >= exact.value - 1e-3);

  auto H = builtin_model("s3dual");
  Rng rng(59);
  Functional om{H.dual_shape, Vec::Zero(H.dual_shape.total)};
  {
    BlockedOperator dens = rng.psd_element(H.dual_shape);
    std::vector<Mat> wrep = H.haar_hat.representer();
    std::vector<Mat> rep(H.dual_shape.blocks());
    for (int k = 0; k < H.dual_shape.blocks(); ++k)
      rep[k] = wrep[k](0, 0).real() * dens.blocks[k];
    om = Functional::from_representer(H.dual_shape, rep);
  }
  BlockedOperator bb = H.lambda(om);
  CHECK(is_cp(H, bb).cp);
  Multiplier mh = theta_of(H, bb);
  CbResult ce = cb_norm(mh.theta);
  CHECK(ce.exact);
  CHECK(std::abs(ce.value - mh.theta(BlockedOperator::identity(H.dual_shape)).norm()) <
        1e-12);
}
