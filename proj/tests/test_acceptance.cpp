#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "qgavg/averaging.hpp"
#include "qgavg/choi.hpp"
#include "qgavg/coadjoint.hpp"
#include "qgavg/corep.hpp"
#include "qgavg/ddouble.hpp"
#include "qgavg/suq2.hpp"

using namespace qgavg;

namespace {

// One verdict line per criterion so the binary reads as a checklist.
void verdict(int num, const char* name, bool ok) {
  std::printf("[%s] criterion %02d: %s\n", ok ? "PASS" : "FAIL", num, name);
  std::fflush(stdout);
  CHECK_MESSAGE(ok, name);
}

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
  return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

BlockedOperator unit_at(const AlgebraShape& s, int c) {
  Vec v = Vec::Zero(s.total);
  v(c) = 1.0;
  return BlockedOperator::from_coords(s, v);
}

Functional coord_functional(const AlgebraShape& s, int c) {
  Vec v = Vec::Zero(s.total);
  v(c) = 1.0;
  return Functional{s, v};
}

bool all_one_dim(const AlgebraShape& s) {
  for (int d : s.dims)
    if (d != 1) return false;
  return true;
}

// Element of the compact side whose action map is completely positive: the
// coefficient pattern sum_a sum_ij P^a_ji U^a_ij with every P^a positive
// semidefinite.
BlockedOperator positive_pattern(const FiniteQuantumGroup& G, Rng& rng) {
  BlockedOperator x = BlockedOperator::zero(G.dual_shape);
  for (std::size_t a = 0; a < G.irreps.size(); ++a) {
    int d = G.irreps[a].dim;
    Mat P = rng.psd(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) x = x + P(j, i) * G.irreps[a].entry(i, j);
  }
  return x;
}

// Central multipliers of the base with a completely positive action map.
// When the discrete side is commutative every transform of a positive
// functional qualifies; otherwise rejection-sample central coordinate
// patterns until the verdict comes back positive.
std::vector<BlockedOperator> central_cp_pool(const FiniteQuantumGroup& G, Rng& rng,
                                             int want) {
  std::vector<BlockedOperator> pool;
  if (all_one_dim(G.discrete_shape)) {
    while ((int)pool.size() < want) {
      std::vector<Mat> reps;
      for (int d : G.dual_shape.dims) reps.push_back(rng.psd(d));
      BlockedOperator c = G.lambda(Functional::from_representer(G.dual_shape, reps));
      if (is_cp(G, c).cp) pool.push_back(c);
    }
    return pool;
  }
  int tries = 0;
  while ((int)pool.size() < want && tries < 4000) {
    ++tries;
    std::vector<cplx> vals(G.discrete_shape.blocks());
    for (auto& v : vals) v = 2.0 * rng.u01() - 0.5;
    BlockedOperator c = central_multiplier(G.discrete_shape, vals);
    if (is_cp(G, c).cp) pool.push_back(c);
  }
  return pool;
}

// Mean conjugation action on the discrete side of a model whose compact side
// is a function algebra: every point gives a block-diagonal unitary.
LinearMap conjugation_oracle(const FiniteQuantumGroup& G) {
  const AlgebraShape& cs = G.dual_shape;
  const AlgebraShape& ds = G.discrete_shape;
  const int npts = cs.total;
  std::vector<BlockedOperator> u;
  for (int q = 0; q < npts; ++q) {
    BlockedOperator ug = BlockedOperator::zero(ds);
    for (int a = 0; a < ds.blocks(); ++a) {
      int d = ds.dims[a];
      Mat m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = G.irreps[a].entry(i, j).coords()(q);
      ug.blocks[a] = m;
    }
    u.push_back(ug);
  }
  Mat out(ds.total, ds.total);
  for (int c = 0; c < ds.total; ++c) {
    BlockedOperator acc = BlockedOperator::zero(ds);
    for (const BlockedOperator& ug : u)
      acc = acc + (1.0 / npts) * (ug * unit_at(ds, c) * ug.adjoint());
    out.col(c) = acc.coords();
  }
  return {ds, ds, out};
}

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = std::string(QGAVG_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("axiom suites pass under five seconds per builtin model") {
  bool ok = true;
  for (const std::string& name : builtin_model_names()) {
    CAPTURE(name);
    auto t0 = clock_t_::now();
    FiniteQuantumGroup G = builtin_model(name);
    Report r = verify_axioms(G, 1e-10);
    double secs = seconds_since(t0);
    CHECK(r.all_pass());
    CHECK(secs < 5.0);
    ok = ok && r.all_pass() && secs < 5.0;
  }
  verdict(1, "axiom suites pass under five seconds per builtin model", ok);
}

TEST_CASE("matrix coefficient orthogonality and trivial density on the dual models") {
  bool ok = true;
  for (const std::string& name : {"s3dual", "d4dual", "q8dual"}) {
    CAPTURE(name);
    FiniteQuantumGroup G = builtin_model(name);
    Report r = schur_check(G, build_irrep_table(G), 1e-12);
    CHECK(r.all_pass());
    ok = ok && r.all_pass();
    for (std::size_t a = 0; a < G.irreps.size(); ++a) {
      int d = G.irreps[a].dim;
      double gap = (extract_rho(G, (int)a) - Mat::Identity(d, d)).norm();
      CHECK(gap <= 1e-10);
      ok = ok && gap <= 1e-10;
    }
  }
  verdict(2, "matrix coefficient orthogonality and trivial density on the dual models", ok);
}

TEST_CASE("subgroup expectation matches the classical double coset average") {
  bool ok = true;
  auto g = symmetric_group_3();
  SubgroupMorphism m = classical_subgroup(g, cyclic_group(2), {0, 2});
  const AlgebraShape& ds = m.source.discrete_shape;

  double idem = map_distance(m.xi * m.xi, m.xi);
  CHECK(idem <= 1e-10);
  ok = ok && idem <= 1e-10;

  BlockedOperator one = BlockedOperator::identity(ds);
  double unital = (average(m, one) - one).norm();
  CHECK(unital <= 1e-10);
  ok = ok && unital <= 1e-10;

  CpReport cp = cp_check(m.xi);
  CHECK(cp.min_eig >= -1e-10);
  ok = ok && cp.min_eig >= -1e-10;

  Rng rng(303);
  double bimodule = 0.0;
  for (int t = 0; t < 20; ++t) {
    BlockedOperator a = average(m, rng.element(ds));
    BlockedOperator b = average(m, rng.element(ds));
    BlockedOperator x = rng.element(ds);
    bimodule = std::max(bimodule,
                        (average(m, a * x * b) - a * average(m, x) * b).norm());
  }
  CHECK(bimodule <= 1e-10);
  ok = ok && bimodule <= 1e-10;

  Report cond = check_conditional_expectation(m, 1e-10, 20);
  CHECK(cond.all_pass());
  ok = ok && cond.all_pass();

  std::vector<int> K = {0, 2};
  Mat oracle = Mat::Zero(6, 6);
  for (int x = 0; x < 6; ++x)
    for (int k1 : K)
      for (int k2 : K) oracle(x, g.mult(g.mult(k1, x), k2)) += 0.25;
  double entrywise = (m.xi.mat - oracle).cwiseAbs().maxCoeff();
  CHECK(entrywise <= 1e-12);
  ok = ok && entrywise <= 1e-12;

  std::set<int> seen;
  int cosets = 0;
  for (int x = 0; x < 6; ++x) {
    if (seen.count(x)) continue;
    ++cosets;
    for (int k1 : K)
      for (int k2 : K) seen.insert(g.mult(g.mult(k1, x), k2));
  }
  CHECK(image_dimension(m.xi) == cosets);
  ok = ok && image_dimension(m.xi) == cosets;

  verdict(3, "subgroup expectation matches the classical double coset average", ok);
}

TEST_CASE("double averaging fixes exactly the center and all routes agree") {
  bool ok = true;
  for (const std::string& name : {"z2", "z3", "s3dual", "q8dual"}) {
    CAPTURE(name);
    auto t0 = clock_t_::now();
    FiniteQuantumGroup G = builtin_model(name);
    DrinfeldDouble D = build_double(G);

    Report fixed = center_image_check(D, 1e-10);
    CHECK(fixed.all_pass());
    ok = ok && fixed.all_pass();

    double worst = 0.0;
    for (int c = 0; c < D.shape.total; ++c) {
      DoubleAverage a = xi_double(D, unit_at(D.shape, c), 1e-6);
      worst = std::max({worst, a.slice_residual, a.factor_residual, a.block_residual});
    }
    CHECK(worst <= 1e-10);
    ok = ok && worst <= 1e-10;

    double secs = seconds_since(t0);
    if (name == "q8dual") {
      CHECK(secs < 60.0);
      ok = ok && secs < 60.0;
    }
  }
  verdict(4, "double averaging fixes exactly the center and all routes agree", ok);
}

TEST_CASE("averaging preserves complete positivity and embedding preserves verdicts") {
  bool ok = true;
  for (const std::string& name : {"z2", "z3", "s3dual", "q8dual"}) {
    CAPTURE(name);
    FiniteQuantumGroup G = builtin_model(name);
    DrinfeldDouble D = build_double(G);
    Rng rng(505);
    BlockedOperator one_ds = BlockedOperator::identity(G.discrete_shape);
    BlockedOperator unit = BlockedOperator::identity(D.shape);

    std::vector<BlockedOperator> pool = central_cp_pool(G, rng, 4);
    REQUIRE((int)pool.size() == 4);

    double worst_in = 1e9, worst_out = 1e9;
    for (int t = 0; t < 100; ++t) {
      BlockedOperator b1 = multiplier_embedding(D, pool[t % pool.size()], 1e-9).embedded;
      BlockedOperator b2 = tensor_elem(one_ds, positive_pattern(G, rng));
      BlockedOperator b = rng.u01() * b1 + rng.u01() * b2 + rng.u01() * (b1 * b2) +
                          0.2 * rng.u01() * unit;
      worst_in = std::min(worst_in, cp_check(theta_double(D, b).theta).min_eig);
      BlockedOperator avg = xi_double(D, b, 1e-6).averaged;
      worst_out = std::min(worst_out, cp_check(theta_double(D, avg).theta).min_eig);
    }
    CHECK(worst_in >= -1e-10);
    CHECK(worst_out >= -1e-10);
    ok = ok && worst_in >= -1e-10 && worst_out >= -1e-10;

    int cp_count = 0, noncp_count = 0;
    bool agree = true;
    for (int t = 0; t < 100; ++t) {
      BlockedOperator c = pool[0];
      if (t % 5 == 0) {
        c = pool[(t / 5) % pool.size()];
      } else {
        std::vector<cplx> vals(G.discrete_shape.blocks());
        for (auto& v : vals) v = 2.0 * rng.u01() - 1.0;
        c = central_multiplier(G.discrete_shape, vals);
      }
      EmbeddedMultiplier e = multiplier_embedding(D, c, 1e-9);
      agree = agree && e.cp_base.cp == e.cp_double.cp;
      (e.cp_base.cp ? cp_count : noncp_count)++;
    }
    CHECK(agree);
    CHECK(cp_count > 0);
    CHECK(noncp_count > 0);
    ok = ok && agree && cp_count > 0 && noncp_count > 0;
  }
  verdict(5, "averaging preserves complete positivity and embedding preserves verdicts", ok);
}

TEST_CASE("action maps turn convolution into composition on full bases") {
  bool ok = true;
  for (const std::string& name : {"z3", "s3dual"}) {
    CAPTURE(name);
    FiniteQuantumGroup G = builtin_model(name);
    const AlgebraShape& ds = G.discrete_shape;
    double worst = 0.0;
    for (int i = 0; i < ds.total; ++i)
      for (int j = 0; j < ds.total; ++j)
        worst = std::max(worst, theta_of_convolution_residual(G, unit_at(ds, i),
                                                              coord_functional(ds, j)));
    CHECK(worst <= 1e-10);
    ok = ok && worst <= 1e-10;
  }
  verdict(6, "action maps turn convolution into composition on full bases", ok);
}

TEST_CASE("coadjoint averaging hits the scaled central projections and the conjugation oracle") {
  bool ok = true;
  for (const std::string& name : builtin_model_names()) {
    CAPTURE(name);
    FiniteQuantumGroup G = builtin_model(name);
    if (!has_tracial_haar(G)) continue;
    CoadjointContext C = build_coadjoint(G);
    const AlgebraShape& ds = G.discrete_shape;

    double worst = 0.0;
    for (int a = 0; a < ds.blocks(); ++a) {
      int d = ds.dims[a];
      BlockedOperator pa = BlockedOperator::zero(ds);
      pa.blocks[a] = Mat::Identity(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          BlockedOperator lhs = C.average(unit_at(ds, ds.coord(a, i, j)));
          BlockedOperator rhs = (i == j) ? (1.0 / d) * pa : BlockedOperator::zero(ds);
          worst = std::max(worst, (lhs - rhs).norm());
        }
    }
    CHECK(worst <= 1e-12);
    ok = ok && worst <= 1e-12;

    double oracle_gap = all_one_dim(G.dual_shape)
                            ? map_distance(C.average, conjugation_oracle(G))
                            : map_distance(C.average, LinearMap::identity(ds));
    CHECK(oracle_gap <= 1e-12);
    ok = ok && oracle_gap <= 1e-12;
  }
  verdict(7, "coadjoint averaging hits the scaled central projections and the conjugation oracle", ok);
}

TEST_CASE("class expectation formula and both transform routes agree") {
  bool ok = true;
  for (const std::string& name : builtin_model_names()) {
    CAPTURE(name);
    FiniteQuantumGroup G = builtin_model(name);
    if (!has_tracial_haar(G)) continue;
    CoadjointContext C = build_coadjoint(G);
    std::vector<BlockedOperator> chars = characters(G);

    double worst = 0.0;
    for (std::size_t a = 0; a < G.irreps.size(); ++a) {
      int d = G.irreps[a].dim;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          BlockedOperator lhs = C.class_expectation(G.irreps[a].entry(i, j));
          BlockedOperator rhs = (i == j) ? (1.0 / d) * chars[a]
                                         : BlockedOperator::zero(G.dual_shape);
          worst = std::max(worst, (lhs - rhs).norm());
        }
    }
    CHECK(worst <= 1e-12);
    ok = ok && worst <= 1e-12;

    Rng rng(808);
    double route_gap = 0.0;
    for (int t = 0; t < 50; ++t) {
      Functional om = rng.functional(G.dual_shape);
      BlockedOperator lhs = C.average(G.lambda(om));
      Functional pushed{G.dual_shape, C.class_expectation.mat.transpose() * om.coeff};
      route_gap = std::max(route_gap, (lhs - G.lambda(pushed)).norm());
    }
    CHECK(route_gap <= 1e-10);
    ok = ok && route_gap <= 1e-10;
  }
  verdict(8, "class expectation formula and both transform routes agree", ok);
}

TEST_CASE("dual face compression identities hold") {
  bool ok = true;
  for (const std::string& name : {"z2", "z3", "s3dual", "q8dual"}) {
    CAPTURE(name);
    FiniteQuantumGroup G = builtin_model(name);
    DrinfeldDouble D = build_double(G);
    DoubleCompression p = pz_maps(D, 1e-10);
    CHECK(p.report.all_pass());
    ok = ok && p.report.all_pass();

    double idem = (D.pz * D.pz - D.pz).norm();
    double sa = (D.pz - D.pz.adjoint()).norm();
    double neutral = (D.pz - lambda_double_mat(D, G.counit, G.haar_hat)).norm();
    double twine = (D.lambda_d.mat * p.xi_one.mat - D.xi.mat * D.lambda_d.mat).norm();
    CHECK(idem <= 1e-10);
    CHECK(sa <= 1e-10);
    CHECK(neutral <= 1e-10);
    CHECK(twine <= 1e-10);
    ok = ok && idem <= 1e-10 && sa <= 1e-10 && neutral <= 1e-10 && twine <= 1e-10;
  }
  verdict(9, "dual face compression identities hold", ok);
}

TEST_CASE("quantum su2 block averaging is unital, classical in the limit, multiplicative on dimensions") {
  bool ok = true;
  for (double q : {0.3, 0.5, 0.9}) {
    CAPTURE(q);
    FusionData d = make_fusion_data(q, 3.0);
    for (double l : {0.0, 0.5, 1.0, 1.5}) {
      int n = spin_dim(l);
      cplx s = xi_block_scalar(d, l, Mat::Identity(n, n));
      CHECK(s.real() == 1.0);
      CHECK(s.imag() == 0.0);
      ok = ok && s.real() == 1.0 && s.imag() == 0.0;
    }
    double gap = std::abs(qdim(q, 0.5) * qdim(q, 0.5) - (qdim(q, 0.0) + qdim(q, 1.0)));
    CHECK(gap <= 1e-12);
    ok = ok && gap <= 1e-12;
  }

  FusionData near = make_fusion_data(1.0 - 1e-6, 2.0);
  Rng rng(1010);
  for (double l : {0.5, 1.0}) {
    int n = spin_dim(l);
    Mat x = rng.hermitian(n);
    double gap = std::abs(xi_block_scalar(near, l, x) - x.trace() / (double)n);
    CHECK(gap <= 1e-4);
    ok = ok && gap <= 1e-4;
  }
  verdict(10, "quantum su2 block averaging is unital, classical in the limit, multiplicative on dimensions", ok);
}

TEST_CASE("completely bounded norm is exact on cp maps and sharp on the transpose") {
  bool ok = true;

  FiniteQuantumGroup G = builtin_model("s3");
  Rng rng(1111);
  std::vector<Mat> reps;
  for (int d : G.dual_shape.dims) reps.push_back(rng.psd(d));
  BlockedOperator c = G.lambda(Functional::from_representer(G.dual_shape, reps));
  REQUIRE(is_cp(G, c).cp);
  Multiplier m = theta_of(G, c);
  CbResult r = cb_norm(m.theta);
  CHECK(r.exact);
  bool bitwise = r.value == m.theta(BlockedOperator::identity(m.theta.domain)).norm();
  CHECK(bitwise);
  ok = ok && r.exact && bitwise;

  AlgebraShape m2 = AlgebraShape::of({2});
  Mat T = Mat::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) T(m2.coord(0, j, i), m2.coord(0, i, j)) = 1.0;
  CbOpts opts;
  opts.restarts = 8;
  CbResult tr = cb_norm(LinearMap{m2, m2, T}, opts);
  CHECK(!tr.exact);
  CHECK(std::abs(tr.value - 2.0) <= 1e-3);
  ok = ok && !tr.exact && std::abs(tr.value - 2.0) <= 1e-3;

  verdict(11, "completely bounded norm is exact on cp maps and sharp on the transpose", ok);
}

TEST_CASE("repeated verification runs emit byte identical reports") {
  auto [code1, out1] = run_cli("double verify --group builtin:s3dual --format json");
  auto [code2, out2] = run_cli("double verify --group builtin:s3dual --format json");
  bool ok = code1 == 0 && code2 == 0 && !out1.empty() && out1 == out2;
  CHECK(code1 == 0);
  CHECK(code2 == 0);
  CHECK(out1 == out2);
  verdict(12, "repeated verification runs emit byte identical reports", ok);
}
