#include "qgavg/averaging.hpp"

#include "qgavg/groups.hpp"

#include <cmath>

namespace qgavg {

namespace {

constexpr double kBuildTol = 1e-8;

Functional haar_state_of_face(const FiniteQuantumGroup& K, bool compact_face) {
  if (compact_face) return K.haar_hat;
  return {K.discrete_shape, K.haar_weight.coeff / static_cast<double>(K.gns_dim)};
}

// Coefficients of x -> conj(omega(x^*)).
Vec conj_functional_coeff(const AlgebraShape& s, const Vec& coeff) {
  return transpose_perm(s).transpose() * coeff.conjugate();
}

}  // namespace

LinearMap averaging_map(const AlgebraShape& s, const LinearMap& cop, const Functional& eta) {
  require(cop.domain == s && cop.codomain == tensor_shape(s, s), "coproduct shape mismatch");
  require(eta.shape == s, "eta lives where the coproduct acts");
  LinearMap d2 = map_at_leg({s, s}, 0, cop) * cop;
  return slice_leg({s, s}, 0, eta) * slice_leg({s, s, s}, 2, eta) * d2;
}

int image_dimension(const LinearMap& f, double tol) {
  Eigen::ColPivHouseholderQR<Mat> qr(f.mat);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

std::vector<BlockedOperator> image_basis(const LinearMap& f, double tol) {
  Eigen::ColPivHouseholderQR<Mat> qr(f.mat);
  qr.setThreshold(tol);
  int r = static_cast<int>(qr.rank());
  Mat q = qr.householderQ();
  std::vector<BlockedOperator> v;
  v.reserve(r);
  for (int k = 0; k < r; ++k) v.push_back(BlockedOperator::from_coords(f.codomain, q.col(k)));
  return v;
}

SubgroupMorphism subgroup_morphism(const FiniteQuantumGroup& G, const FiniteQuantumGroup& K,
                                   const LinearMap& pi, bool target_compact_face) {
  const AlgebraShape& ds = G.discrete_shape;
  const AlgebraShape& ts = target_compact_face ? K.dual_shape : K.discrete_shape;
  require(pi.domain == ds, "pi starts on the discrete face of the source");
  require(pi.codomain == ts, "pi lands on the chosen face of the target");
  const LinearMap& copK = target_compact_face ? K.coproduct_hat : K.coproduct;

  BlockedOperator oneG = BlockedOperator::identity(ds);
  BlockedOperator oneK = BlockedOperator::identity(ts);
  require((pi(oneG) - oneK).coords().norm() <= kBuildTol, "pi must be unital");
  Rng rng(99);
  for (int t = 0; t < 6; ++t) {
    BlockedOperator x = rng.element(ds), y = rng.element(ds);
    require((pi(x * y) - pi(x) * pi(y)).coords().norm() <= kBuildTol * 100,
            "pi must be multiplicative");
    require((pi(x.adjoint()) - pi(x).adjoint()).coords().norm() <= kBuildTol * 100,
            "pi must respect the involution");
  }
  Eigen::ColPivHouseholderQR<Mat> qr(pi.mat);
  require(static_cast<int>(qr.rank()) == ts.total, "pi must be surjective");
  require(map_distance(copK * pi, tensor_map(pi, pi) * G.coproduct) <= kBuildTol,
          "pi must intertwine the coproducts");

  SubgroupMorphism m;
  m.source = G;
  m.target = K;
  m.target_compact_face = target_compact_face;
  m.pi = pi;
  m.pistar_h = pullback(pi, haar_state_of_face(K, target_compact_face));

  const Functional& eta = m.pistar_h;
  require(std::abs(eta(oneG) - 1.0) <= kBuildTol, "averaged state must be unital");
  require(eta.positivity_defect() <= kBuildTol, "averaged state must be positive");
  Vec conv = pullback(G.coproduct, tensor_functional(eta, eta)).coeff;
  require((conv - eta.coeff).norm() <= kBuildTol, "averaged state must be idempotent");
  Vec bar = conj_functional_coeff(ds, eta.coeff);
  require((bar - eta.coeff).norm() <= kBuildTol, "averaged state must be symmetric");
  require((G.antipode.mat.transpose() * bar - eta.coeff).norm() <= kBuildTol,
          "averaged state must be antipode-invariant");

  m.pihat_pe = slice_leg({ds, G.dual_shape}, 0, eta)(w_element_star(G));
  require((m.pihat_pe - m.pihat_pe.adjoint()).coords().norm() <= kBuildTol,
          "transformed state must be self-adjoint");
  require((m.pihat_pe * m.pihat_pe - m.pihat_pe).coords().norm() <= kBuildTol,
          "transformed state must be a projection");

  m.xi = averaging_map(ds, G.coproduct, eta);
  require(map_distance(m.xi * m.xi, m.xi) <= kBuildTol, "averaging must be idempotent");
  require((m.xi(oneG) - oneG).coords().norm() <= kBuildTol, "averaging must be unital");
  return m;
}

SubgroupMorphism trivial_subgroup(const FiniteQuantumGroup& G) {
  FiniteQuantumGroup K = build_dual_of_group(cyclic_group(1));
  LinearMap pi{G.discrete_shape, K.dual_shape, G.counit.coeff.transpose()};
  return subgroup_morphism(G, K, pi, true);
}

SubgroupMorphism full_subgroup(const FiniteQuantumGroup& G) {
  return subgroup_morphism(G, G, LinearMap::identity(G.discrete_shape), false);
}

SubgroupMorphism classical_subgroup(const FiniteGroupData& g, const FiniteGroupData& k,
                                    const std::vector<int>& embed) {
  require(static_cast<int>(embed.size()) == k.order, "one image per subgroup element");
  require(embed[k.identity] == g.identity, "embedding must fix the identity");
  for (int s = 0; s < k.order; ++s)
    for (int t = 0; t < k.order; ++t)
      require(embed[k.mult(s, t)] == g.mult(embed[s], embed[t]),
              "embedding must be a homomorphism");
  FiniteQuantumGroup G = build_function_algebra(g);
  FiniteQuantumGroup K = build_function_algebra(k);
  Mat p = Mat::Zero(K.discrete_shape.total, G.discrete_shape.total);
  for (int t = 0; t < k.order; ++t) p(t, embed[t]) = 1.0;
  return subgroup_morphism(G, K, {G.discrete_shape, K.discrete_shape, p}, false);
}

BlockedOperator average(const SubgroupMorphism& m, const BlockedOperator& x) {
  require(x.shape == m.source.discrete_shape, "averaging acts on the discrete face");
  return m.xi(x);
}

Report check_conditional_expectation(const SubgroupMorphism& m, double tol, int samples) {
  const FiniteQuantumGroup& G = m.source;
  const AlgebraShape& ds = G.discrete_shape;
  Report rep;
  rep.title = "conditional expectation onto biinvariants: " + G.name + " over " + m.target.name;

  BlockedOperator one = BlockedOperator::identity(ds);
  rep.add("idempotent", map_distance(m.xi * m.xi, m.xi), tol);
  rep.add("unital", (m.xi(one) - one).coords().norm(), tol);

  CpReport cp = cp_check(m.xi);
  rep.add("completely positive", cp.cp ? 0.0 : std::abs(cp.min_eig), tol);

  Mat p = transpose_perm(ds);
  rep.add("commutes with the involution", (p * m.xi.mat * p - m.xi.mat.conjugate()).norm(), tol);

  double r = 0.0;
  for (int c = 0; c < ds.total; ++c) {
    Vec e = Vec::Zero(ds.total);
    e[c] = 1.0;
    BlockedOperator x = BlockedOperator::from_coords(ds, e);
    BlockedOperator conv =
        convolve_right(G, convolve_left(G, m.pistar_h, x), m.pistar_h);
    r = std::max(r, (m.xi(x) - conv).coords().norm());
  }
  rep.add("two-sided convolution form", r, tol);

  Rng rng(314);
  r = 0.0;
  double contract = 0.0;
  for (int t = 0; t < samples; ++t) {
    BlockedOperator a = m.xi(rng.element(ds));
    BlockedOperator b = m.xi(rng.element(ds));
    BlockedOperator x = rng.element(ds);
    r = std::max(r, (m.xi(a * x * b) - a * m.xi(x) * b).coords().norm());
    contract = std::max(contract, m.xi(x).norm() - x.norm());
  }
  rep.add("bimodule law over the image", r, tol * 100);
  rep.add("contractive on samples", std::max(contract, 0.0), tol);

  const AlgebraShape& ts = m.pi.codomain;
  LinearMap pi_left = map_at_leg({ds, ds}, 0, m.pi);
  LinearMap pi_right = map_at_leg({ds, ds}, 1, m.pi);
  BlockedOperator oneK = BlockedOperator::identity(ts);
  auto basis = image_basis(m.xi);
  double rl = 0.0, rr = 0.0;
  for (const BlockedOperator& v : basis) {
    BlockedOperator dv = G.coproduct(v);
    rl = std::max(rl, (pi_left(dv) - tensor_elem(oneK, v)).coords().norm());
    rr = std::max(rr, (pi_right(dv) - tensor_elem(v, oneK)).coords().norm());
  }
  rep.add("image left biinvariance", rl, tol * 100);
  rep.add("image right biinvariance", rr, tol * 100);

  // Fixed-point test and the two intertwining equations must sort the same
  // elements into the image.
  int disagree = 0;
  for (int t = 0; t < samples; ++t) {
    BlockedOperator x = t % 2 == 0 ? rng.element(ds) : m.xi(rng.element(ds));
    double scale = 1.0 + x.coords().norm();
    bool fixed = (m.xi(x) - x).coords().norm() <= 1e-8 * scale;
    BlockedOperator dx = G.coproduct(x);
    bool biinv =
        (pi_left(dx) - tensor_elem(oneK, x)).coords().norm() <= 1e-8 * scale &&
        (pi_right(dx) - tensor_elem(x, oneK)).coords().norm() <= 1e-8 * scale;
    if (fixed != biinv) ++disagree;
  }
  rep.add("membership tests agree", static_cast<double>(disagree), 0.5);

  rep.notes.push_back("image dimension: " + std::to_string(image_dimension(m.xi)));
  return rep;
}

Multiplier average_multiplier(const SubgroupMorphism& m, const BlockedOperator& a) {
  return theta_of(m.source, average(m, a));
}

double averaged_theta_residual(const SubgroupMorphism& m, const BlockedOperator& a) {
  const FiniteQuantumGroup& G = m.source;
  const AlgebraShape& ds = G.discrete_shape;
  const AlgebraShape& cs = G.dual_shape;
  std::vector<AlgebraShape> legs{ds, ds, cs};

  BlockedOperator wstar = w_element_star(G);
  BlockedOperator w = wstar.adjoint();
  BlockedOperator w13 = embed_legs(w, legs, {0, 2});
  BlockedOperator w13s = embed_legs(wstar, legs, {0, 2});
  BlockedOperator w23 = embed_legs(w, legs, {1, 2});
  BlockedOperator w23s = embed_legs(wstar, legs, {1, 2});

  Multiplier ma = theta_of(G, a);
  Multiplier mx = average_multiplier(m, a);
  LinearMap th3 = map_at_leg(legs, 2, ma.theta);
  LinearMap sl0 = slice_leg(legs, 0, m.pistar_h);
  LinearMap sl0b = slice_leg({ds, cs}, 0, m.pistar_h);

  Mat rhs(cs.total, cs.total);
  for (int c = 0; c < cs.total; ++c) {
    Vec e = Vec::Zero(cs.total);
    e[c] = 1.0;
    BlockedOperator x3 = embed_legs(BlockedOperator::from_coords(cs, e), legs, {2});
    BlockedOperator t = w13s * th3(w13 * x3 * w23s) * w23;
    rhs.col(c) = sl0b(sl0(t)).coords();
  }
  return (mx.theta.mat - rhs).norm();
}

XiPair xi1_xiinf(const SubgroupMorphism& m) {
  XiPair p;
  p.xi_inf = left_mult(m.pihat_pe) * right_mult(m.pihat_pe);
  p.xi_one = adjoint_map(p.xi_inf);
  return p;
}

Report xi_fourier_report(const SubgroupMorphism& m, double tol) {
  const FiniteQuantumGroup& G = m.source;
  Report rep;
  rep.title = "fourier side of averaging: " + G.name + " over " + m.target.name;
  const BlockedOperator& q = m.pihat_pe;
  rep.add("transformed state self-adjoint", (q - q.adjoint()).coords().norm(), tol);
  rep.add("transformed state idempotent", (q * q - q).coords().norm(), tol);
  XiPair p = xi1_xiinf(m);
  rep.add("compression idempotent", map_distance(p.xi_inf * p.xi_inf, p.xi_inf), tol);
  CpReport cp = cp_check(p.xi_inf);
  rep.add("compression completely positive", cp.cp ? 0.0 : std::abs(cp.min_eig), tol);
  rep.add("fourier transform intertwines the two averagings",
          (G.lambda_mat * p.xi_one.mat - m.xi.mat * G.lambda_mat).norm(), tol);
  rep.notes.push_back("compressed image dimension: " +
                      std::to_string(image_dimension(p.xi_inf)));
  return rep;
}

}  // namespace qgavg
