#include "qgavg/coadjoint.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qgavg/averaging.hpp"
#include "qgavg/choi.hpp"
#include "qgavg/corep.hpp"
#include "qgavg/multiplier.hpp"

namespace qgavg {

namespace {

constexpr double kBuildTol = 1e-8;

BlockedOperator unit_of(const AlgebraShape& s, int c) {
  Vec v = Vec::Zero(s.total);
  v(c) = 1.0;
  return BlockedOperator::from_coords(s, v);
}

int block_of(const AlgebraShape& s, int c) {
  int b = 0;
  while (c >= s.coord_off[b + 1]) ++b;
  return b;
}

Vec flatten(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

// Per-block scalar weights of the Haar state; the state is tracial exactly
// when its representer is scalar on every block.
std::vector<double> haar_weights(const FiniteQuantumGroup& G) {
  std::vector<Mat> rep = G.haar_hat.representer();
  std::vector<double> w(rep.size());
  for (std::size_t b = 0; b < rep.size(); ++b) {
    int d = static_cast<int>(rep[b].rows());
    cplx t = rep[b].trace() / static_cast<double>(d);
    require((rep[b] - t * Mat::Identity(d, d)).norm() <= 1e-12 * (1.0 + rep[b].norm()),
            "coadjoint averaging needs a tracial haar state");
    require(std::abs(t.imag()) <= 1e-12 && t.real() > 0.0,
            "haar state weights must be positive");
    w[b] = t.real();
  }
  return w;
}

// x -> (h x id)(What* (1 x x) What), read back in discrete coordinates.
LinearMap build_average(const FiniteQuantumGroup& G) {
  const AlgebraShape& ds = G.discrete_shape;
  const int n = G.gns_dim;
  Mat stack(n * n, ds.total);
  for (int p = 0; p < ds.total; ++p) stack.col(p) = flatten(G.rep_units[p]);
  Eigen::ColPivHouseholderQR<Mat> qr(stack);
  Mat idh = Mat::Identity(n, n);
  Mat A(ds.total, ds.total);
  for (int k = 0; k < ds.total; ++k) {
    Mat x = G.represent_discrete(unit_of(ds, k));
    Mat y = G.W_hat.adjoint() * kron(idh, x) * G.W_hat;
    Mat sliced = G.slice_first(y, G.haar_hat);
    Vec f = flatten(sliced);
    Vec c = qr.solve(f);
    require((stack * c - f).norm() <= kBuildTol * (1.0 + f.norm()),
            "averaged element leaves the discrete algebra");
    A.col(k) = c;
  }
  return {ds, ds, A};
}

// Conditional expectation on coefficient pairs, assembled in the basis
// U^a_{ij} x U^b_{kl} and converted to coordinates.
LinearMap build_pair_expectation(const FiniteQuantumGroup& G) {
  const AlgebraShape& cs = G.dual_shape;
  const AlgebraShape& ds = G.discrete_shape;
  AlgebraShape cc = tensor_shape(cs, cs);
  const int N = ds.total;
  Mat basis(cc.total, N * N), target(cc.total, N * N);
  for (int a = 0; a < ds.blocks(); ++a) {
    int da = ds.dims[a];
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j) {
        int p = ds.coord(a, i, j);
        BlockedOperator up = G.irreps[a].entry(i, j);
        for (int b = 0; b < ds.blocks(); ++b) {
          int db = ds.dims[b];
          for (int k = 0; k < db; ++k)
            for (int l = 0; l < db; ++l) {
              int q = ds.coord(b, k, l);
              basis.col(p * N + q) = tensor_elem(up, G.irreps[b].entry(k, l)).coords();
              if (a == b && j == k)
                target.col(p * N + q) =
                    G.coproduct_hat.mat * G.irreps[a].entry(i, l).coords() /
                    static_cast<double>(da);
              else
                target.col(p * N + q) = Vec::Zero(cc.total);
            }
        }
      }
  }
  Eigen::ColPivHouseholderQR<Mat> qr(basis.transpose());
  Mat e = qr.solve(target.transpose()).transpose();
  require((e * basis - target).norm() <= kBuildTol * (1.0 + target.norm()),
          "coefficient pairs do not span the twofold product");
  return {cc, cc, e};
}

// x -> sum over irreps of chi h(chi^* x).
LinearMap build_class_expectation(const FiniteQuantumGroup& G) {
  const AlgebraShape& cs = G.dual_shape;
  std::vector<BlockedOperator> chi = characters(G);
  Mat f = Mat::Zero(cs.total, cs.total);
  for (const BlockedOperator& c : chi) {
    Functional w = pullback(left_mult(c.adjoint()), G.haar_hat);
    f += c.coords() * w.coeff.transpose();
  }
  return {cs, cs, f};
}

LinearMap build_section(const FiniteQuantumGroup& G, const LinearMap& pair_exp) {
  Eigen::ColPivHouseholderQR<Mat> qr(G.coproduct_hat.mat);
  Mat s = qr.solve(pair_exp.mat);
  require((G.coproduct_hat.mat * s - pair_exp.mat).norm() <=
              kBuildTol * (1.0 + pair_exp.mat.norm()),
          "pair expectation image escapes the coproduct image");
  return {pair_exp.domain, G.dual_shape, s};
}

double central_defect(const BlockedOperator& x) {
  double d = 0.0;
  for (std::size_t b = 0; b < x.blocks.size(); ++b) {
    int n = x.shape.dims[b];
    cplx t = x.blocks[b].trace() / static_cast<double>(n);
    d = std::max(d, (x.blocks[b] - t * Mat::Identity(n, n)).norm());
  }
  return d;
}

BlockedOperator central_projection(const AlgebraShape& s, int b) {
  BlockedOperator p = BlockedOperator::zero(s);
  p.blocks[b] = Mat::Identity(s.dims[b], s.dims[b]);
  return p;
}

}  // namespace

bool has_tracial_haar(const FiniteQuantumGroup& G) {
  try {
    haar_weights(G);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

CoadjointContext build_coadjoint(const FiniteQuantumGroup& G) {
  haar_weights(G);
  CoadjointContext C;
  C.G = G;
  C.average = build_average(G);
  C.pair_expectation = build_pair_expectation(G);
  C.class_expectation = build_class_expectation(G);
  C.coproduct_section = build_section(G, C.pair_expectation);
  return C;
}

BlockedOperator coadjoint_average(const CoadjointContext& C, const BlockedOperator& x) {
  require(x.shape == C.G.discrete_shape, "coadjoint averaging acts on the discrete side");
  return C.average(x);
}

LinearMap transported_action(const CoadjointContext& C, const LinearMap& T) {
  const AlgebraShape& cs = C.G.dual_shape;
  require(T.domain == cs && T.codomain == cs, "action maps live on the compact side");
  return C.coproduct_section * map_at_leg({cs, cs}, 1, T) * C.G.coproduct_hat;
}

Report verify_coadjoint(const FiniteQuantumGroup& G, double tol) {
  CoadjointContext C = build_coadjoint(G);
  const AlgebraShape& ds = G.discrete_shape;
  const AlgebraShape& cs = G.dual_shape;
  AlgebraShape cc = tensor_shape(cs, cs);
  const int n = G.gns_dim;
  const double exact = 1e-12;
  Report rep;
  rep.title = "coadjoint averaging on " + G.name;

  BlockedOperator oned = BlockedOperator::identity(ds);
  rep.add("average is unital", (C.average(oned) - oned).norm(), tol);

  double unit_res = 0.0;
  for (int a = 0; a < ds.blocks(); ++a) {
    int d = ds.dims[a];
    BlockedOperator pa = central_projection(ds, a);
    for (int m = 0; m < d; ++m)
      for (int nn = 0; nn < d; ++nn) {
        BlockedOperator got = C.average(unit_of(ds, ds.coord(a, m, nn)));
        BlockedOperator want = (m == nn) ? (1.0 / d) * pa : BlockedOperator::zero(ds);
        unit_res = std::max(unit_res, (got - want).norm());
      }
  }
  rep.add("average of each unit is the scaled central projection", unit_res, exact);

  rep.add("average is idempotent", map_distance(C.average * C.average, C.average), tol);

  double fix_res = 0.0;
  for (int a = 0; a < ds.blocks(); ++a) {
    BlockedOperator pa = central_projection(ds, a);
    fix_res = std::max(fix_res, (C.average(pa) - pa).norm());
  }
  rep.add("average fixes the central projections", fix_res, tol);

  int adim = image_dimension(C.average);
  rep.add("average image dimension matches the block count",
          std::abs(adim - ds.blocks()), tol);

  CpReport acp = cp_check(C.average);
  rep.add("average is completely positive",
          std::max({0.0, -acp.min_eig, acp.herm_defect}), tol);

  double triv = 0.0;
  Mat idh = Mat::Identity(n, n);
  for (int a = 0; a < ds.blocks(); ++a) {
    Mat p = G.represent_discrete(central_projection(ds, a));
    triv = std::max(triv,
                    (G.W_hat.adjoint() * kron(idh, p) * G.W_hat - kron(idh, p)).norm());
  }
  rep.add("adjoint action is trivial on the center", triv, tol);

  double sup = 0.0;
  for (int r = 0; r < ds.total; ++r)
    for (int c = 0; c < ds.total; ++c)
      if (block_of(ds, r) != block_of(ds, c))
        sup = std::max(sup, std::abs(C.average.mat(r, c)));
  rep.add("averaging keeps each block inside itself", sup, tol);

  const LinearMap& E = C.pair_expectation;
  rep.add("pair expectation is idempotent", map_distance(E * E, E), tol);

  Functional hh = tensor_functional(G.haar_hat, G.haar_hat);
  rep.add("pair expectation preserves the doubled haar state",
          (pullback(E, hh).coeff - hh.coeff).norm(), tol);

  rep.add("pair expectation fixes coproduct images",
          map_distance(E * G.coproduct_hat, G.coproduct_hat), tol);

  // Independent route: with tracial weights the coordinate basis is
  // orthogonal for the doubled state, so the expectation must equal the
  // weighted orthogonal projection onto the coproduct image.
  {
    std::vector<double> w = haar_weights(G);
    Vec diag(cc.total);
    for_each_product_coord({cs, cs}, [&](int c, const std::vector<LegCoord>& at) {
      diag(c) = w[at[0].b] * w[at[1].b];
    });
    Mat S = G.coproduct_hat.mat;
    Mat gram = S.adjoint() * diag.asDiagonal() * S;
    Mat proj = S * gram.llt().solve(Mat(S.adjoint() * diag.asDiagonal()));
    rep.add("pair expectation is the orthogonal projection of the doubled state",
            (proj - E.mat).norm(), tol);
  }

  CpReport ecp = cp_check(E);
  rep.add("pair expectation is completely positive",
          std::max({0.0, -ecp.min_eig, ecp.herm_defect}), tol);

  const LinearMap& F = C.class_expectation;
  rep.add("class expectation is idempotent", map_distance(F * F, F), tol);
  rep.add("class expectation preserves the haar state",
          (pullback(F, G.haar_hat).coeff - G.haar_hat.coeff).norm(), tol);

  std::vector<BlockedOperator> chi = characters(G);
  double coef_res = 0.0;
  for (int a = 0; a < ds.blocks(); ++a) {
    int d = ds.dims[a];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        BlockedOperator got = F(G.irreps[a].entry(i, j));
        BlockedOperator want =
            (i == j) ? (1.0 / d) * chi[a] : BlockedOperator::zero(cs);
        coef_res = std::max(coef_res, (got - want).norm());
      }
  }
  rep.add("class expectation sends coefficients to scaled characters", coef_res, exact);

  double ortho = 0.0;
  for (std::size_t a = 0; a < chi.size(); ++a)
    for (std::size_t b = 0; b < chi.size(); ++b) {
      cplx v = G.haar_hat(chi[a] * chi[b].adjoint());
      ortho = std::max(ortho, std::abs(v - (a == b ? 1.0 : 0.0)));
    }
  rep.add("characters are orthonormal under the haar state", ortho, exact);

  int fdim = image_dimension(F);
  rep.add("class expectation image dimension matches the irrep count",
          std::abs(fdim - ds.blocks()), tol);

  CpReport fcp = cp_check(F);
  rep.add("class expectation is completely positive",
          std::max({0.0, -fcp.min_eig, fcp.herm_defect}), tol);

  double bimod = 0.0;
  for (std::size_t a = 0; a < chi.size(); ++a)
    for (std::size_t b = 0; b < chi.size(); ++b) {
      LinearMap lhs = F * left_mult(chi[a]) * right_mult(chi[b]);
      LinearMap rhs = left_mult(chi[a]) * right_mult(chi[b]) * F;
      bimod = std::max(bimod, map_distance(lhs, rhs));
    }
  rep.add("class expectation is a character bimodule map", bimod, tol);

  rep.add("coproduct section splits the coproduct",
          map_distance(C.coproduct_section * G.coproduct_hat, LinearMap::identity(cs)),
          tol);
  rep.add("coproduct section composes back to the pair expectation",
          map_distance(G.coproduct_hat * C.coproduct_section, E), tol);

  double transp = 0.0;
  for (int k = 0; k < ds.total; ++k) {
    BlockedOperator a = unit_of(ds, k);
    LinearMap lhs = transported_action(C, theta_of(G, a).theta);
    LinearMap rhs = theta_of(G, C.average(a)).theta;
    transp = std::max(transp, map_distance(lhs, rhs));
  }
  rep.add("transported action maps agree with averaged multipliers", transp, tol);

  {
    Rng rng(53);
    double comp = 0.0;
    for (int s = 0; s < 5; ++s) {
      BlockedOperator a = rng.element(ds), b = rng.element(ds);
      LinearMap lhs =
          transported_action(C, theta_of(G, a).theta * theta_of(G, b).theta);
      LinearMap rhs = theta_of(G, C.average(b * a)).theta;
      comp = std::max(comp, map_distance(lhs, rhs));
    }
    rep.add("transported action respects composition, sampled", comp, tol);
  }

  rep.add("averaging intertwines the fourier transform",
          (C.average.mat * G.lambda_mat - G.lambda_mat * F.mat.transpose()).norm(), tol);

  {
    Rng rng(17);
    double four = 0.0;
    for (int s = 0; s < 50; ++s) {
      Functional w = rng.functional(cs);
      BlockedOperator lhs = C.average(G.lambda(w));
      BlockedOperator rhs = G.lambda(pullback(F, w));
      four = std::max(four, (lhs - rhs).norm());
    }
    rep.add("fourier routes agree on sampled functionals", four, tol);
  }

  rep.notes.push_back("center dimension: " + std::to_string(adim));
  return rep;
}

Report central_density_witness(const FiniteQuantumGroup& G, std::uint64_t seed,
                               double tol) {
  CoadjointContext C = build_coadjoint(G);
  const AlgebraShape& ds = G.discrete_shape;
  const AlgebraShape& cs = G.dual_shape;
  Report rep;
  rep.title = "central density witness on " + G.name;

  BlockedOperator oned = BlockedOperator::identity(ds);
  BlockedOperator unit_back = C.average(G.lambda(G.lambda_inv_of(oned)));
  rep.add("unit multiplier returns unchanged", (unit_back - oned).norm(), tol);

  Rng rng(seed);
  const int samples = 10;
  double in_cp = 0.0, central = 0.0, out_cp = 0.0, round_trip = 0.0, support = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<Mat> dens(cs.blocks());
    for (int b = 0; b < cs.blocks(); ++b) dens[b] = rng.psd(cs.dims[b]);
    Functional w = Functional::from_representer(cs, dens);
    BlockedOperator a0 = G.lambda(w);
    CpVerdict v0 = is_cp(G, a0);
    in_cp = std::max(in_cp, std::max(0.0, -v0.min_choi_eig));

    BlockedOperator a = C.average(a0);
    central = std::max(central, central_defect(a));
    CpVerdict v1 = is_cp(G, a);
    out_cp = std::max(out_cp, std::max(0.0, -v1.min_choi_eig));

    BlockedOperator b = C.average(G.lambda(G.lambda_inv_of(a)));
    round_trip = std::max(round_trip, (b - a).norm());

    int beta = s % ds.blocks();
    BlockedOperator x = BlockedOperator::zero(ds);
    x.blocks[beta] = rng.gaussian(ds.dims[beta], ds.dims[beta]);
    BlockedOperator y = C.average(x);
    for (int bb = 0; bb < ds.blocks(); ++bb)
      if (bb != beta) support = std::max(support, y.blocks[bb].norm());
  }
  rep.add("random positive functionals give CP multipliers", in_cp, tol);
  rep.add("averaged multipliers are central", central, tol);
  rep.add("averaged multipliers stay completely positive", out_cp, tol);
  rep.add("central multipliers round trip through their functionals", round_trip, tol);
  rep.add("block supported inputs keep their support", support, tol);
  rep.notes.push_back("samples: " + std::to_string(samples));
  return rep;
}

}  // namespace qgavg
