#include "qgavg/multiplier.hpp"

#include <cmath>

namespace qgavg {

namespace {

// Blockwise spectral positive part of a hermitian element; flip = true gives
// the negative part. Stays inside any C*-subalgebra containing the input.
BlockedOperator spectral_part(const BlockedOperator& x, bool flip) {
  BlockedOperator r = x;
  for (std::size_t k = 0; k < r.blocks.size(); ++k) {
    Eigen::SelfAdjointEigenSolver<Mat> es(x.blocks[k]);
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
      double v = flip ? -ev[i] : ev[i];
      ev[i] = v > 0.0 ? v : 0.0;
    }
    r.blocks[k] = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }
  return r;
}

const LinearMap& side_coproduct(const FiniteQuantumGroup& G, const AlgebraShape& s) {
  if (s == G.discrete_shape) return G.coproduct;
  require(s == G.dual_shape, "convolution argument must live on one of the two faces");
  return G.coproduct_hat;
}

}  // namespace

bool is_central(const BlockedOperator& b, double tol) {
  double scale = 1.0 + b.norm();
  for (std::size_t k = 0; k < b.blocks.size(); ++k) {
    int d = b.shape.dims[k];
    cplx c = b.blocks[k].trace() / static_cast<double>(d);
    if ((b.blocks[k] - c * Mat::Identity(d, d)).norm() > tol * scale) return false;
  }
  return true;
}

std::vector<cplx> central_values(const BlockedOperator& b) {
  require(is_central(b), "central_values needs blockwise scalar input");
  std::vector<cplx> c(b.blocks.size());
  for (std::size_t k = 0; k < b.blocks.size(); ++k)
    c[k] = b.blocks[k].trace() / static_cast<double>(b.shape.dims[k]);
  return c;
}

BlockedOperator central_multiplier(const AlgebraShape& s, const std::vector<cplx>& c) {
  require(static_cast<int>(c.size()) == s.blocks(), "one value per block");
  BlockedOperator b = BlockedOperator::zero(s);
  for (int k = 0; k < s.blocks(); ++k)
    b.blocks[k] = c[k] * Mat::Identity(s.dims[k], s.dims[k]);
  return b;
}

Multiplier theta_of(const FiniteQuantumGroup& G, const BlockedOperator& b) {
  require(b.shape == G.discrete_shape, "multipliers live on the discrete side");
  Multiplier m;
  m.b = b;
  m.theta_star = {G.dual_shape, G.dual_shape, G.lambda_inv * left_mult(b).mat * G.lambda_mat};
  m.theta = predual_transport(m.theta_star);
  m.central = is_central(b);
  return m;
}

double functional_norm(const Functional& omega) {
  std::vector<double> terms;
  for (const Mat& f : omega.representer()) {
    Eigen::JacobiSVD<Mat> svd(f);
    for (int i = 0; i < svd.singularValues().size(); ++i)
      terms.push_back(svd.singularValues()[i]);
  }
  return stable_sum(std::move(terms));
}

CpVerdict is_cp(const FiniteQuantumGroup& G, const BlockedOperator& b) {
  Multiplier m = theta_of(G, b);
  CpReport choi = cp_check(m.theta);
  Functional omega = G.lambda_inv_of(b);
  CpVerdict v;
  v.min_choi_eig = choi.min_eig;
  v.functional_defect = omega.positivity_defect();
  bool func_cp = v.functional_defect <= kPsdTol * (1.0 + omega.coeff.norm());
  require(choi.cp == func_cp, "positivity verdicts of the Choi matrix and the "
                              "transformed functional disagree");
  v.cp = choi.cp;
  return v;
}

BlockedOperator convolve_right(const FiniteQuantumGroup& G, const BlockedOperator& a,
                               const Functional& omega) {
  require(omega.shape == a.shape, "element and functional must share a face");
  const LinearMap& cop = side_coproduct(G, a.shape);
  return slice_leg({a.shape, a.shape}, 0, omega)(cop(a));
}

BlockedOperator convolve_left(const FiniteQuantumGroup& G, const Functional& omega,
                              const BlockedOperator& a) {
  require(omega.shape == a.shape, "element and functional must share a face");
  const LinearMap& cop = side_coproduct(G, a.shape);
  return slice_leg({a.shape, a.shape}, 1, omega)(cop(a));
}

Functional convolve(const FiniteQuantumGroup& G, const Functional& a, const Functional& b) {
  require(a.shape == b.shape, "functional convolution needs one common face");
  const LinearMap& cop = side_coproduct(G, a.shape);
  return pullback(cop, tensor_functional(a, b));
}

BlockedOperator w_element_star(const FiniteQuantumGroup& G) {
  const AlgebraShape& ds = G.discrete_shape;
  BlockedOperator wstar = BlockedOperator::zero(tensor_shape(ds, G.dual_shape));
  for (std::size_t al = 0; al < G.irreps.size(); ++al) {
    int d = G.irreps[al].dim;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Vec e = Vec::Zero(ds.total);
        e[ds.coord(static_cast<int>(al), i, j)] = 1.0;
        wstar = wstar + tensor_elem(BlockedOperator::from_coords(ds, e),
                                    G.irreps[al].entry(i, j));
      }
  }
  return wstar;
}

double theta_of_convolution_residual(const FiniteQuantumGroup& G, const BlockedOperator& a,
                                     const Functional& omega) {
  require(a.shape == G.discrete_shape, "multipliers live on the discrete side");
  require(omega.shape == G.discrete_shape, "omega pairs with the discrete side");
  const AlgebraShape& ds = G.discrete_shape;
  const AlgebraShape& cs = G.dual_shape;
  std::vector<AlgebraShape> legs{ds, cs};

  BlockedOperator wstar = w_element_star(G);
  BlockedOperator w = wstar.adjoint();

  Multiplier ma = theta_of(G, a);
  Multiplier mc = theta_of(G, convolve_right(G, a, omega));
  LinearMap theta_leg = map_at_leg(legs, 1, ma.theta);
  LinearMap sl = slice_leg(legs, 0, omega);
  BlockedOperator one_d = BlockedOperator::identity(ds);

  Mat rhs(cs.total, cs.total);
  for (int c = 0; c < cs.total; ++c) {
    Vec e = Vec::Zero(cs.total);
    e[c] = 1.0;
    BlockedOperator t = tensor_elem(one_d, BlockedOperator::from_coords(cs, e)) * wstar;
    rhs.col(c) = sl(theta_leg(t) * w).coords();
  }
  return (mc.theta.mat - rhs).norm();
}

Report multiplier_report(const FiniteQuantumGroup& G, const BlockedOperator& b, double tol) {
  require(b.shape == G.discrete_shape, "multipliers live on the discrete side");
  const AlgebraShape& cs = G.dual_shape;
  Multiplier m = theta_of(G, b);
  Report rep;
  rep.title = "multiplier laws on " + G.name;

  double r = 0.0;
  for (int c = 0; c < cs.total; ++c) {
    Vec e = Vec::Zero(cs.total);
    e[c] = 1.0;
    Functional omega{cs, e};
    BlockedOperator lhs = b * G.lambda(omega);
    BlockedOperator rhs = G.lambda(Functional{cs, m.theta_star.mat * e});
    r = std::max(r, (lhs - rhs).coords().norm());
  }
  rep.add("defining identity through the Fourier transform", r, tol);

  Rng rng(4242);
  r = 0.0;
  for (int s = 0; s < 5; ++s) {
    Functional om = rng.functional(cs);
    Functional op = rng.functional(cs);
    Functional lhs = Functional{cs, m.theta_star.mat * convolve(G, om, op).coeff};
    Functional rhs = convolve(G, Functional{cs, m.theta_star.mat * om.coeff}, op);
    r = std::max(r, (lhs.coeff - rhs.coeff).norm());
  }
  rep.add("centralizer of functional convolution", r, tol);

  r = 0.0;
  for (std::size_t al = 0; al < G.irreps.size(); ++al) {
    int d = G.irreps[al].dim;
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        BlockedOperator lhs = m.theta(G.irreps[al].entry(k, j));
        BlockedOperator rhs = BlockedOperator::zero(cs);
        for (int i = 0; i < d; ++i)
          rhs = rhs + b.blocks[al](k, i) * G.irreps[al].entry(i, j);
        r = std::max(r, (lhs - rhs).coords().norm());
      }
  }
  rep.add("coefficient transport within each irrep", r, tol);

  BlockedOperator b2 = rng.element(G.discrete_shape);
  Multiplier m2 = theta_of(G, b2);
  Multiplier mp = theta_of(G, b * b2);
  rep.add("action map multiplicative on products",
          map_distance(mp.theta_star, m.theta_star * m2.theta_star), tol);

  rep.add("slice formula for convolved multiplier",
          theta_of_convolution_residual(G, b, rng.functional(G.discrete_shape)), tol);

  rep.notes.push_back(m.central ? "central: blockwise scalar" : "not central");
  return rep;
}

CentralDecomposition positive_decomposition(const FiniteQuantumGroup& G,
                                            const BlockedOperator& b) {
  require(b.shape == G.discrete_shape, "multipliers live on the discrete side");
  require(is_central(b), "positive_decomposition needs a central multiplier");
  const AlgebraShape& cs = G.dual_shape;

  std::vector<Mat> wrep = G.haar_hat.representer();
  std::vector<Mat> frep = G.lambda_inv_of(b).representer();
  BlockedOperator dens = BlockedOperator::zero(cs);
  for (int k = 0; k < cs.blocks(); ++k) {
    double w = wrep[k](0, 0).real();
    require(w > 0.0, "Haar state must be faithful");
    dens.blocks[k] = frep[k] / w;
  }

  // Polarize the density, then split the two hermitian halves by functional
  // calculus. All four pieces stay in the character span, so their
  // transforms remain central.
  BlockedOperator herm = 0.5 * (dens + dens.adjoint());
  BlockedOperator anti = cplx(0.0, -0.5) * (dens - dens.adjoint());
  std::array<BlockedOperator, 4> piece = {
      spectral_part(herm, false), spectral_part(anti, false),
      spectral_part(herm, true), spectral_part(anti, true)};

  CentralDecomposition d;
  for (int k = 0; k < 4; ++k) {
    std::vector<Mat> rep(cs.blocks());
    for (int bl = 0; bl < cs.blocks(); ++bl)
      rep[bl] = wrep[bl](0, 0).real() * piece[k].blocks[bl];
    d.omega[k] = Functional::from_representer(cs, rep);
    d.part[k] = G.lambda(d.omega[k]);
    require(is_central(d.part[k], 1e-8), "decomposition parts must stay central");
  }
  BlockedOperator recon = d.part[0] - d.part[2] +
                          cplx(0.0, 1.0) * (d.part[1] - d.part[3]);
  d.residual = (b - recon).coords().norm();
  return d;
}

}  // namespace qgavg
