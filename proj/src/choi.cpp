#include "qgavg/choi.hpp"

#include <algorithm>
#include <cmath>

namespace qgavg {

Mat choi_matrix(const LinearMap& f) {
  const AlgebraShape& A = f.domain;
  const AlgebraShape& B = f.codomain;
  int N = A.embed, M = B.embed;
  Mat C = Mat::Zero(N * M, N * M);
  for (int b = 0; b < A.blocks(); ++b) {
    int d = A.dims[b], off = A.embed_off[b];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Vec u = Vec::Zero(A.total);
        u(A.coord(b, i, j)) = 1.0;
        Mat img = BlockedOperator::from_coords(B, f.mat * u).embed();
        int p = off + i, q = off + j;
        C.block(p * M, q * M, M, M) += img;
      }
  }
  return C;
}

CpReport cp_check(const LinearMap& f, double tol) {
  const AlgebraShape& A = f.domain;
  const AlgebraShape& B = f.codomain;
  // cache images of the domain matrix units
  std::vector<BlockedOperator> img;
  img.reserve(A.total);
  for (int c = 0; c < A.total; ++c) {
    Vec u = Vec::Zero(A.total);
    u(c) = 1.0;
    img.push_back(BlockedOperator::from_coords(B, f.mat * u));
  }
  CpReport r;
  r.min_eig = 0.0;
  bool first = true;
  for (int a = 0; a < A.blocks(); ++a) {
    int d = A.dims[a];
    for (int b = 0; b < B.blocks(); ++b) {
      int e = B.dims[b];
      Mat C(d * e, d * e);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const Mat& m = img[A.coord(a, i, j)].blocks[b];
          C.block(i * e, j * e, e, e) = m;
        }
      double herm = spec_norm(C - C.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat> es((C + C.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
      double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
      double nrm = std::max(std::abs(lo), std::abs(hi));
      r.herm_defect = std::max(r.herm_defect, herm);
      r.choi_norm = std::max(r.choi_norm, nrm);
      if (first || lo < r.min_eig) r.min_eig = lo;
      first = false;
    }
  }
  double scale = 1.0 + r.choi_norm;
  r.cp = (r.min_eig >= -tol * scale) && (r.herm_defect <= tol * scale);
  return r;
}

namespace {

// Representer of x -> <eta, embed(x) xi> on the coordinates of s.
Vec vector_pairing(const AlgebraShape& s, const Vec& eta, const Vec& xi) {
  Vec v(s.total);
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b], off = s.embed_off[b];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        v(s.coord(b, i, j)) = std::conj(eta(off + i)) * xi(off + j);
  }
  return v;
}

// Blockwise unitary maximizing Re sum_k g_k x_k over the unit ball.
Vec polar_maximizer(const AlgebraShape& s, const Vec& g) {
  Vec x(s.total);
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b];
    Mat G(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) G(i, j) = g(s.coord(b, i, j));
    // maximize Tr(G^T u): u = V conj(U)^T... from SVD of G^T
    Eigen::JacobiSVD<Mat> svd(G.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat u = svd.matrixV() * svd.matrixU().adjoint();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) x(s.coord(b, i, j)) = u(i, j);
  }
  return x;
}

}  // namespace

CbResult cb_norm(const LinearMap& f, const CbOpts& opts) {
  if (opts.cp_shortcut) {
    CpReport r = cp_check(f);
    if (r.cp) {
      CbResult out;
      out.value = f(BlockedOperator::identity(f.domain)).norm();
      out.exact = true;
      out.converged = true;
      return out;
    }
  }

  int K = f.codomain.embed;
  AlgebraShape mk = AlgebraShape::of({K});
  LinearMap amp = tensor_map(f, LinearMap::identity(mk));
  const AlgebraShape& dK = amp.domain;
  const AlgebraShape& cK = amp.codomain;
  int H = cK.embed;

  CbResult out;
  out.restarts_used = opts.restarts;
  out.converged = false;
  Rng rng(opts.seed);
  double best = 0.0;
  bool best_converged = false;
  for (int rs = 0; rs < opts.restarts; ++rs) {
    Vec eta = rng.cvector(H), xi = rng.cvector(H);
    eta.normalize();
    xi.normalize();
    double prev = -1.0;
    bool conv = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      Vec g = amp.mat.transpose() * vector_pairing(cK, eta, xi);
      Vec u = polar_maximizer(dK, g);
      Mat T = BlockedOperator::from_coords(cK, amp.mat * u).embed();
      Eigen::JacobiSVD<Mat> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
      double sigma = svd.singularValues()(0);
      eta = svd.matrixU().col(0);
      xi = svd.matrixV().col(0);
      if (std::abs(sigma - prev) <= opts.tol * (1.0 + sigma)) {
        prev = sigma;
        conv = true;
        break;
      }
      prev = sigma;
    }
    if (prev > best) {
      best = prev;
      best_converged = conv;
    }
  }
  out.value = best;
  out.converged = best_converged;
  if (!best_converged) out.note = "ascent did not converge within the iteration budget";
  return out;
}

}  // namespace qgavg
