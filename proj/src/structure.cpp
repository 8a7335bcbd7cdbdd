#include "qgavg/structure.hpp"

#include <algorithm>
#include <cmath>

namespace qgavg {

namespace {

Vec vec_of(const Mat& m) {
  int n = static_cast<int>(m.rows());
  Vec v(n * m.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

Mat mat_of(const Vec& v, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v(i * n + j);
  return m;
}

// Append the columns of V that stick out of the span of Q (modified
// Gram-Schmidt, re-orthogonalized). Returns how many were added.
int absorb(Mat& Q, const Mat& V, double tol) {
  int added = 0;
  for (int c = 0; c < V.cols(); ++c) {
    Vec v = V.col(c);
    double base = v.norm();
    if (base < tol) continue;
    for (int pass = 0; pass < 2; ++pass)
      if (Q.cols() > 0) v -= Q * (Q.adjoint() * v);
    if (v.norm() > tol * (1.0 + base)) {
      v.normalize();
      Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
      Q.col(Q.cols() - 1) = v;
      ++added;
    }
  }
  return added;
}

// Eigenvalue clustering by gaps: returns cluster index per sorted position.
std::vector<std::vector<int>> cluster_indices(const Eigen::VectorXd& ev, double gap) {
  std::vector<int> order(ev.size());
  for (int i = 0; i < ev.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ev(a) < ev(b); });
  std::vector<std::vector<int>> groups;
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (t == 0 || ev(order[t]) - ev(order[t - 1]) > gap) groups.emplace_back();
    groups.back().push_back(order[t]);
  }
  return groups;
}

}  // namespace

Mat AlgebraStructure::to_matrix(const Vec& coords) const {
  require(coords.size() == shape.total, "coordinate length mismatch");
  Mat T = Mat::Zero(hdim, hdim);
  for (int k = 0; k < shape.blocks(); ++k) {
    int d = shape.dims[k];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) T += coords(shape.coord(k, i, j)) * units[k][i * d + j];
  }
  return T;
}

Mat AlgebraStructure::represent(const BlockedOperator& x) const {
  require(x.shape == shape, "element shape mismatch");
  return to_matrix(x.coords());
}

Vec AlgebraStructure::from_matrix(const Mat& T, double* residual) const {
  require(T.rows() == hdim && T.cols() == hdim, "matrix size mismatch");
  Vec c(shape.total);
  for (int k = 0; k < shape.blocks(); ++k) {
    int d = shape.dims[k];
    double m = static_cast<double>(mult[k]);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        c(shape.coord(k, i, j)) = (units[k][i * d + j].adjoint() * T).trace() / m;
  }
  if (residual) *residual = (T - to_matrix(c)).norm();
  return c;
}

BlockedOperator AlgebraStructure::compress(const Mat& T, double tol) const {
  double res = 0.0;
  Vec c = from_matrix(T, &res);
  require(res <= tol * (1.0 + T.norm()), "matrix lies off the coordinatized algebra");
  return BlockedOperator::from_coords(shape, c);
}

AlgebraStructure extract_structure(const std::vector<Mat>& spanning, std::uint64_t seed,
                                   double tol) {
  require(!spanning.empty(), "empty spanning set");
  const int n = static_cast<int>(spanning[0].rows());
  for (const Mat& m : spanning)
    require(m.rows() == n && m.cols() == n, "spanning matrices must share a square size");

  // orthonormal basis of the generated *-algebra, as vectorized columns
  Mat Q(n * n, 0);
  {
    Mat first(n * n, static_cast<int>(spanning.size()) * 2 + 1);
    int c = 0;
    first.col(c++) = vec_of(Mat::Identity(n, n));
    for (const Mat& m : spanning) {
      first.col(c++) = vec_of(m);
      first.col(c++) = vec_of(m.adjoint());
    }
    absorb(Q, first, 1e-12);
  }
  for (int round = 0; round < 16; ++round) {
    int r = static_cast<int>(Q.cols());
    int added = 0;
    for (int i = 0; i < r; ++i) {
      Mat bi = mat_of(Q.col(i), n);
      Mat chunk(n * n, r);
      for (int j = 0; j < r; ++j) chunk.col(j) = vec_of(bi * mat_of(Q.col(j), n));
      added += absorb(Q, chunk, 1e-10);
    }
    if (added == 0) break;
    require(round < 15, "algebra closure did not stabilize");
  }
  const int dimM = static_cast<int>(Q.cols());

  std::vector<Mat> basis;
  basis.reserve(dimM);
  for (int i = 0; i < dimM; ++i) basis.push_back(mat_of(Q.col(i), n));

  // center: x in span with [x, B_j] = 0 for every basis element
  Mat N = Mat::Zero(dimM, dimM);
  for (int j = 0; j < dimM; ++j) {
    Mat Cj(n * n, dimM);
    for (int i = 0; i < dimM; ++i) Cj.col(i) = vec_of(basis[i] * basis[j] - basis[j] * basis[i]);
    N += Cj.adjoint() * Cj;
  }
  // Commutator mass separates cleanly: zero directions sit at solver noise,
  // honest commutators at order one, so a wide relative cut is safe.
  Eigen::SelfAdjointEigenSolver<Mat> ces(N);
  double nscale = std::max(1.0, ces.eigenvalues().maxCoeff());
  std::vector<int> zidx;
  for (int i = 0; i < dimM; ++i)
    if (ces.eigenvalues()(i) <= 1e-10 * nscale) zidx.push_back(i);
  require(!zidx.empty(), "no central elements found");
  std::vector<Mat> center;
  for (int i : zidx) {
    Mat z = Mat::Zero(n, n);
    for (int k = 0; k < dimM; ++k) z += ces.eigenvectors()(k, i) * basis[k];
    center.push_back(z);
  }
  const int nblocks = static_cast<int>(center.size());

  Rng rng(seed);
  auto random_member = [&](const std::vector<Mat>& span_set) {
    Mat h = Mat::Zero(n, n);
    for (const Mat& b : span_set) h += rng.cgauss() * b;
    return Mat((h + h.adjoint()) / 2.0);
  };
  auto in_span = [&](const Mat& T) {
    Vec v = vec_of(T);
    Vec r = v - Q * (Q.adjoint() * v);
    return r.norm() <= tol * (1.0 + v.norm());
  };

  for (int attempt = 0; attempt < 5; ++attempt) {
    // minimal central projections from a generic central hermitian element
    Mat z = random_member(center);
    Eigen::SelfAdjointEigenSolver<Mat> zes(z);
    double range = zes.eigenvalues().maxCoeff() - zes.eigenvalues().minCoeff();
    auto groups = cluster_indices(zes.eigenvalues(), 1e-6 * (1.0 + range));
    if (static_cast<int>(groups.size()) != nblocks) continue;

    bool ok = true;
    std::vector<Mat> proj;
    std::vector<int> dims, mults;
    std::vector<std::vector<Mat>> units;
    for (const auto& g : groups) {
      Mat p = Mat::Zero(n, n);
      for (int i : g) p += zes.eigenvectors().col(i) * zes.eigenvectors().col(i).adjoint();
      if (!in_span(p)) {
        ok = false;
        break;
      }
      proj.push_back(p);
    }
    if (!ok) continue;

    for (int k = 0; k < nblocks && ok; ++k) {
      const Mat& p = proj[k];
      int rank = static_cast<int>(std::llround(p.trace().real()));
      if (std::abs(p.trace().real() - rank) > tol) {
        ok = false;
        break;
      }
      // dimension of p M p
      Mat pm(n * n, dimM);
      for (int i = 0; i < dimM; ++i) pm.col(i) = vec_of(p * basis[i] * p);
      Mat QB(n * n, 0);
      absorb(QB, pm, 1e-9);
      int dsq = static_cast<int>(QB.cols());
      int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(dsq))));
      if (d * d != dsq || rank % d != 0) {
        ok = false;
        break;
      }
      int m = rank / d;

      // orthonormal basis of the range of p
      Eigen::SelfAdjointEigenSolver<Mat> pes(p);
      Mat V(n, rank);
      int c = 0;
      for (int i = 0; i < n; ++i)
        if (pes.eigenvalues()(i) > 0.5) V.col(c++) = pes.eigenvectors().col(i);
      if (c != rank) {
        ok = false;
        break;
      }

      // spectral family of a generic hermitian member, d clusters of size m
      std::vector<Mat> cut(basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) cut[i] = p * basis[i] * p;
      Mat a = V.adjoint() * random_member(cut) * V;
      Eigen::SelfAdjointEigenSolver<Mat> aes(a);
      double arange = aes.eigenvalues().maxCoeff() - aes.eigenvalues().minCoeff();
      auto agroups = cluster_indices(aes.eigenvalues(), 1e-6 * (1.0 + arange));
      if (static_cast<int>(agroups.size()) != d) {
        ok = false;
        break;
      }
      std::vector<Mat> q;
      for (const auto& g : agroups) {
        if (static_cast<int>(g.size()) != m) {
          ok = false;
          break;
        }
        Mat qk = Mat::Zero(n, n);
        for (int i : g)
          qk += (V * aes.eigenvectors().col(i)) * (V * aes.eigenvectors().col(i)).adjoint();
        if (!in_span(qk)) {
          ok = false;
          break;
        }
        q.push_back(qk);
      }
      if (!ok) break;

      // partial isometries e_{i1} from polar parts of q_i r q_1
      Mat r = Mat::Zero(n, n);
      for (const Mat& b : basis) r += rng.cgauss() * b;
      std::vector<Mat> e1(d);
      e1[0] = q[0];
      for (int i = 1; i < d; ++i) {
        Eigen::JacobiSVD<Mat> svd(q[i] * r * q[0], Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.singularValues()(m - 1) <= 1e-8 * (1.0 + svd.singularValues()(0))) {
          ok = false;
          break;
        }
        e1[i] = svd.matrixU().leftCols(m) * svd.matrixV().leftCols(m).adjoint();
      }
      if (!ok) break;

      std::vector<Mat> ek(d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) ek[i * d + j] = e1[i] * e1[j].adjoint();

      // matrix unit relations
      double worst = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          worst = std::max(worst, (ek[i * d + j].adjoint() - ek[j * d + i]).norm());
          for (int s = 0; s < d; ++s)
            for (int t = 0; t < d; ++t) {
              Mat prod = ek[i * d + j] * ek[s * d + t];
              Mat expect = (j == s) ? ek[i * d + t] : Mat::Zero(n, n);
              worst = std::max(worst, (prod - expect).norm());
            }
          if (!in_span(ek[i * d + j])) ok = false;
        }
      }
      Mat diag = Mat::Zero(n, n);
      for (int i = 0; i < d; ++i) diag += ek[i * d + i];
      worst = std::max(worst, (diag - p).norm());
      if (worst > tol * 10 || !ok) {
        ok = false;
        break;
      }

      dims.push_back(d);
      mults.push_back(m);
      units.push_back(std::move(ek));
    }
    if (!ok) continue;

    int total = 0;
    for (int d : dims) total += d * d;
    if (total != dimM) continue;

    AlgebraStructure st;
    st.hdim = n;
    st.shape = AlgebraShape::of(dims);
    st.mult = mults;
    st.central_projections = proj;
    st.units = std::move(units);

    Mat sum = Mat::Zero(n, n);
    for (const Mat& p : st.central_projections) sum += p;
    require((sum - Mat::Identity(n, n)).norm() <= tol * 10,
            "central projections do not resolve the identity");
    return st;
  }
  require(false, "structure extraction failed after retries");
  return {};
}

}  // namespace qgavg
