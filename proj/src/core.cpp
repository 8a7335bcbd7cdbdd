#include "qgavg/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qgavg {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

double stable_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

cplx stable_sum(std::vector<cplx> terms) {
  std::sort(terms.begin(), terms.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  cplx s = 0.0;
  for (const cplx& t : terms) s += t;
  return s;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

double spec_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double min_eig_hermitian(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Mat h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec r(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    r.segment(i * b.size(), b.size()) = a(i) * b;
  return r;
}

AlgebraShape AlgebraShape::of(std::vector<int> dims) {
  require(!dims.empty(), "shape needs at least one block");
  AlgebraShape s;
  s.dims = std::move(dims);
  s.coord_off.resize(s.dims.size() + 1);
  s.embed_off.resize(s.dims.size() + 1);
  s.coord_off[0] = 0;
  s.embed_off[0] = 0;
  for (std::size_t b = 0; b < s.dims.size(); ++b) {
    require(s.dims[b] >= 1, "block dimension must be positive");
    s.coord_off[b + 1] = s.coord_off[b] + s.dims[b] * s.dims[b];
    s.embed_off[b + 1] = s.embed_off[b] + s.dims[b];
  }
  s.total = s.coord_off.back();
  s.embed = s.embed_off.back();
  return s;
}

AlgebraShape tensor_shape(const AlgebraShape& a, const AlgebraShape& b) {
  std::vector<int> dims;
  dims.reserve(a.dims.size() * b.dims.size());
  for (int da : a.dims)
    for (int db : b.dims) dims.push_back(da * db);
  return AlgebraShape::of(std::move(dims));
}

AlgebraShape tensor_shape(const std::vector<AlgebraShape>& legs) {
  require(!legs.empty(), "tensor of zero legs");
  AlgebraShape s = legs[0];
  for (std::size_t k = 1; k < legs.size(); ++k) s = tensor_shape(s, legs[k]);
  return s;
}

BlockedOperator BlockedOperator::zero(const AlgebraShape& s) {
  BlockedOperator x;
  x.shape = s;
  x.blocks.reserve(s.dims.size());
  for (int d : s.dims) x.blocks.push_back(Mat::Zero(d, d));
  return x;
}

BlockedOperator BlockedOperator::identity(const AlgebraShape& s) {
  BlockedOperator x;
  x.shape = s;
  x.blocks.reserve(s.dims.size());
  for (int d : s.dims) x.blocks.push_back(Mat::Identity(d, d));
  return x;
}

BlockedOperator BlockedOperator::from_coords(const AlgebraShape& s, const Vec& c) {
  require(c.size() == s.total, "coordinate vector has wrong length");
  BlockedOperator x = zero(s);
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) x.blocks[b](i, j) = c(s.coord(b, i, j));
  }
  return x;
}

Vec BlockedOperator::coords() const {
  Vec c(shape.total);
  for (int b = 0; b < shape.blocks(); ++b) {
    int d = shape.dims[b];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) c(shape.coord(b, i, j)) = blocks[b](i, j);
  }
  return c;
}

Mat BlockedOperator::embed() const {
  Mat m = Mat::Zero(shape.embed, shape.embed);
  for (int b = 0; b < shape.blocks(); ++b) {
    int o = shape.embed_off[b], d = shape.dims[b];
    m.block(o, o, d, d) = blocks[b];
  }
  return m;
}

BlockedOperator BlockedOperator::adjoint() const {
  BlockedOperator x;
  x.shape = shape;
  x.blocks.reserve(blocks.size());
  for (const Mat& m : blocks) x.blocks.push_back(m.adjoint());
  return x;
}

BlockedOperator BlockedOperator::operator*(const BlockedOperator& o) const {
  require(shape == o.shape, "shape mismatch in product");
  BlockedOperator x;
  x.shape = shape;
  x.blocks.reserve(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) x.blocks.push_back(blocks[b] * o.blocks[b]);
  return x;
}

BlockedOperator BlockedOperator::operator+(const BlockedOperator& o) const {
  require(shape == o.shape, "shape mismatch in sum");
  BlockedOperator x;
  x.shape = shape;
  x.blocks.reserve(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) x.blocks.push_back(blocks[b] + o.blocks[b]);
  return x;
}

BlockedOperator BlockedOperator::operator-(const BlockedOperator& o) const {
  require(shape == o.shape, "shape mismatch in difference");
  BlockedOperator x;
  x.shape = shape;
  x.blocks.reserve(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) x.blocks.push_back(blocks[b] - o.blocks[b]);
  return x;
}

double BlockedOperator::norm() const {
  double n = 0.0;
  for (const Mat& m : blocks) n = std::max(n, spec_norm(m));
  return n;
}

cplx BlockedOperator::trace() const {
  std::vector<cplx> t;
  t.reserve(blocks.size());
  for (const Mat& m : blocks) t.push_back(m.trace());
  return stable_sum(std::move(t));
}

bool BlockedOperator::is_hermitian(double tol) const {
  return (*this - adjoint()).norm() <= tol;
}

BlockedOperator operator*(cplx s, const BlockedOperator& x) {
  BlockedOperator y;
  y.shape = x.shape;
  y.blocks.reserve(x.blocks.size());
  for (const Mat& m : x.blocks) y.blocks.push_back(s * m);
  return y;
}

BlockedOperator tensor_elem(const BlockedOperator& x, const BlockedOperator& y) {
  BlockedOperator t;
  t.shape = tensor_shape(x.shape, y.shape);
  t.blocks.reserve(x.blocks.size() * y.blocks.size());
  for (const Mat& a : x.blocks)
    for (const Mat& b : y.blocks) t.blocks.push_back(kron(a, b));
  return t;
}

cplx Functional::operator()(const BlockedOperator& x) const {
  require(shape == x.shape, "functional applied across shapes");
  return coeff.transpose() * x.coords();
}

Functional Functional::from_representer(const AlgebraShape& s, const std::vector<Mat>& rep) {
  require(static_cast<int>(rep.size()) == s.blocks(), "representer block count mismatch");
  Functional f;
  f.shape = s;
  f.coeff = Vec::Zero(s.total);
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b];
    require(rep[b].rows() == d && rep[b].cols() == d, "representer block size mismatch");
    // omega(e^b_{ij}) = Tr(rep e^b_{ij}) = rep(j,i)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) f.coeff(s.coord(b, i, j)) = rep[b](j, i);
  }
  return f;
}

std::vector<Mat> Functional::representer() const {
  std::vector<Mat> rep;
  rep.reserve(shape.dims.size());
  for (int b = 0; b < shape.blocks(); ++b) {
    int d = shape.dims[b];
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(j, i) = coeff(shape.coord(b, i, j));
    rep.push_back(std::move(m));
  }
  return rep;
}

double Functional::positivity_defect() const {
  double defect = 0.0;
  for (int b = 0; b < shape.blocks(); ++b) {
    int d = shape.dims[b];
    Mat m(d, d);
    for (int l = 0; l < d; ++l)
      for (int k = 0; k < d; ++k) m(l, k) = coeff(shape.coord(b, l, k));
    defect = std::max(defect, spec_norm(m - m.adjoint()));
    defect = std::max(defect, -min_eig_hermitian(m));
  }
  return defect;
}

Functional tensor_functional(const Functional& a, const Functional& b) {
  AlgebraShape t = tensor_shape(a.shape, b.shape);
  Functional f;
  f.shape = t;
  f.coeff = Vec::Zero(t.total);
  // coordinate of the product at blocks (p,q), entries ((i,k),(j,l))
  int bt = 0;
  for (int p = 0; p < a.shape.blocks(); ++p) {
    int da = a.shape.dims[p];
    for (int q = 0; q < b.shape.blocks(); ++q, ++bt) {
      int db = b.shape.dims[q];
      for (int i = 0; i < da; ++i)
        for (int k = 0; k < db; ++k)
          for (int j = 0; j < da; ++j)
            for (int l = 0; l < db; ++l)
              f.coeff(t.coord(bt, i * db + k, j * db + l)) =
                  a.coeff(a.shape.coord(p, i, j)) * b.coeff(b.shape.coord(q, k, l));
    }
  }
  return f;
}

double Rng::u01() {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

double Rng::gauss() {
  double u = u01(), v = u01();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

cplx Rng::cgauss() {
  double re = gauss(), im = gauss();
  return cplx(re, im) / std::sqrt(2.0);
}

Vec Rng::cvector(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = cgauss();
  return v;
}

Mat Rng::gaussian(int r, int c) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cgauss();
  return m;
}

Mat Rng::hermitian(int n) {
  Mat m = gaussian(n, n);
  return (m + m.adjoint()) / 2.0;
}

Mat Rng::psd(int n) {
  Mat m = gaussian(n, n);
  return m.adjoint() * m / static_cast<double>(n);
}

Mat Rng::unitary(int n) {
  Mat m = gaussian(n, n);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    cplx s = r(i, i);
    double a = std::abs(s);
    q.col(i) *= (a < 1e-300) ? 1.0 : s / a;
  }
  return q;
}

BlockedOperator Rng::element(const AlgebraShape& s) {
  BlockedOperator x;
  x.shape = s;
  x.blocks.reserve(s.dims.size());
  for (int d : s.dims) x.blocks.push_back(gaussian(d, d));
  return x;
}

BlockedOperator Rng::hermitian_element(const AlgebraShape& s) {
  BlockedOperator x;
  x.shape = s;
  x.blocks.reserve(s.dims.size());
  for (int d : s.dims) x.blocks.push_back(hermitian(d));
  return x;
}

BlockedOperator Rng::psd_element(const AlgebraShape& s) {
  BlockedOperator x;
  x.shape = s;
  x.blocks.reserve(s.dims.size());
  for (int d : s.dims) x.blocks.push_back(psd(d));
  return x;
}

Functional Rng::functional(const AlgebraShape& s) {
  Functional f;
  f.shape = s;
  f.coeff = cvector(s.total);
  return f;
}

}  // namespace qgavg
