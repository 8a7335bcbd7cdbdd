#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qgavg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

void require(bool cond, const std::string& msg);

// Sum of a finite multiset of terms, invariant under generation order:
// summands are sorted before accumulation, so equal multisets of terms
// produce bitwise-equal results.
double stable_sum(std::vector<double> terms);
cplx stable_sum(std::vector<cplx> terms);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::string hex64(std::uint64_t v);

double spec_norm(const Mat& m);
// Smallest eigenvalue of the hermitian part (m + m*)/2.
double min_eig_hermitian(const Mat& m);

Mat kron(const Mat& a, const Mat& b);
Vec kron_vec(const Vec& a, const Vec& b);

// Direct sum of full matrix blocks M_{dims[0]}, ..., M_{dims[B-1]}.
// Coordinates enumerate block entries row-major, block by block:
// coord(b,i,j) indexes the (i,j) entry of block b.
struct AlgebraShape {
  std::vector<int> dims;
  std::vector<int> coord_off;  // size B+1, coord_off[B] == total
  std::vector<int> embed_off;  // size B+1, embed_off[B] == embed
  int total = 0;               // sum of dims[b]^2
  int embed = 0;               // sum of dims[b]

  static AlgebraShape of(std::vector<int> dims);
  int blocks() const { return static_cast<int>(dims.size()); }
  int coord(int b, int i, int j) const { return coord_off[b] + i * dims[b] + j; }
  bool operator==(const AlgebraShape& o) const { return dims == o.dims; }
  bool operator!=(const AlgebraShape& o) const { return dims != o.dims; }
};

AlgebraShape tensor_shape(const AlgebraShape& a, const AlgebraShape& b);
AlgebraShape tensor_shape(const std::vector<AlgebraShape>& legs);

struct BlockedOperator {
  AlgebraShape shape;
  std::vector<Mat> blocks;

  static BlockedOperator zero(const AlgebraShape& s);
  static BlockedOperator identity(const AlgebraShape& s);
  static BlockedOperator from_coords(const AlgebraShape& s, const Vec& c);
  Vec coords() const;
  Mat embed() const;  // dense block-diagonal matrix of size shape.embed

  BlockedOperator adjoint() const;
  BlockedOperator operator*(const BlockedOperator& o) const;
  BlockedOperator operator+(const BlockedOperator& o) const;
  BlockedOperator operator-(const BlockedOperator& o) const;

  double norm() const;  // largest block spectral norm
  cplx trace() const;   // unweighted sum of block traces
  bool is_hermitian(double tol) const;
};

BlockedOperator operator*(cplx s, const BlockedOperator& x);
BlockedOperator tensor_elem(const BlockedOperator& x, const BlockedOperator& y);

// Linear functional in coordinates: value(x) = sum_k coeff[k] * x.coords()[k].
struct Functional {
  AlgebraShape shape;
  Vec coeff;

  cplx operator()(const BlockedOperator& x) const;

  // omega(x) = sum_b Tr(rep[b] * x_b)
  static Functional from_representer(const AlgebraShape& s, const std::vector<Mat>& rep);
  std::vector<Mat> representer() const;

  // Largest violation over blocks of PSD-ness of [omega(e^b_{lm})]_{lm};
  // a positive functional stays <= 0 up to rounding.
  double positivity_defect() const;
};

Functional tensor_functional(const Functional& a, const Functional& b);

// Deterministic random source. All draws reduce to raw engine words through
// fixed arithmetic, so a seed pins every result.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double u01();  // in (0, 1]
  double gauss();
  cplx cgauss();
  Vec cvector(int n);
  Mat gaussian(int r, int c);
  Mat hermitian(int n);
  Mat psd(int n);
  Mat unitary(int n);
  BlockedOperator element(const AlgebraShape& s);
  BlockedOperator hermitian_element(const AlgebraShape& s);
  BlockedOperator psd_element(const AlgebraShape& s);
  Functional functional(const AlgebraShape& s);
};

}  // namespace qgavg
