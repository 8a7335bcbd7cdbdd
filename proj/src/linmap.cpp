#include "qgavg/linmap.hpp"

#include <algorithm>

namespace qgavg {

LinearMap LinearMap::identity(const AlgebraShape& s) {
  return {s, s, Mat::Identity(s.total, s.total)};
}

LinearMap LinearMap::zero(const AlgebraShape& dom, const AlgebraShape& cod) {
  return {dom, cod, Mat::Zero(cod.total, dom.total)};
}

BlockedOperator LinearMap::operator()(const BlockedOperator& x) const {
  require(x.shape == domain, "map applied outside its domain");
  return BlockedOperator::from_coords(codomain, mat * x.coords());
}

LinearMap LinearMap::operator*(const LinearMap& g) const {
  require(g.codomain == domain, "composition domain mismatch");
  return {g.domain, codomain, mat * g.mat};
}

LinearMap LinearMap::operator+(const LinearMap& g) const {
  require(domain == g.domain && codomain == g.codomain, "sum of unlike maps");
  return {domain, codomain, mat + g.mat};
}

LinearMap LinearMap::operator-(const LinearMap& g) const {
  require(domain == g.domain && codomain == g.codomain, "difference of unlike maps");
  return {domain, codomain, mat - g.mat};
}

double map_distance(const LinearMap& f, const LinearMap& g) {
  require(f.domain == g.domain && f.codomain == g.codomain, "distance of unlike maps");
  return (f.mat - g.mat).norm();
}

std::vector<std::pair<int, int>> split_pair(const AlgebraShape& a, const AlgebraShape& b) {
  AlgebraShape t = tensor_shape(a, b);
  std::vector<std::pair<int, int>> sp(t.total);
  int bt = 0;
  for (int p = 0; p < a.blocks(); ++p) {
    int da = a.dims[p];
    for (int q = 0; q < b.blocks(); ++q, ++bt) {
      int db = b.dims[q];
      for (int i = 0; i < da; ++i)
        for (int k = 0; k < db; ++k)
          for (int j = 0; j < da; ++j)
            for (int l = 0; l < db; ++l)
              sp[t.coord(bt, i * db + k, j * db + l)] = {a.coord(p, i, j), b.coord(q, k, l)};
    }
  }
  return sp;
}

LinearMap mult_map(const AlgebraShape& s) {
  AlgebraShape dom = tensor_shape(s, s);
  auto sp = split_pair(s, s);
  LinearMap f = LinearMap::zero(dom, s);
  // e_{ij} e_{kl} = [j == k] e_{il}, blockwise.
  for (int c = 0; c < dom.total; ++c) {
    LegCoord x = leg_decompose(s, sp[c].first);
    LegCoord y = leg_decompose(s, sp[c].second);
    if (x.b == y.b && x.j == y.i) f.mat(s.coord(x.b, x.i, y.j), c) += 1.0;
  }
  return f;
}

LinearMap flip_map(const AlgebraShape& s) { return leg_permutation({s, s}, {1, 0}); }

Mat transpose_perm(const AlgebraShape& s) {
  Mat p = Mat::Zero(s.total, s.total);
  for (int b = 0; b < s.blocks(); ++b)
    for (int i = 0; i < s.dims[b]; ++i)
      for (int j = 0; j < s.dims[b]; ++j) p(s.coord(b, j, i), s.coord(b, i, j)) = 1.0;
  return p;
}

LinearMap tensor_map(const LinearMap& f, const LinearMap& g) {
  AlgebraShape dom = tensor_shape(f.domain, g.domain);
  AlgebraShape cod = tensor_shape(f.codomain, g.codomain);
  auto spIn = split_pair(f.domain, g.domain);
  auto spOut = split_pair(f.codomain, g.codomain);
  Mat m(cod.total, dom.total);
  for (int r = 0; r < cod.total; ++r)
    for (int c = 0; c < dom.total; ++c)
      m(r, c) = f.mat(spOut[r].first, spIn[c].first) * g.mat(spOut[r].second, spIn[c].second);
  return {dom, cod, m};
}

LinearMap left_mult(const BlockedOperator& a) {
  const AlgebraShape& s = a.shape;
  LinearMap f = LinearMap::zero(s, s);
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b];
    // (a x)_ij = sum_k a_ik x_kj
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) f.mat(s.coord(b, i, j), s.coord(b, k, j)) += a.blocks[b](i, k);
  }
  return f;
}

LinearMap right_mult(const BlockedOperator& a) {
  const AlgebraShape& s = a.shape;
  LinearMap f = LinearMap::zero(s, s);
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b];
    // (x a)_ij = sum_k x_ik a_kj
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) f.mat(s.coord(b, i, j), s.coord(b, i, k)) += a.blocks[b](k, j);
  }
  return f;
}

Functional pullback(const LinearMap& f, const Functional& omega) {
  require(omega.shape == f.codomain, "pullback functional lives on the codomain");
  Functional r;
  r.shape = f.domain;
  r.coeff = f.mat.transpose() * omega.coeff;
  return r;
}

LinearMap adjoint_map(const LinearMap& f) {
  return {f.codomain, f.domain, f.mat.transpose()};
}

LinearMap predual_transport(const LinearMap& f) {
  return {f.codomain, f.domain, f.mat.transpose()};
}

LegCoord leg_decompose(const AlgebraShape& s, int c) {
  int b = static_cast<int>(std::upper_bound(s.coord_off.begin(), s.coord_off.end(), c) -
                           s.coord_off.begin()) -
          1;
  int rem = c - s.coord_off[b];
  return {b, rem / s.dims[b], rem % s.dims[b]};
}

int product_combine(const std::vector<AlgebraShape>& legs, const std::vector<LegCoord>& w) {
  int n = static_cast<int>(legs.size());
  // lexicographic block tuple index, then row-major mixed-radix entries
  long long bidx = 0;
  long long D = 1, R = 0, C = 0;
  for (int l = 0; l < n; ++l) {
    bidx = bidx * legs[l].blocks() + w[l].b;
    int d = legs[l].dims[w[l].b];
    D *= d;
    R = R * d + w[l].i;
    C = C * d + w[l].j;
  }
  // offset of the block tuple: recompute with a running product of later totals
  // via the product shape offsets
  static thread_local std::vector<AlgebraShape> cached_legs;
  static thread_local AlgebraShape cached_shape;
  if (cached_legs != legs) {
    cached_legs = legs;
    cached_shape = tensor_shape(legs);
  }
  return cached_shape.coord_off[bidx] + static_cast<int>(R * D + C);
}

void for_each_product_coord(const std::vector<AlgebraShape>& legs,
                            const std::function<void(int, const std::vector<LegCoord>&)>& f) {
  int n = static_cast<int>(legs.size());
  std::vector<int> bt(n, 0);
  std::vector<LegCoord> w(n);
  int c = 0;
  while (true) {
    std::vector<int> d(n);
    long long D = 1;
    for (int l = 0; l < n; ++l) {
      d[l] = legs[l].dims[bt[l]];
      D *= d[l];
    }
    std::vector<int> row(n, 0), col(n, 0);
    for (long long r = 0; r < D; ++r) {
      for (long long cc = 0; cc < D; ++cc) {
        for (int l = 0; l < n; ++l) w[l] = {bt[l], row[l], col[l]};
        f(c++, w);
        for (int l = n - 1; l >= 0; --l) {
          if (++col[l] < d[l]) break;
          col[l] = 0;
        }
      }
      for (int l = n - 1; l >= 0; --l) {
        if (++row[l] < d[l]) break;
        row[l] = 0;
      }
    }
    int l = n - 1;
    for (; l >= 0; --l) {
      if (++bt[l] < legs[l].blocks()) break;
      bt[l] = 0;
    }
    if (l < 0) break;
  }
}

LinearMap leg_permutation(const std::vector<AlgebraShape>& legs, const std::vector<int>& sigma) {
  require(sigma.size() == legs.size(), "permutation length mismatch");
  int n = static_cast<int>(legs.size());
  std::vector<AlgebraShape> out_legs(n);
  for (int k = 0; k < n; ++k) out_legs[k] = legs[sigma[k]];
  AlgebraShape dom = tensor_shape(legs), cod = tensor_shape(out_legs);
  Mat m = Mat::Zero(cod.total, dom.total);
  std::vector<LegCoord> w(n);
  for_each_product_coord(legs, [&](int c, const std::vector<LegCoord>& v) {
    for (int k = 0; k < n; ++k) w[k] = v[sigma[k]];
    m(product_combine(out_legs, w), c) = 1.0;
  });
  return {dom, cod, m};
}

LinearMap slice_leg(const std::vector<AlgebraShape>& legs, int leg, const Functional& omega) {
  require(omega.shape == legs[leg], "functional shape mismatch on slice");
  int n = static_cast<int>(legs.size());
  std::vector<AlgebraShape> out_legs;
  for (int l = 0; l < n; ++l)
    if (l != leg) out_legs.push_back(legs[l]);
  AlgebraShape dom = tensor_shape(legs);
  AlgebraShape cod = out_legs.empty() ? AlgebraShape::of({1}) : tensor_shape(out_legs);
  Mat m = Mat::Zero(cod.total, dom.total);
  std::vector<LegCoord> w;
  for_each_product_coord(legs, [&](int c, const std::vector<LegCoord>& v) {
    w.clear();
    for (int l = 0; l < n; ++l)
      if (l != leg) w.push_back(v[l]);
    int cOut = out_legs.empty() ? 0 : product_combine(out_legs, w);
    m(cOut, c) += omega.coeff(legs[leg].coord(v[leg].b, v[leg].i, v[leg].j));
  });
  return {dom, cod, m};
}

LinearMap map_at_leg(const std::vector<AlgebraShape>& legs, int leg, const LinearMap& f) {
  require(f.domain == legs[leg], "leg shape mismatch");
  int n = static_cast<int>(legs.size());
  std::vector<AlgebraShape> out_legs = legs;
  out_legs[leg] = f.codomain;
  AlgebraShape dom = tensor_shape(legs), cod = tensor_shape(out_legs);
  Mat m = Mat::Zero(cod.total, dom.total);
  std::vector<LegCoord> w(n);
  for_each_product_coord(legs, [&](int c, const std::vector<LegCoord>& v) {
    int mIn = legs[leg].coord(v[leg].b, v[leg].i, v[leg].j);
    w = v;
    for (int mOut = 0; mOut < f.codomain.total; ++mOut) {
      cplx e = f.mat(mOut, mIn);
      if (e == cplx(0.0)) continue;
      w[leg] = leg_decompose(f.codomain, mOut);
      m(product_combine(out_legs, w), c) += e;
    }
  });
  return {dom, cod, m};
}

Vec apply_at_leg_vec(const std::vector<AlgebraShape>& legs, int leg, const LinearMap& f,
                     const Vec& c) {
  require(f.domain == legs[leg], "leg shape mismatch");
  require(c.size() == tensor_shape(legs).total, "coordinate length mismatch");
  int n = static_cast<int>(legs.size());
  std::vector<AlgebraShape> out_legs = legs;
  out_legs[leg] = f.codomain;
  Vec out = Vec::Zero(tensor_shape(out_legs).total);
  std::vector<LegCoord> w(n);
  for_each_product_coord(legs, [&](int cin, const std::vector<LegCoord>& v) {
    cplx val = c(cin);
    if (val == cplx(0.0)) return;
    int mIn = legs[leg].coord(v[leg].b, v[leg].i, v[leg].j);
    w = v;
    for (int mOut = 0; mOut < f.codomain.total; ++mOut) {
      cplx e = f.mat(mOut, mIn);
      if (e == cplx(0.0)) continue;
      w[leg] = leg_decompose(f.codomain, mOut);
      out(product_combine(out_legs, w)) += e * val;
    }
  });
  return out;
}

Vec slice_leg_vec(const std::vector<AlgebraShape>& legs, int leg, const Functional& omega,
                  const Vec& c) {
  require(omega.shape == legs[leg], "functional shape mismatch on slice");
  require(c.size() == tensor_shape(legs).total, "coordinate length mismatch");
  int n = static_cast<int>(legs.size());
  std::vector<AlgebraShape> out_legs;
  for (int l = 0; l < n; ++l)
    if (l != leg) out_legs.push_back(legs[l]);
  int outTotal = out_legs.empty() ? 1 : tensor_shape(out_legs).total;
  Vec out = Vec::Zero(outTotal);
  std::vector<LegCoord> w;
  for_each_product_coord(legs, [&](int cin, const std::vector<LegCoord>& v) {
    cplx val = c(cin);
    if (val == cplx(0.0)) return;
    w.clear();
    for (int l = 0; l < n; ++l)
      if (l != leg) w.push_back(v[l]);
    int cOut = out_legs.empty() ? 0 : product_combine(out_legs, w);
    out(cOut) += omega.coeff(legs[leg].coord(v[leg].b, v[leg].i, v[leg].j)) * val;
  });
  return out;
}

BlockedOperator embed_legs(const BlockedOperator& x, const std::vector<AlgebraShape>& legs,
                           const std::vector<int>& where) {
  int n = static_cast<int>(legs.size());
  std::vector<AlgebraShape> sub;
  for (int p : where) sub.push_back(legs[p]);
  require(x.shape == tensor_shape(sub), "embedded element shape mismatch");
  std::vector<bool> used(n, false);
  for (int p : where) used[p] = true;
  AlgebraShape full = tensor_shape(legs);
  Vec out = Vec::Zero(full.total);
  Vec xc = x.coords();
  std::vector<LegCoord> w;
  for_each_product_coord(legs, [&](int c, const std::vector<LegCoord>& v) {
    for (int l = 0; l < n; ++l)
      if (!used[l] && v[l].i != v[l].j) return;
    w.clear();
    for (int p : where) w.push_back(v[p]);
    out(c) = xc(product_combine(sub, w));
  });
  return BlockedOperator::from_coords(full, out);
}

Vec apply_on_legs(const Mat& A, const std::vector<int>& dims, const std::vector<int>& legs,
                  const Vec& v) {
  int n = static_cast<int>(dims.size());
  long long totalDim = 1;
  for (int d : dims) totalDim *= d;
  require(v.size() == totalDim, "vector length mismatch");
  long long sub = 1;
  for (int l : legs) sub *= dims[l];
  require(A.rows() == sub && A.cols() == sub, "operator size mismatch on legs");

  std::vector<long long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  std::vector<bool> onLeg(n, false);
  for (int l : legs) onLeg[l] = true;
  std::vector<int> comp;
  for (int i = 0; i < n; ++i)
    if (!onLeg[i]) comp.push_back(i);

  // offsets of every leg multi-index
  int m = static_cast<int>(legs.size());
  std::vector<long long> legOffsets(sub, 0);
  {
    std::vector<int> idx(m, 0);
    for (long long k = 0; k < sub; ++k) {
      long long off = 0;
      for (int t = 0; t < m; ++t) off += idx[t] * stride[legs[t]];
      legOffsets[k] = off;
      for (int t = m - 1; t >= 0; --t) {
        if (++idx[t] < dims[legs[t]]) break;
        idx[t] = 0;
      }
    }
  }

  Vec out(v.size());
  std::vector<int> cidx(comp.size(), 0);
  long long compCount = 1;
  for (int i : comp) compCount *= dims[i];
  Vec gathered(sub);
  for (long long cc = 0; cc < compCount; ++cc) {
    long long base = 0;
    for (std::size_t t = 0; t < comp.size(); ++t) base += cidx[t] * stride[comp[t]];
    for (long long k = 0; k < sub; ++k) gathered(k) = v(base + legOffsets[k]);
    Vec y = A * gathered;
    for (long long k = 0; k < sub; ++k) out(base + legOffsets[k]) = y(k);
    for (int t = static_cast<int>(comp.size()) - 1; t >= 0; --t) {
      if (++cidx[t] < dims[comp[t]]) break;
      cidx[t] = 0;
    }
    if (comp.empty()) break;
  }
  return out;
}

}  // namespace qgavg
