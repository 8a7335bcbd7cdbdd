#include "qgavg/groups.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace qgavg {

namespace {

// Multiplication table of a group presented by a faithful list of matrices.
std::vector<std::vector<int>> table_from_faithful(const std::vector<Mat>& el) {
  const int n = static_cast<int>(el.size());
  std::vector<std::vector<int>> table(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Mat p = el[a] * el[b];
      for (int c = 0; c < n; ++c) {
        if ((p - el[c]).norm() < 1e-9) {
          require(table[a][b] == -1, "group elements not distinct");
          table[a][b] = c;
        }
      }
      require(table[a][b] >= 0, "group not closed under multiplication");
    }
  }
  return table;
}

int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

int FiniteGroupData::inverse(int a) const {
  for (int b = 0; b < order; ++b)
    if (table[a][b] == identity) return b;
  require(false, "group element has no inverse");
  return -1;
}

void verify_group_data(const FiniteGroupData& g, double tol) {
  const int n = g.order;
  require(n > 0 && static_cast<int>(g.table.size()) == n, "bad table size");
  for (const auto& row : g.table) {
    require(static_cast<int>(row.size()) == n, "bad table row");
    for (int v : row) require(v >= 0 && v < n, "table entry out of range");
  }
  for (int a = 0; a < n; ++a) {
    require(g.table[g.identity][a] == a && g.table[a][g.identity] == a,
            "identity law fails");
    g.inverse(a);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        require(g.table[g.table[a][b]][c] == g.table[a][g.table[b][c]],
                "associativity fails");
  }

  int dimsum = 0;
  for (size_t r = 0; r < g.irreps.size(); ++r) {
    const auto& rep = g.irreps[r];
    require(static_cast<int>(rep.size()) == n, "irrep missing elements");
    const int d = g.irrep_dim(static_cast<int>(r));
    dimsum += d * d;
    require((rep[g.identity] - Mat::Identity(d, d)).norm() <= tol,
            "irrep does not send identity to 1");
    for (int a = 0; a < n; ++a) {
      require((rep[a].adjoint() * rep[a] - Mat::Identity(d, d)).norm() <= tol,
              "irrep not unitary");
      for (int b = 0; b < n; ++b)
        require((rep[a] * rep[b] - rep[g.table[a][b]]).norm() <= tol,
                "irrep not a homomorphism");
    }
  }
  require(dimsum == n, "irrep list incomplete");

  for (size_t r = 0; r < g.irreps.size(); ++r) {
    for (size_t s = 0; s < g.irreps.size(); ++s) {
      cplx ip = 0;
      for (int a = 0; a < n; ++a)
        ip += g.character(static_cast<int>(r), a) *
              std::conj(g.character(static_cast<int>(s), a));
      ip /= static_cast<double>(n);
      const cplx want = (r == s) ? cplx(1, 0) : cplx(0, 0);
      require(std::abs(ip - want) <= 1e-10,
              "characters not orthonormal (reducible or repeated entry)");
    }
  }
}

FiniteGroupData cyclic_group(int n) {
  require(n >= 1, "cyclic group order must be positive");
  FiniteGroupData g;
  g.name = "z" + std::to_string(n);
  g.order = n;
  g.identity = 0;
  g.table.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
  g.irreps.resize(n);
  for (int k = 0; k < n; ++k) {
    g.irreps[k].resize(n);
    for (int j = 0; j < n; ++j) {
      Mat m(1, 1);
      m(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * j * k / n);
      g.irreps[k][j] = m;
    }
  }
  verify_group_data(g);
  return g;
}

FiniteGroupData symmetric_group_3() {
  FiniteGroupData g;
  g.name = "s3";
  g.order = 6;
  const std::vector<std::vector<int>> perms = {
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto find = [&](const std::vector<int>& p) {
    for (int c = 0; c < 6; ++c)
      if (perms[c] == p) return c;
    require(false, "permutation lookup failed");
    return -1;
  };
  g.identity = find({0, 1, 2});
  g.table.assign(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::vector<int> ab(3);
      for (int x = 0; x < 3; ++x) ab[x] = perms[a][perms[b][x]];
      g.table[a][b] = find(ab);
    }

  g.irreps.resize(3);
  for (int a = 0; a < 6; ++a) {
    Mat one(1, 1), sgn(1, 1);
    one(0, 0) = 1.0;
    sgn(0, 0) = static_cast<double>(permutation_sign(perms[a]));
    g.irreps[0].push_back(one);
    g.irreps[1].push_back(sgn);
    // Action on the sum-zero plane in an orthonormal basis.
    Mat basis(3, 2);
    basis << 1 / std::sqrt(2.0), 1 / std::sqrt(6.0),
        -1 / std::sqrt(2.0), 1 / std::sqrt(6.0),
        0.0, -2 / std::sqrt(6.0);
    Mat perm = Mat::Zero(3, 3);
    for (int y = 0; y < 3; ++y) perm(perms[a][y], y) = 1.0;
    g.irreps[2].push_back(basis.adjoint() * perm * basis);
  }
  verify_group_data(g);
  return g;
}

FiniteGroupData dihedral_group_4() {
  FiniteGroupData g;
  g.name = "d4";
  g.order = 8;
  g.identity = 0;
  Mat rot(2, 2), ref(2, 2);
  rot << 0, -1, 1, 0;
  ref << 1, 0, 0, -1;
  // Element index eps*4 + k stands for rot^k * ref^eps.
  std::vector<Mat> faithful;
  std::vector<std::array<int, 2>> word;  // {k, eps}
  for (int eps = 0; eps < 2; ++eps)
    for (int k = 0; k < 4; ++k) {
      Mat m = Mat::Identity(2, 2);
      for (int t = 0; t < k; ++t) m = rot * m;
      if (eps) m = m * ref;
      faithful.push_back(m);
      word.push_back({k, eps});
    }
  g.table = table_from_faithful(faithful);

  g.irreps.resize(5);
  const std::array<std::array<int, 2>, 4> signs = {
      {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  for (int e = 0; e < 8; ++e) {
    for (int r = 0; r < 4; ++r) {
      Mat m(1, 1);
      double v = 1.0;
      for (int t = 0; t < word[e][0]; ++t) v *= signs[r][0];
      if (word[e][1]) v *= signs[r][1];
      m(0, 0) = v;
      g.irreps[r].push_back(m);
    }
    g.irreps[4].push_back(faithful[e]);
  }
  verify_group_data(g);
  return g;
}

FiniteGroupData quaternion_group() {
  FiniteGroupData g;
  g.name = "q8";
  g.order = 8;
  g.identity = 0;
  const cplx I(0, 1);
  Mat qi(2, 2), qj(2, 2);
  qi << I, 0, 0, -I;
  qj << 0, 1, -1, 0;
  Mat qk = qi * qj;
  Mat one = Mat::Identity(2, 2);
  // Order: 1, -1, i, -i, j, -j, k, -k.
  std::vector<Mat> faithful = {one, -one, qi, -qi, qj, -qj, qk, -qk};
  g.table = table_from_faithful(faithful);

  g.irreps.resize(5);
  const std::array<std::array<int, 2>, 4> signs = {
      {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  for (int e = 0; e < 8; ++e) {
    for (int r = 0; r < 4; ++r) {
      Mat m(1, 1);
      double v = 1.0;
      if (e == 2 || e == 3) v = signs[r][0];                 // ±i
      if (e == 4 || e == 5) v = signs[r][1];                 // ±j
      if (e == 6 || e == 7) v = signs[r][0] * signs[r][1];   // ±k
      m(0, 0) = v;
      g.irreps[r].push_back(m);
    }
    g.irreps[4].push_back(faithful[e]);
  }
  verify_group_data(g);
  return g;
}

}  // namespace qgavg
