#pragma once

#include <string>
#include <vector>

#include "qgavg/core.hpp"

namespace qgavg {

// A finite group given by its multiplication table together with a complete
// list of inequivalent irreducible unitary representations.
struct FiniteGroupData {
  std::string name;
  int order = 0;
  int identity = 0;
  std::vector<std::vector<int>> table;  // table[a][b] = a*b
  std::vector<std::vector<Mat>> irreps; // irreps[r][g], unitary d_r x d_r

  int mult(int a, int b) const { return table[a][b]; }
  int inverse(int a) const;
  int irrep_dim(int r) const { return static_cast<int>(irreps[r][0].rows()); }
  cplx character(int r, int g) const { return irreps[r][g].trace(); }
};

// Throws if the table is not a group law, the identity/inverses are wrong,
// any listed representation fails to be a unitary homomorphism, the list is
// incomplete (sum of squared dimensions), or two entries are equivalent.
void verify_group_data(const FiniteGroupData& g, double tol = 1e-12);

FiniteGroupData cyclic_group(int n);
FiniteGroupData symmetric_group_3();
FiniteGroupData dihedral_group_4();   // symmetries of the square, order 8
FiniteGroupData quaternion_group();   // {±1, ±i, ±j, ±k}

}  // namespace qgavg
