#include "qgavg/corep.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace qgavg {

Mat extract_rho(const FiniteQuantumGroup& G, int alpha) {
  require(alpha >= 0 && alpha < static_cast<int>(G.irreps.size()), "no such irrep");
  const Irrep& U = G.irreps[alpha];
  const int d = U.dim;
  Mat R(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      R(j, i) = G.haar_hat(U.entry(i, 0).adjoint() * U.entry(j, 0));
  require((R - R.adjoint()).norm() <= 1e-10, "orthogonality matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es((R + R.adjoint()) / 2.0);
  require(es.eigenvalues().minCoeff() > 1e-10, "orthogonality matrix is not positive invertible");
  // R is rho^{-1} up to scale; Tr rho = Tr rho^{-1} pins it.
  double c = std::sqrt(R.inverse().trace().real());
  Mat rho = R.inverse() / c;
  require((rho * (c * R) - Mat::Identity(d, d)).norm() <= 1e-9, "rho inversion failed");
  return rho;
}

std::vector<BlockedOperator> characters(const FiniteQuantumGroup& G) {
  std::vector<BlockedOperator> out;
  for (const auto& U : G.irreps) {
    BlockedOperator chi = BlockedOperator::zero(G.dual_shape);
    for (int i = 0; i < U.dim; ++i) chi = chi + U.entry(i, i);
    out.push_back(chi);
  }
  return out;
}

IrrepTable build_irrep_table(const FiniteQuantumGroup& G) {
  IrrepTable t;
  auto chis = characters(G);
  for (size_t a = 0; a < G.irreps.size(); ++a)
    t.entries.push_back({G.irreps[a].dim, extract_rho(G, static_cast<int>(a)), chis[a]});
  return t;
}

Report schur_check(const FiniteQuantumGroup& G, const IrrepTable& table, double tol) {
  Report rep;
  rep.title = "orthogonality relations: " + G.name;
  const int nb = static_cast<int>(G.irreps.size());
  require(static_cast<int>(table.entries.size()) == nb, "table size mismatch");

  double norm_res = 0;
  for (const auto& e : table.entries)
    norm_res = std::max(norm_res, std::abs(e.rho.trace() - e.rho.inverse().trace()));
  rep.add("trace normalization of rho", norm_res, tol);

  double same = 0, cross = 0;
  for (int a = 0; a < nb; ++a) {
    const Irrep& Ua = G.irreps[a];
    const Mat rho_inv = table.entries[a].rho.inverse();
    const double tr_rho = table.entries[a].rho.trace().real();
    for (int b = 0; b < nb; ++b) {
      const Irrep& Ub = G.irreps[b];
      for (int i = 0; i < Ub.dim; ++i)
        for (int k = 0; k < Ub.dim; ++k)
          for (int j = 0; j < Ua.dim; ++j)
            for (int l = 0; l < Ua.dim; ++l) {
              cplx got = G.haar_hat(Ub.entry(i, k).adjoint() * Ua.entry(j, l));
              if (a == b) {
                cplx want = (k == l) ? rho_inv(j, i) / tr_rho : cplx(0, 0);
                same = std::max(same, std::abs(got - want));
              } else {
                cross = std::max(cross, std::abs(got));
              }
            }
    }
  }
  rep.add("orthogonality within each irrep", same, tol);
  rep.add("orthogonality across distinct irreps", cross, tol);
  return rep;
}

Report class_algebra_check(const FiniteQuantumGroup& G, double tol) {
  Report rep;
  rep.title = "class functions: " + G.name;
  auto chis = characters(G);
  const int nb = static_cast<int>(chis.size());
  const Functional& h = G.haar_hat;

  double ortho = 0;
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      cplx got = h(chis[a] * chis[b].adjoint());
      ortho = std::max(ortho, std::abs(got - (a == b ? 1.0 : 0.0)));
    }
  rep.add("characters orthonormal under the Haar state", ortho, tol);

  rep.add("trivial character is the unit",
          (chis[G.trivial_block] - BlockedOperator::identity(G.dual_shape)).norm(), tol);

  // Products decompose over the characters with nonnegative integer
  // coefficients; orthonormality makes the coefficients Haar integrals.
  double closure = 0, integral = 0;
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      BlockedOperator prod = chis[a] * chis[b];
      BlockedOperator span = BlockedOperator::zero(G.dual_shape);
      for (int c = 0; c < nb; ++c) {
        cplx coeff = h(prod * chis[c].adjoint());
        integral = std::max(integral, std::abs(coeff - std::round(coeff.real())));
        span = span + coeff * chis[c];
        if (std::round(coeff.real()) < -0.5) integral = std::max(integral, 1.0);
      }
      closure = std::max(closure, (prod - span).norm());
    }
  rep.add("products stay in the character span", closure, tol);
  rep.add("structure constants are nonnegative integers", integral, tol);

  double star = 0;
  for (int a = 0; a < nb; ++a) {
    BlockedOperator adj = chis[a].adjoint();
    BlockedOperator span = BlockedOperator::zero(G.dual_shape);
    for (int c = 0; c < nb; ++c) span = span + h(adj * chis[c].adjoint()) * chis[c];
    star = std::max(star, (adj - span).norm());
  }
  rep.add("star stays in the character span", star, tol);
  return rep;
}

}  // namespace qgavg
