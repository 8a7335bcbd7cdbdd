#include "qgavg/fqg.hpp"

#include <Eigen/LU>

#include <cmath>

namespace qgavg {

namespace {

// Validation gate for builder input; verify_axioms re-measures everything.
constexpr double kBuildTol = 1e-8;

Mat diag_of(const Vec& v) {
  Mat d = Mat::Zero(v.size(), v.size());
  for (int i = 0; i < v.size(); ++i) d(i, i) = v(i);
  return d;
}

BlockedOperator coord_unit(const AlgebraShape& s, int c) {
  Vec v = Vec::Zero(s.total);
  v(c) = 1.0;
  return BlockedOperator::from_coords(s, v);
}

}  // namespace

Mat antiunitary_conj(const Mat& K, const Mat& T) {
  return K * T.conjugate() * K.conjugate();
}

BlockedOperator Irrep::entry(int i, int j) const {
  const AlgebraShape& ts = corep.shape;
  std::vector<int> base_dims(ts.dims.size());
  for (size_t b = 0; b < ts.dims.size(); ++b) {
    require(ts.dims[b] % dim == 0, "corep shape does not factor");
    base_dims[b] = ts.dims[b] / dim;
  }
  AlgebraShape base = AlgebraShape::of(base_dims);
  BlockedOperator out = BlockedOperator::zero(base);
  for (int b = 0; b < base.blocks(); ++b) {
    int db = base.dims[b];
    for (int k = 0; k < db; ++k)
      for (int l = 0; l < db; ++l)
        out.blocks[b](k, l) = corep.blocks[b](i * db + k, j * db + l);
  }
  return out;
}

Vec FiniteQuantumGroup::gns(const BlockedOperator& x) const {
  require(x.shape == dual_shape, "gns expects a compact side element");
  return sqrt_w.asDiagonal() * x.coords();
}

BlockedOperator FiniteQuantumGroup::gns_inv(const Vec& v) const {
  return BlockedOperator::from_coords(dual_shape, sqrt_w.asDiagonal().inverse() * v);
}

Mat FiniteQuantumGroup::represent(const BlockedOperator& x) const {
  Mat l = left_mult(x).mat;
  return diag_of(sqrt_w) * l * diag_of(sqrt_w).inverse();
}

Mat FiniteQuantumGroup::represent_discrete(const BlockedOperator& xhat) const {
  require(xhat.shape == discrete_shape, "expected a discrete side element");
  Vec c = xhat.coords();
  Mat out = Mat::Zero(gns_dim, gns_dim);
  for (int u = 0; u < discrete_shape.total; ++u) out += c(u) * rep_units[u];
  return out;
}

BlockedOperator FiniteQuantumGroup::lambda(const Functional& omega) const {
  require(omega.shape == dual_shape, "Fourier transform expects a compact side functional");
  return BlockedOperator::from_coords(discrete_shape, lambda_mat * omega.coeff);
}

Functional FiniteQuantumGroup::lambda_inv_of(const BlockedOperator& xhat) const {
  require(xhat.shape == discrete_shape, "expected a discrete side element");
  return {dual_shape, lambda_inv * xhat.coords()};
}

Mat FiniteQuantumGroup::slice_first(const Mat& T, const Functional& omega) const {
  require(omega.shape == dual_shape, "slice expects a compact side functional");
  const int N = gns_dim;
  require(T.rows() == N * N && T.cols() == N * N, "slice expects an operator on H x H");
  Mat out = Mat::Zero(N, N);
  const AlgebraShape& s = dual_shape;
  for (int b = 0; b < s.blocks(); ++b) {
    int d = s.dims[b];
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        cplx w = omega.coeff(s.coord(b, i, k));
        if (w == 0.0) continue;
        // Averaged matrix-entry recovery of the first leg.
        for (int l = 0; l < d; ++l) {
          int r = s.coord(b, i, l), c = s.coord(b, k, l);
          out += (w / static_cast<double>(d)) * T.block(r * N, c * N, N, N);
        }
      }
  }
  return out;
}

FiniteQuantumGroup assemble_fqg(std::string name, const AlgebraShape& compact,
                                LinearMap coproduct_hat, Functional counit_hat,
                                LinearMap antipode_hat, Functional haar_hat,
                                std::vector<Irrep> irreps) {
  FiniteQuantumGroup G;
  G.name = std::move(name);
  G.dual_shape = compact;
  const AlgebraShape& cs = G.dual_shape;
  AlgebraShape cc = tensor_shape(cs, cs);

  require(coproduct_hat.domain == cs && coproduct_hat.codomain == cc,
          "coproduct shape mismatch");
  require(counit_hat.shape == cs && haar_hat.shape == cs, "functional shape mismatch");
  require(antipode_hat.domain == cs && antipode_hat.codomain == cs, "antipode shape mismatch");
  G.coproduct_hat = std::move(coproduct_hat);
  G.counit_hat = std::move(counit_hat);
  G.antipode_hat = std::move(antipode_hat);
  G.haar_hat = std::move(haar_hat);
  G.irreps = std::move(irreps);

  std::vector<int> ddims;
  for (const auto& u : G.irreps) ddims.push_back(u.dim);
  G.discrete_shape = AlgebraShape::of(ddims);
  const AlgebraShape& ds = G.discrete_shape;
  require(ds.total == cs.total,
          "corep coefficients cannot span the compact algebra (dimension count)");

  BlockedOperator one = BlockedOperator::identity(cs);

  // Haar state: normalized, positive, tracial with strictly positive block
  // weights. Traciality makes the GNS weights constant on each block.
  require(std::abs(G.haar_hat(one) - 1.0) <= kBuildTol, "Haar functional is not normalized");
  require(G.haar_hat.positivity_defect() <= kBuildTol, "Haar functional is not positive");
  auto hrep = G.haar_hat.representer();
  G.sqrt_w = Vec(cs.total);
  for (int b = 0; b < cs.blocks(); ++b) {
    int d = cs.dims[b];
    cplx w = hrep[b].trace() / static_cast<double>(d);
    require((hrep[b] - w * Mat::Identity(d, d)).norm() <= kBuildTol,
            "Haar state is not tracial");
    require(std::abs(w.imag()) <= kBuildTol && w.real() > kBuildTol,
            "Haar state is not faithful");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) G.sqrt_w(cs.coord(b, i, j)) = std::sqrt(w.real());
  }

  // Coproduct: unital *-homomorphism, sampled.
  require((G.coproduct_hat(one) - tensor_elem(one, one)).norm() <= kBuildTol,
          "coproduct is not unital");
  Rng rng(12345);
  for (int t = 0; t < 6; ++t) {
    BlockedOperator x = rng.element(cs), y = rng.element(cs);
    double scale = (1 + x.norm()) * (1 + y.norm());
    require((G.coproduct_hat(x * y) - G.coproduct_hat(x) * G.coproduct_hat(y)).norm() <=
                kBuildTol * scale,
            "coproduct is not multiplicative");
    require((G.coproduct_hat(x.adjoint()) - G.coproduct_hat(x).adjoint()).norm() <=
                kBuildTol * scale,
            "coproduct does not respect the star");
  }

  // Corepresentations: unitary, satisfying the coproduct rule on
  // coefficients; their coefficients give the Fourier transform matrix.
  G.lambda_mat = Mat(cs.total, cs.total);
  for (int a = 0; a < ds.blocks(); ++a) {
    const Irrep& U = G.irreps[a];
    AlgebraShape want = tensor_shape(AlgebraShape::of({U.dim}), cs);
    require(U.dim == ds.dims[a] && U.corep.shape == want, "corep stored on the wrong shape");
    BlockedOperator tid = BlockedOperator::identity(want);
    require((U.corep.adjoint() * U.corep - tid).norm() <= kBuildTol &&
                (U.corep * U.corep.adjoint() - tid).norm() <= kBuildTol,
            "corep is not unitary");
    for (int i = 0; i < U.dim; ++i)
      for (int j = 0; j < U.dim; ++j) {
        BlockedOperator uij = U.entry(i, j);
        G.lambda_mat.row(ds.coord(a, i, j)) = uij.coords().transpose();
        BlockedOperator rhs = BlockedOperator::zero(cc);
        for (int k = 0; k < U.dim; ++k)
          rhs = rhs + tensor_elem(U.entry(i, k), U.entry(k, j));
        require((G.coproduct_hat(uij) - rhs).norm() <= kBuildTol,
                "coproduct rule fails on corep coefficients");
      }
  }
  Eigen::PartialPivLU<Mat> lu(G.lambda_mat);
  G.lambda_inv = lu.inverse();
  require((G.lambda_mat * G.lambda_inv - Mat::Identity(cs.total, cs.total)).norm() <= kBuildTol,
          "corep coefficients are linearly dependent");

  G.trivial_block = -1;
  for (int a = 0; a < ds.blocks(); ++a) {
    if (G.irreps[a].dim != 1) continue;
    if ((G.irreps[a].entry(0, 0) - one).norm() <= kBuildTol) {
      require(G.trivial_block < 0, "two trivial coreps listed");
      G.trivial_block = a;
    }
  }
  require(G.trivial_block >= 0, "no trivial corep listed");

  // Counit, antipode and invariance laws; hard gates here, measured again by
  // verify_axioms.
  LinearMap idc = LinearMap::identity(cs);
  require(map_distance(slice_leg({cs, cs}, 0, G.counit_hat) * G.coproduct_hat, idc) <= kBuildTol,
          "counit law fails (left)");
  require(map_distance(slice_leg({cs, cs}, 1, G.counit_hat) * G.coproduct_hat, idc) <= kBuildTol,
          "counit law fails (right)");
  LinearMap mc = mult_map(cs);
  Mat eps_target = one.coords() * G.counit_hat.coeff.transpose();
  require(((mc * tensor_map(G.antipode_hat, idc) * G.coproduct_hat).mat - eps_target).norm() <=
              kBuildTol,
          "antipode law fails (left)");
  require(((mc * tensor_map(idc, G.antipode_hat) * G.coproduct_hat).mat - eps_target).norm() <=
              kBuildTol,
          "antipode law fails (right)");
  const Mat ptc = transpose_perm(cs);
  require((G.antipode_hat.mat * G.antipode_hat.mat - Mat::Identity(cs.total, cs.total)).norm() <=
              kBuildTol,
          "antipode is not involutive (input outside the tracial case)");
  require((G.antipode_hat.mat * ptc * G.antipode_hat.mat.conjugate() * ptc -
           Mat::Identity(cs.total, cs.total))
                  .norm() <= kBuildTol,
          "antipode does not commute with the star");
  G.unitary_antipode_hat = G.antipode_hat;

  Mat haar_target = one.coords() * G.haar_hat.coeff.transpose();
  require(((slice_leg({cs, cs}, 0, G.haar_hat) * G.coproduct_hat).mat - haar_target).norm() <=
              kBuildTol,
          "Haar state is not left invariant");
  require(((slice_leg({cs, cs}, 1, G.haar_hat) * G.coproduct_hat).mat - haar_target).norm() <=
              kBuildTol,
          "Haar state is not right invariant");
  require((pullback(G.antipode_hat, G.haar_hat).coeff - G.haar_hat.coeff).norm() <= kBuildTol,
          "Haar state is not fixed by the antipode");

  // Discrete side through the pairing <lambda(omega), a> = omega(a): the
  // counit is dual to the unit and the antipode to the antipode, while the
  // coproduct is dual to the OPPOSITE multiplication. With this orientation
  // the transported coproduct is the one conjugation by the leg-flipped
  // multiplicative operator implements; the straight orientation fails that
  // implementation check on nonabelian function algebras.
  Mat P1 = G.lambda_inv.transpose();
  LinearMap p1inv{ds, cs, G.lambda_mat.transpose()};
  Mat P2inv = tensor_map(p1inv, p1inv).mat;
  G.coproduct = {ds, tensor_shape(ds, ds),
                 (P1 * mc.mat * flip_map(cs).mat * P2inv).transpose()};
  G.counit = {ds, P1 * one.coords()};
  G.antipode = {ds, ds, (P1 * G.antipode_hat.mat * G.lambda_mat.transpose()).transpose()};

  std::vector<Mat> phirep;
  for (int b = 0; b < ds.blocks(); ++b)
    phirep.push_back(static_cast<double>(ds.dims[b]) * Mat::Identity(ds.dims[b], ds.dims[b]));
  G.haar_weight = Functional::from_representer(ds, phirep);

  // GNS space and the multiplicative unitary, built from its defining action
  // on Lambda of the matrix units.
  const int N = cs.total;
  G.gns_dim = N;
  auto sp = split_pair(cs, cs);
  Mat Wstar = Mat::Zero(N * N, N * N);
  for (int c1 = 0; c1 < N; ++c1) {
    BlockedOperator left = tensor_elem(coord_unit(cs, c1), one);
    for (int c2 = 0; c2 < N; ++c2) {
      BlockedOperator y = BlockedOperator::from_coords(cc, G.coproduct_hat.mat.col(c2)) * left;
      Vec yc = y.coords();
      for (int ct = 0; ct < cc.total; ++ct) {
        if (yc(ct) == 0.0) continue;
        int u = sp[ct].first, v = sp[ct].second;
        Wstar(u * N + v, c1 * N + c2) +=
            yc(ct) * G.sqrt_w(u) * G.sqrt_w(v) / (G.sqrt_w(c1) * G.sqrt_w(c2));
      }
    }
  }
  G.W_hat = Wstar.adjoint();
  require((G.W_hat * Wstar - Mat::Identity(N * N, N * N)).norm() <= kBuildTol,
          "multiplicative operator is not unitary");
  Mat flip = Mat::Zero(N * N, N * N);
  for (int p1 = 0; p1 < N; ++p1)
    for (int p2 = 0; p2 < N; ++p2) flip(p2 * N + p1, p1 * N + p2) = 1.0;
  G.W = (flip * G.W_hat * flip).adjoint();

  // Discrete algebra on H: slices of the second leg of W_hat.
  G.rep_units.resize(ds.total);
  for (int u = 0; u < ds.total; ++u)
    G.rep_units[u] = G.slice_first(G.W_hat, Functional{cs, G.lambda_inv.col(u)});
  for (int a = 0; a < ds.blocks(); ++a) {
    int d = ds.dims[a];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Mat& m = G.rep_units[ds.coord(a, i, j)];
        require((m.adjoint() - G.rep_units[ds.coord(a, j, i)]).norm() <= kBuildTol,
                "discrete representation does not respect the star");
      }
  }
  Mat sum_diag = Mat::Zero(N, N);
  for (int a = 0; a < ds.blocks(); ++a)
    for (int i = 0; i < ds.dims[a]; ++i) sum_diag += G.rep_units[ds.coord(a, i, i)];
  require((sum_diag - Mat::Identity(N, N)).norm() <= kBuildTol,
          "discrete representation is not unital");
  for (int u1 = 0; u1 < ds.total; ++u1)
    for (int u2 = 0; u2 < ds.total; ++u2) {
      BlockedOperator prod = coord_unit(ds, u1) * coord_unit(ds, u2);
      Mat want = G.represent_discrete(prod);
      require((G.rep_units[u1] * G.rep_units[u2] - want).norm() <= kBuildTol,
              "discrete representation is not multiplicative");
    }

  // The operator W_hat must live in represented-compact tensor
  // represented-discrete with coefficients given by the coreps.
  Mat recon = Mat::Zero(N * N, N * N);
  for (int a = 0; a < ds.blocks(); ++a)
    for (int i = 0; i < ds.dims[a]; ++i)
      for (int j = 0; j < ds.dims[a]; ++j)
        recon += kron(G.represent(G.irreps[a].entry(i, j)), G.rep_units[ds.coord(a, i, j)]);
  require((recon - G.W_hat).norm() <= kBuildTol,
          "coefficient expansion of the multiplicative operator fails");

  // Modular conjugations, as matrix-times-conjugation on H.
  Mat dw = diag_of(G.sqrt_w), dwi = diag_of(G.sqrt_w).inverse();
  G.J_hat = dw * ptc * dwi;
  G.J = dw * ptc * G.antipode_hat.mat.conjugate() * dwi;
  for (const Mat* K : {&G.J_hat, &G.J}) {
    require((K->adjoint() * (*K) - Mat::Identity(N, N)).norm() <= kBuildTol,
            "modular conjugation is not antiunitary");
    require(((*K) * K->conjugate() - Mat::Identity(N, N)).norm() <= kBuildTol,
            "modular conjugation is not an involution");
  }

  return G;
}

FiniteQuantumGroup build_function_algebra(const FiniteGroupData& g) {
  require(!g.irreps.empty(), "group irreps are required to block the compact side");
  verify_group_data(g);
  const int n = g.order;
  std::vector<int> dims;
  for (size_t r = 0; r < g.irreps.size(); ++r) dims.push_back(g.irrep_dim(static_cast<int>(r)));
  AlgebraShape cs = AlgebraShape::of(dims);
  require(cs.total == n, "irrep list incomplete");

  // Column g: the group element as a blocked operator.
  auto lam = [&](int a) {
    BlockedOperator x = BlockedOperator::zero(cs);
    for (int b = 0; b < cs.blocks(); ++b) x.blocks[b] = g.irreps[b][a];
    return x;
  };
  Mat B(n, n);
  for (int a = 0; a < n; ++a) B.col(a) = lam(a).coords();
  Eigen::PartialPivLU<Mat> lu(B);
  Mat Binv = lu.inverse();
  require((B * Binv - Mat::Identity(n, n)).norm() <= 1e-9, "group basis is degenerate");

  AlgebraShape cc = tensor_shape(cs, cs);
  Mat C(cc.total, n);
  for (int a = 0; a < n; ++a) C.col(a) = tensor_elem(lam(a), lam(a)).coords();
  LinearMap dhat{cs, cc, C * Binv};

  Functional ehat{cs, Binv.transpose() * Vec::Ones(n)};

  Mat pinv = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) pinv(g.inverse(a), a) = 1.0;
  LinearMap shat{cs, cs, B * pinv * Binv};

  std::vector<Mat> hrep;
  for (int b = 0; b < cs.blocks(); ++b)
    hrep.push_back(static_cast<double>(cs.dims[b]) / n * Mat::Identity(cs.dims[b], cs.dims[b]));
  Functional h = Functional::from_representer(cs, hrep);
  for (int a = 0; a < n; ++a) {
    double want = a == g.identity ? 1.0 : 0.0;
    require(std::abs(h(lam(a)) - want) <= 1e-10, "Haar state wrong on a group element");
  }

  std::vector<Irrep> irreps;
  AlgebraShape one_block = tensor_shape(AlgebraShape::of({1}), cs);
  for (int a = 0; a < n; ++a)
    irreps.push_back({1, BlockedOperator::from_coords(one_block, B.col(a))});

  return assemble_fqg(g.name, cs, dhat, ehat, shat, h, std::move(irreps));
}

FiniteQuantumGroup build_dual_of_group(const FiniteGroupData& g) {
  require(!g.irreps.empty(), "group irreps are required for the discrete side blocks");
  verify_group_data(g);
  const int n = g.order;
  AlgebraShape cs = AlgebraShape::of(std::vector<int>(n, 1));

  AlgebraShape cc = tensor_shape(cs, cs);
  Mat dm = Mat::Zero(n * n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) dm(s * n + t, g.table[s][t]) = 1.0;
  LinearMap dhat{cs, cc, dm};

  Vec ec = Vec::Zero(n);
  ec(g.identity) = 1.0;
  Functional ehat{cs, ec};

  Mat sm = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) sm(g.inverse(a), a) = 1.0;
  LinearMap shat{cs, cs, sm};

  Functional h{cs, Vec::Constant(n, 1.0 / n)};

  std::vector<Irrep> irreps;
  for (size_t r = 0; r < g.irreps.size(); ++r) {
    int d = g.irrep_dim(static_cast<int>(r));
    AlgebraShape ts = tensor_shape(AlgebraShape::of({d}), cs);
    BlockedOperator u = BlockedOperator::zero(ts);
    for (int a = 0; a < n; ++a) u.blocks[a] = g.irreps[r][a];
    irreps.push_back({d, u});
  }

  return assemble_fqg(g.name + "dual", cs, dhat, ehat, shat, h, std::move(irreps));
}

FiniteQuantumGroup builtin_model(const std::string& name) {
  if (name == "z2") return build_function_algebra(cyclic_group(2));
  if (name == "z3") return build_function_algebra(cyclic_group(3));
  if (name == "s3") return build_function_algebra(symmetric_group_3());
  if (name == "s3dual") return build_dual_of_group(symmetric_group_3());
  if (name == "d4dual") return build_dual_of_group(dihedral_group_4());
  if (name == "q8dual") return build_dual_of_group(quaternion_group());
  require(false, "unknown builtin model: " + name);
  return {};
}

std::vector<std::string> builtin_model_names() {
  return {"z2", "z3", "s3", "s3dual", "d4dual", "q8dual"};
}

namespace {

// Hopf-algebra law residuals shared by the two faces.
void side_checks(Report& rep, const std::string& side, const AlgebraShape& s,
                 const LinearMap& delta, const Functional& eps, const LinearMap& anti,
                 double tol, std::uint64_t seed) {
  LinearMap id = LinearMap::identity(s);
  BlockedOperator one = BlockedOperator::identity(s);

  rep.add("coassociativity (" + side + ")",
          map_distance(tensor_map(delta, id) * delta, tensor_map(id, delta) * delta), tol);
  rep.add("counit law left (" + side + ")",
          map_distance(slice_leg({s, s}, 0, eps) * delta, id), tol);
  rep.add("counit law right (" + side + ")",
          map_distance(slice_leg({s, s}, 1, eps) * delta, id), tol);

  LinearMap mm = mult_map(s);
  Mat eps_target = one.coords() * eps.coeff.transpose();
  rep.add("antipode law left (" + side + ")",
          ((mm * tensor_map(anti, id) * delta).mat - eps_target).norm(), tol);
  rep.add("antipode law right (" + side + ")",
          ((mm * tensor_map(id, anti) * delta).mat - eps_target).norm(), tol);
  rep.add("antipode involutive (" + side + ")",
          (anti.mat * anti.mat - Mat::Identity(s.total, s.total)).norm(), tol);
  Mat pt = transpose_perm(s);
  rep.add("antipode respects star (" + side + ")",
          (anti.mat * pt * anti.mat.conjugate() * pt - Mat::Identity(s.total, s.total)).norm(),
          tol);
  rep.add("antipode antimultiplicative (" + side + ")",
          map_distance(anti * mm, mm * flip_map(s) * tensor_map(anti, anti)), tol);

  rep.add("coproduct unital (" + side + ")", (delta(one) - tensor_elem(one, one)).norm(), tol);
  Rng rng(seed);
  double hom = 0, star = 0, epsm = 0;
  for (int t = 0; t < 5; ++t) {
    BlockedOperator x = rng.element(s), y = rng.element(s);
    double scale = (1 + x.norm()) * (1 + y.norm());
    hom = std::max(hom, (delta(x * y) - delta(x) * delta(y)).norm() / scale);
    star = std::max(star, (delta(x.adjoint()) - delta(x).adjoint()).norm() / (1 + x.norm()));
    epsm = std::max(epsm, std::abs(eps(x * y) - eps(x) * eps(y)) / scale);
  }
  rep.add("coproduct multiplicative, sampled (" + side + ")", hom, tol);
  rep.add("coproduct respects star, sampled (" + side + ")", star, tol);
  rep.add("counit multiplicative, sampled (" + side + ")", epsm, tol);
}

}  // namespace

Report verify_axioms(const FiniteQuantumGroup& G, double tol) {
  Report rep;
  rep.title = "axiom audit: " + G.name;
  const AlgebraShape& cs = G.dual_shape;
  const AlgebraShape& ds = G.discrete_shape;
  BlockedOperator one = BlockedOperator::identity(cs);
  BlockedOperator oned = BlockedOperator::identity(ds);
  const int N = G.gns_dim;

  side_checks(rep, "compact side", cs, G.coproduct_hat, G.counit_hat, G.antipode_hat, tol, 101);
  side_checks(rep, "discrete side", ds, G.coproduct, G.counit, G.antipode, tol, 102);

  // Haar state.
  rep.add("Haar state normalized", std::abs(G.haar_hat(one) - 1.0), tol);
  rep.add("Haar state positive", std::max(G.haar_hat.positivity_defect(), 0.0), tol);
  LinearMap mc = mult_map(cs);
  rep.add("Haar state tracial",
          (pullback(mc, G.haar_hat).coeff - pullback(mc * flip_map(cs), G.haar_hat).coeff).norm(),
          tol);
  Mat haar_target = one.coords() * G.haar_hat.coeff.transpose();
  rep.add("Haar state left invariant",
          ((slice_leg({cs, cs}, 0, G.haar_hat) * G.coproduct_hat).mat - haar_target).norm(), tol);
  rep.add("Haar state right invariant",
          ((slice_leg({cs, cs}, 1, G.haar_hat) * G.coproduct_hat).mat - haar_target).norm(), tol);
  rep.add("Haar state fixed by antipode",
          (pullback(G.antipode_hat, G.haar_hat).coeff - G.haar_hat.coeff).norm(), tol);

  // Haar weight on the discrete side.
  LinearMap md = mult_map(ds);
  rep.add("Haar weight tracial",
          (pullback(md, G.haar_weight).coeff - pullback(md * flip_map(ds), G.haar_weight).coeff)
              .norm(),
          tol);
  Mat phi_target = oned.coords() * G.haar_weight.coeff.transpose();
  rep.add("Haar weight left invariant",
          ((slice_leg({ds, ds}, 0, G.haar_weight) * G.coproduct).mat - phi_target).norm(), tol);
  rep.add("Haar weight right invariant",
          ((slice_leg({ds, ds}, 1, G.haar_weight) * G.coproduct).mat - phi_target).norm(), tol);
  rep.add("Haar weight fixed by antipode",
          (pullback(G.antipode, G.haar_weight).coeff - G.haar_weight.coeff).norm(), tol);

  // Corepresentations.
  double uni = 0, law = 0, eps_c = 0, anti_c = 0;
  for (int a = 0; a < ds.blocks(); ++a) {
    const Irrep& U = G.irreps[a];
    BlockedOperator tid = BlockedOperator::identity(U.corep.shape);
    uni = std::max(uni, (U.corep.adjoint() * U.corep - tid).norm());
    uni = std::max(uni, (U.corep * U.corep.adjoint() - tid).norm());
    for (int i = 0; i < U.dim; ++i)
      for (int j = 0; j < U.dim; ++j) {
        BlockedOperator uij = U.entry(i, j);
        BlockedOperator rhs = BlockedOperator::zero(tensor_shape(cs, cs));
        for (int k = 0; k < U.dim; ++k)
          rhs = rhs + tensor_elem(U.entry(i, k), U.entry(k, j));
        law = std::max(law, (G.coproduct_hat(uij) - rhs).norm());
        eps_c = std::max(eps_c,
                         std::abs(G.counit_hat(uij) - (i == j ? 1.0 : 0.0)));
        anti_c = std::max(anti_c,
                          (G.antipode_hat(uij) - U.entry(j, i).adjoint()).norm());
      }
  }
  rep.add("coreps unitary", uni, tol);
  rep.add("coproduct rule on corep coefficients", law, tol);
  rep.add("counit on corep coefficients", eps_c, tol);
  rep.add("antipode on corep coefficients", anti_c, tol);

  // Fourier transform.
  Rng rng(777);
  double four_mult = 0;
  for (int t = 0; t < 5; ++t) {
    Functional w1 = rng.functional(cs), w2 = rng.functional(cs);
    Functional conv = pullback(G.coproduct_hat, tensor_functional(w1, w2));
    double scale = (1 + w1.coeff.norm()) * (1 + w2.coeff.norm());
    four_mult = std::max(four_mult,
                         (G.lambda(conv) - G.lambda(w1) * G.lambda(w2)).norm() / scale);
  }
  rep.add("Fourier transform of convolution is a product, sampled", four_mult, tol);
  rep.add("Fourier transform of the counit is the unit",
          (G.lambda(G.counit_hat) - oned).norm(), tol);
  rep.add("Fourier transform of the Haar state is the trivial-block projection",
          (G.lambda(G.haar_hat) - coord_unit(ds, ds.coord(G.trivial_block, 0, 0))).norm(), tol);
  rep.add("Fourier transform invertible",
          (G.lambda_mat * G.lambda_inv - Mat::Identity(cs.total, cs.total)).norm(), tol);

  // Multiplicative operator.
  Mat idHH = Mat::Identity(N * N, N * N);
  rep.add("multiplicative operator unitary",
          std::max((G.W_hat.adjoint() * G.W_hat - idHH).norm(),
                   (G.W_hat * G.W_hat.adjoint() - idHH).norm()),
          tol);
  {
    // Legs 12, 13, 23 on H x H x H.
    const int NN = N * N, NNN = N * N * N;
    Mat w12 = Mat::Zero(NNN, NNN), w13 = Mat::Zero(NNN, NNN), w23 = Mat::Zero(NNN, NNN);
    for (int p3 = 0; p3 < N; ++p3)
      for (int r = 0; r < NN; ++r)
        for (int c = 0; c < NN; ++c) w12(r * N + p3, c * N + p3) = G.W_hat(r, c);
    for (int p1 = 0; p1 < N; ++p1)
      for (int r = 0; r < NN; ++r)
        for (int c = 0; c < NN; ++c) w23(p1 * NN + r, p1 * NN + c) = G.W_hat(r, c);
    for (int p2 = 0; p2 < N; ++p2)
      for (int r1 = 0; r1 < N; ++r1)
        for (int r3 = 0; r3 < N; ++r3)
          for (int c1 = 0; c1 < N; ++c1)
            for (int c3 = 0; c3 < N; ++c3)
              w13(r1 * NN + p2 * N + r3, c1 * NN + p2 * N + c3) = G.W_hat(r1 * N + r3, c1 * N + c3);
    rep.add("pentagon identity", (w12 * w13 * w23 - w23 * w12).norm(), tol);
  }

  // Slice property of the adjoint against the GNS map, sampled.
  double slice_res = 0;
  for (int t = 0; t < 5; ++t) {
    Functional om = rng.functional(cs);
    BlockedOperator x = rng.element(cs);
    Vec lhs = G.slice_first(G.W_hat.adjoint(), om) * G.gns(x);
    Vec rhs = G.gns(slice_leg({cs, cs}, 0, om)(G.coproduct_hat(x)));
    slice_res = std::max(slice_res, (lhs - rhs).norm() / ((1 + om.coeff.norm()) * (1 + x.norm())));
  }
  rep.add("multiplicative operator slice property, sampled", slice_res, tol);

  // Coefficient expansion.
  {
    Mat recon = Mat::Zero(N * N, N * N);
    for (int a = 0; a < ds.blocks(); ++a)
      for (int i = 0; i < ds.dims[a]; ++i)
        for (int j = 0; j < ds.dims[a]; ++j)
          recon += kron(G.represent(G.irreps[a].entry(i, j)), G.rep_units[ds.coord(a, i, j)]);
    rep.add("coefficient expansion of the multiplicative operator", (recon - G.W_hat).norm(), tol);
  }

  // Both coproducts implemented on H.
  {
    std::vector<Mat> repc(cs.total);
    for (int c = 0; c < cs.total; ++c) repc[c] = G.represent(coord_unit(cs, c));
    auto rep2c = [&](const BlockedOperator& X) {
      auto spc = split_pair(cs, cs);
      Vec xc = X.coords();
      Mat out = Mat::Zero(N * N, N * N);
      for (int ct = 0; ct < X.shape.total; ++ct)
        if (xc(ct) != 0.0) out += xc(ct) * kron(repc[spc[ct].first], repc[spc[ct].second]);
      return out;
    };
    double imp = 0;
    for (int t = 0; t < 3; ++t) {
      BlockedOperator x = rng.element(cs);
      Mat lhs = G.W_hat.adjoint() * kron(Mat::Identity(N, N), G.represent(x)) * G.W_hat;
      imp = std::max(imp, (lhs - rep2c(G.coproduct_hat(x))).norm() / (1 + x.norm()));
    }
    rep.add("coproduct implemented on H (compact side, sampled)", imp, tol);

    auto spd = split_pair(ds, ds);
    double impd = 0;
    for (int u = 0; u < ds.total; ++u) {
      BlockedOperator du = G.coproduct(coord_unit(ds, u));
      Vec dc = du.coords();
      Mat want = Mat::Zero(N * N, N * N);
      for (int ct = 0; ct < du.shape.total; ++ct)
        if (dc(ct) != 0.0)
          want += dc(ct) * kron(G.rep_units[spd[ct].first], G.rep_units[spd[ct].second]);
      Mat lhs = G.W.adjoint() * kron(Mat::Identity(N, N), G.rep_units[u]) * G.W;
      impd = std::max(impd, (lhs - want).norm());
    }
    rep.add("coproduct implemented on H (discrete side)", impd, tol);
  }

  // Modular conjugations.
  Mat idH = Mat::Identity(N, N);
  rep.add("compact conjugation antiunitary", (G.J_hat.adjoint() * G.J_hat - idH).norm(), tol);
  rep.add("compact conjugation involutive", (G.J_hat * G.J_hat.conjugate() - idH).norm(), tol);
  rep.add("discrete conjugation antiunitary", (G.J.adjoint() * G.J - idH).norm(), tol);
  rep.add("discrete conjugation involutive", (G.J * G.J.conjugate() - idH).norm(), tol);
  {
    double comm = 0;
    for (int c = 0; c < cs.total; ++c) {
      Mat jt = antiunitary_conj(G.J_hat, G.represent(coord_unit(cs, c)));
      for (int c2 = 0; c2 < cs.total; ++c2) {
        Mat b = G.represent(coord_unit(cs, c2));
        comm = std::max(comm, (jt * b - b * jt).norm());
      }
    }
    rep.add("compact conjugation lands in the commutant", comm, tol);
    double commd = 0;
    for (int u = 0; u < ds.total; ++u) {
      Mat jt = antiunitary_conj(G.J, G.rep_units[u]);
      for (int u2 = 0; u2 < ds.total; ++u2) {
        const Mat& b = G.rep_units[u2];
        commd = std::max(commd, (jt * b - b * jt).norm());
      }
    }
    rep.add("discrete conjugation lands in the commutant", commd, tol);
  }

  rep.notes.push_back("Haar weight normalization: block trace times block dimension");
  return rep;
}

}  // namespace qgavg
