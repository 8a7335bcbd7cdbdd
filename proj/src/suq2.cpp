#include "qgavg/suq2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qgavg {

namespace {

// Doubled spin of a half-integer input; rejects everything else.
int to_twice(double l, const std::string& what) {
  double t = 2.0 * l;
  double r = std::round(t);
  require(l >= 0.0 && std::abs(t - r) <= 1e-9, what + " must be a nonnegative half-integer");
  return static_cast<int>(r);
}

// q^e for integer e, routed through one call so that opposite exponents
// produce exact reciprocals of each other's factors and the spectrum and
// its inverse are the same multiset of doubles.
double ipow(double q, int e) {
  if (e >= 0) return std::pow(q, static_cast<double>(e));
  return 1.0 / std::pow(q, static_cast<double>(-e));
}

void check_label(const FusionData& d, int tl, const std::string& what) {
  require(tl <= d.twice_cutoff, what + " exceeds the cutoff");
}

Vec spectrum_twice(double q, int tl) {
  Vec v(tl + 1);
  for (int i = 0; i <= tl; ++i) v(i) = ipow(q, -tl + 2 * i);
  return v;
}

double trace_of(const Vec& spec) {
  std::vector<double> terms(spec.size());
  for (int i = 0; i < spec.size(); ++i) terms[i] = spec(i).real();
  return stable_sum(std::move(terms));
}

}  // namespace

std::vector<double> FusionData::labels() const {
  std::vector<double> out;
  for (int tl = 0; tl <= twice_cutoff; ++tl) out.push_back(tl / 2.0);
  return out;
}

FusionData make_fusion_data(double q, double cutoff) {
  require(q > 0.0 && q < 1.0, "deformation parameter must lie strictly inside (0, 1)");
  FusionData d;
  d.q = q;
  d.twice_cutoff = to_twice(cutoff, "cutoff");
  return d;
}

int spin_dim(double l) { return to_twice(l, "spin") + 1; }

Vec rho_spectrum(double q, double l) {
  require(q > 0.0 && q < 1.0, "deformation parameter must lie strictly inside (0, 1)");
  return spectrum_twice(q, to_twice(l, "spin"));
}

double qdim(double q, double l) {
  require(q > 0.0 && q < 1.0, "deformation parameter must lie strictly inside (0, 1)");
  return trace_of(spectrum_twice(q, to_twice(l, "spin")));
}

cplx xi_block_scalar(const FusionData& d, double l, const Mat& x) {
  int tl = to_twice(l, "spin");
  check_label(d, tl, "spin");
  int dim = tl + 1;
  require(x.rows() == dim && x.cols() == dim, "block does not match the spin dimension");
  // The inverse weights are the same powers with flipped exponents, so the
  // identity averages to exactly one: both traces sum one multiset.
  Vec spec = spectrum_twice(d.q, tl);
  std::vector<cplx> terms(dim);
  for (int i = 0; i < dim; ++i) terms[i] = x(i, i) * ipow(d.q, tl - 2 * i);
  return stable_sum(std::move(terms)) / trace_of(spec);
}

FusionOutcome fuse(const FusionData& d, double l1, double l2) {
  int t1 = to_twice(l1, "spin"), t2 = to_twice(l2, "spin");
  check_label(d, t1, "left spin");
  check_label(d, t2, "right spin");
  FusionOutcome out;
  for (int t3 = std::abs(t1 - t2); t3 <= t1 + t2; t3 += 2) {
    if (t3 > d.twice_cutoff)
      out.truncated = true;
    else
      out.labels.push_back(t3 / 2.0);
  }
  return out;
}

std::vector<cplx> central_unit(const FusionData& d) {
  return std::vector<cplx>(d.twice_cutoff + 1, cplx(1.0, 0.0));
}

std::vector<cplx> central_product(const FusionData& d, const std::vector<cplx>& a,
                                  const std::vector<cplx>& b) {
  std::size_t n = static_cast<std::size_t>(d.twice_cutoff) + 1;
  require(a.size() == n && b.size() == n, "central functions must cover every label");
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
  return out;
}

Report verify_fusion(const FusionData& d, double tol) {
  Report rep;
  rep.title = "fusion data at q = " + std::to_string(d.q);
  std::vector<double> ls = d.labels();

  double sym = 0.0, ratio = 0.0, limit = 0.0, unital = 0.0;
  for (double l : ls) {
    Vec spec = rho_spectrum(d.q, l);
    Vec inv(spec.size());
    for (int i = 0; i < spec.size(); ++i) inv(i) = 1.0 / spec(i).real();
    sym = std::max(sym, std::abs(trace_of(spec) - trace_of(inv)));

    int tl = static_cast<int>(std::round(2.0 * l));
    double closed = (ipow(d.q, -(tl + 1)) - ipow(d.q, tl + 1)) /
                    (ipow(d.q, -1) - ipow(d.q, 1));
    double qd = qdim(d.q, l);
    ratio = std::max(ratio, std::abs(qd - closed) / (1.0 + std::abs(closed)));

    limit = std::max(limit, std::abs(qdim(1.0 - 1e-6, l) - spin_dim(l)));

    cplx one = xi_block_scalar(d, l, Mat::Identity(tl + 1, tl + 1));
    unital = std::max(unital, std::abs(one - 1.0));
  }
  rep.add("spectrum traces agree with their inverses", sym, tol);
  rep.add("quantum dimensions match the closed ratio", ratio, tol);
  rep.add("classical dimensions return near q one", limit, 1e-4);
  rep.add("block averaging is unital", unital, tol);

  double dominate = 0.0, gap = 1e300;
  for (double qq : {0.3, 0.5, 0.7, 0.9})
    for (double l : ls) {
      double diff = qdim(qq, l) - spin_dim(l);
      dominate = std::max(dominate, -diff);
      if (l >= 0.5) gap = std::min(gap, diff);
    }
  rep.add("quantum dimensions dominate classical dimensions on a grid", dominate, tol);
  if (d.twice_cutoff >= 1)
    rep.add("the dominance is strict above spin zero", std::max(0.0, 1e-3 - gap), tol);

  Rng rng(2);
  double psd = 0.0, flat = 0.0;
  FusionData near_one = d;
  near_one.q = 1.0 - 1e-12;
  for (double l : ls) {
    int dim = spin_dim(l);
    for (int s = 0; s < 5; ++s) {
      Mat x = rng.psd(dim);
      cplx v = xi_block_scalar(d, l, x);
      psd = std::max(psd, std::max(0.0, -v.real()));
      psd = std::max(psd, std::abs(v.imag()));
      cplx w = xi_block_scalar(near_one, l, x);
      flat = std::max(flat, std::abs(w - x.trace() / static_cast<double>(dim)));
    }
  }
  rep.add("block averaging of PSD inputs stays nonnegative", psd, tol);
  rep.add("a flat spectrum averages to the normalized trace", flat, 1e-8);

  double unit_obj = 0.0, laws = 0.0, addv = 0.0;
  for (double l : ls) {
    FusionOutcome f = fuse(d, l, 0.0);
    if (f.truncated || f.labels != std::vector<double>{l}) unit_obj = 1.0;
  }
  rep.add("fusing with spin zero returns the label", unit_obj, tol);

  // Membership by the untruncated rule; symmetry in the first two slots and
  // self-duality moving a factor across.
  auto admits = [](int a, int b, int c) {
    return c >= std::abs(a - b) && c <= a + b && (a + b + c) % 2 == 0;
  };
  for (int a = 0; a <= d.twice_cutoff; ++a)
    for (int b = 0; b <= d.twice_cutoff; ++b)
      for (int c = 0; c <= d.twice_cutoff; ++c) {
        if (admits(a, b, c) != admits(b, a, c)) laws = 1.0;
        if (admits(a, b, c) != admits(a, c, b)) laws = 1.0;
      }
  rep.add("fusion multiplicities are symmetric and self dual", laws, tol);

  for (double l1 : ls)
    for (double l2 : ls) {
      FusionOutcome f = fuse(d, l1, l2);
      if (f.truncated) continue;
      std::vector<double> terms;
      for (double l3 : f.labels) terms.push_back(qdim(d.q, l3));
      double lhs = qdim(d.q, l1) * qdim(d.q, l2);
      addv = std::max(addv, std::abs(lhs - stable_sum(std::move(terms))) / (1.0 + lhs));
    }
  rep.add("quantum dimensions add up over untruncated fusions", addv, tol);

  if (d.twice_cutoff >= 2) {
    FusionOutcome f = fuse(d, 0.5, 0.5);
    double ok = (!f.truncated && f.labels == std::vector<double>{0.0, 1.0} &&
                 spin_dim(0.5) * spin_dim(0.5) == spin_dim(0.0) + spin_dim(1.0))
                    ? 0.0
                    : 1.0;
    rep.add("spin half fuses into spins zero and one", ok, tol);
  }
  if (d.twice_cutoff >= 1) {
    double top = d.twice_cutoff / 2.0;
    FusionOutcome f = fuse(d, top, top);
    rep.add("fusions beyond the cutoff are flagged", f.truncated ? 0.0 : 1.0, tol);
    for (double l : f.labels) require(l <= top, "fusion output escaped the cutoff");
  }

  {
    std::vector<cplx> a(d.twice_cutoff + 1), b(a.size()), c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.cgauss();
      b[i] = rng.cgauss();
      c[i] = rng.cgauss();
    }
    auto diff = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
      return m;
    };
    double alg = diff(central_product(d, a, b), central_product(d, b, a));
    alg = std::max(alg, diff(central_product(d, central_product(d, a, b), c),
                             central_product(d, a, central_product(d, b, c))));
    alg = std::max(alg, diff(central_product(d, central_unit(d), a), a));
    rep.add("central functions multiply pointwise as a commutative algebra", alg, tol);
  }

  rep.notes.push_back("weight ordering: increasing integer powers, lowest q^(-2l) first;"
                      " the scalar depends only on the spectrum");
  rep.notes.push_back("labels: spins 0, 1/2, ..., " +
                      std::to_string(d.twice_cutoff / 2.0));
  return rep;
}

}  // namespace qgavg
