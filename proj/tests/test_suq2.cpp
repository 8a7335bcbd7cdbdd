#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "qgavg/suq2.hpp"

using namespace qgavg;

TEST_CASE("quantum dimensions take the closed ratio values") {
  CHECK(qdim(0.5, 0.5) == 2.5);
  CHECK(qdim(0.5, 0.0) == 1.0);
  for (double q : {0.3, 0.5, 0.9})
    for (double l : {0.0, 0.5, 1.0, 1.5, 2.0}) {
      double tl = 2.0 * l;
      double closed = (std::pow(q, -(tl + 1.0)) - std::pow(q, tl + 1.0)) /
                      (1.0 / q - q);
      CHECK(std::abs(qdim(q, l) - closed) < 1e-10 * (1.0 + closed));
    }
}

TEST_CASE("the half spin block scalar follows the inverse weights") {
  for (double q : {0.3, 0.5, 0.9}) {
    FusionData d = make_fusion_data(q, 2.0);
    Mat e00 = Mat::Zero(2, 2), e01 = Mat::Zero(2, 2);
    e00(0, 0) = 1.0;
    e01(0, 1) = 1.0;
    CHECK(std::abs(xi_block_scalar(d, 0.5, e00) - q / (q + 1.0 / q)) < 1e-14);
    CHECK(std::abs(xi_block_scalar(d, 0.5, e01)) == 0.0);
    CHECK(xi_block_scalar(d, 0.5, Mat::Identity(2, 2)) == cplx(1.0, 0.0));
  }
}

TEST_CASE("identity blocks average to exactly one on every label") {
  FusionData d = make_fusion_data(0.37, 4.0);
  for (double l : d.labels()) {
    int n = spin_dim(l);
    CHECK(xi_block_scalar(d, l, Mat::Identity(n, n)) == cplx(1.0, 0.0));
  }
}

TEST_CASE("PSD inputs give nonnegative scalars") {
  FusionData d = make_fusion_data(0.6, 3.0);
  Rng rng(4);
  for (double l : d.labels())
    for (int s = 0; s < 10; ++s) {
      cplx v = xi_block_scalar(d, l, rng.psd(spin_dim(l)));
      CHECK(v.real() >= -1e-12);
      CHECK(std::abs(v.imag()) < 1e-12);
    }
}

TEST_CASE("a nearly flat spectrum averages like the normalized trace") {
  FusionData d = make_fusion_data(1.0 - 1e-6, 2.0);
  Mat e00 = Mat::Zero(3, 3);
  e00(0, 0) = 1.0;
  CHECK(std::abs(xi_block_scalar(d, 1.0, e00) - 1.0 / 3.0) < 1e-4);
  Mat e11 = Mat::Zero(4, 4);
  e11(1, 1) = 1.0;
  CHECK(std::abs(xi_block_scalar(d, 1.5, e11) - 0.25) < 1e-4);
}

TEST_CASE("fusion follows the ladder rules and flags truncation") {
  FusionData d = make_fusion_data(0.5, 2.0);
  FusionOutcome half = fuse(d, 0.5, 0.5);
  CHECK(half.labels == std::vector<double>{0.0, 1.0});
  CHECK_FALSE(half.truncated);
  CHECK(spin_dim(0.5) * spin_dim(0.5) == spin_dim(0.0) + spin_dim(1.0));

  for (double l : d.labels()) {
    FusionOutcome u = fuse(d, l, 0.0);
    CHECK(u.labels == std::vector<double>{l});
    CHECK_FALSE(u.truncated);
  }

  FusionOutcome top = fuse(d, 2.0, 2.0);
  CHECK(top.truncated);
  CHECK(top.labels == std::vector<double>{0.0, 1.0, 2.0});

  FusionOutcome mixed = fuse(d, 1.5, 1.0);
  CHECK(mixed.truncated);
  CHECK(mixed.labels == std::vector<double>{0.5, 1.5});
}

TEST_CASE("quantum dimensions multiply across the half fusion") {
  for (double q : {0.3, 0.5, 0.9}) {
    double lhs = qdim(q, 0.5) * qdim(q, 0.5);
    double rhs = qdim(q, 0.0) + qdim(q, 1.0);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("quantum dimensions converge to the classical ones") {
  for (double l : {0.0, 0.5, 1.0, 2.5, 5.0})
    CHECK(std::abs(qdim(1.0 - 1e-6, l) - spin_dim(l)) < 1e-4);
}

TEST_CASE("malformed parameters are refused") {
  CHECK_THROWS(make_fusion_data(1.2, 1.0));
  CHECK_THROWS(make_fusion_data(0.0, 1.0));
  CHECK_THROWS(make_fusion_data(0.5, 0.3));
  CHECK_THROWS(spin_dim(0.3));
  CHECK_THROWS(spin_dim(-0.5));
  FusionData d = make_fusion_data(0.5, 1.0);
  CHECK_THROWS(fuse(d, 2.0, 0.0));
  CHECK_THROWS(xi_block_scalar(d, 2.0, Mat::Identity(5, 5)));
  CHECK_THROWS(xi_block_scalar(d, 1.0, Mat::Identity(2, 2)));
  CHECK_THROWS(central_product(d, std::vector<cplx>(2), std::vector<cplx>(3)));
}

TEST_CASE("the fusion report passes and is deterministic") {
  for (double q : {0.3, 0.5, 0.9}) {
    FusionData d = make_fusion_data(q, 2.5);
    Report r = verify_fusion(d);
    CAPTURE(r.render_text());
    CHECK(r.all_pass());
  }
  FusionData d = make_fusion_data(0.5, 3.0);
  CHECK(verify_fusion(d).digest() == verify_fusion(d).digest());
}
