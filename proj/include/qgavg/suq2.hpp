#pragma once

#include <vector>

#include "qgavg/core.hpp"
#include "qgavg/report.hpp"

namespace qgavg {

// Fusion-level data of the q-deformed spin family: labels, dimensions,
// diagonal weight spectra, quantum dimensions, fusion multiplicities, and
// the block averaging scalar the spectra induce. Everything here is scalar
// bookkeeping over the label set; the underlying coefficient algebras are
// infinite-dimensional and stay out of scope, so no claim past this data is
// checked or made.
//
// Labels are spins 0, 1/2, 1, ..., cutoff, stored doubled so arithmetic on
// them stays exact.
struct FusionData {
  double q = 0.0;       // strictly inside (0, 1)
  int twice_cutoff = 0;

  std::vector<double> labels() const;  // ascending spins
};

FusionData make_fusion_data(double q, double cutoff);

// 2l + 1. Throws unless l is a nonnegative half-integer.
int spin_dim(double l);

// Diagonal weights q^{-2l}, q^{-2l+2}, ..., q^{2l}, lowest power of q first.
// Only the spectrum carries meaning; the reversed ordering would induce the
// same scalar below, and reports flag the convention in use.
Vec rho_spectrum(double q, double l);

// Trace of the weight spectrum, summed stably; equals
// (q^-(2l+1) - q^(2l+1)) / (q^-1 - q).
double qdim(double q, double l);

// Averaging scalar of a block-supported element: sum over i,k of
// x(i,k) rho^-1(k,i) / Tr rho. PSD inputs give nonnegative values, the
// identity gives exactly one, and a flat spectrum gives the normalized
// trace. Throws on a shape mismatch or a label outside the data.
cplx xi_block_scalar(const FusionData& d, double l, const Mat& x);

struct FusionOutcome {
  std::vector<double> labels;  // ascending, within the cutoff
  bool truncated = false;      // part of the product fell beyond the cutoff
};

// Spins |l1-l2|, |l1-l2|+1, ..., l1+l2, each once, clipped to the cutoff.
FusionOutcome fuse(const FusionData& d, double l1, double l2);

// Central multipliers at fusion level are scalar functions on the labels
// and multiply pointwise.
std::vector<cplx> central_unit(const FusionData& d);
std::vector<cplx> central_product(const FusionData& d, const std::vector<cplx>& a,
                                  const std::vector<cplx>& b);

// Spectrum symmetry, both quantum dimension routes, the classical limit,
// strict dominance over classical dimensions away from spin zero, scalar
// positivity and unitality, fusion laws, quantum dimension additivity on
// fused products, and the pointwise algebra laws.
Report verify_fusion(const FusionData& d, double tol = 1e-10);

}  // namespace qgavg
