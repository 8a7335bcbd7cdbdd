#pragma once

#include "qgavg/linmap.hpp"

namespace qgavg {

// Scale-relative PSD acceptance: min eigenvalue >= -tol * (1 + norm).
inline constexpr double kPsdTol = 1e-10;

// Full embedded Choi matrix of f, size (domain.embed * codomain.embed)^2.
// Matrix units E_pq outside the embedded domain blocks map to zero; the
// image is the block-diagonal embedding of the codomain.
Mat choi_matrix(const LinearMap& f);

struct CpReport {
  bool cp = false;
  double min_eig = 0.0;    // over all block-pair Choi matrices
  double herm_defect = 0.0;
  double choi_norm = 0.0;  // largest block-pair spectral norm
};

// Complete positivity through per-block-pair Choi matrices. Equivalent to
// PSD-ness of choi_matrix(f) but scales to large block counts.
CpReport cp_check(const LinearMap& f, double tol = kPsdTol);

struct CbOpts {
  int restarts = 8;
  int max_iters = 400;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool cp_shortcut = true;  // testing hook; production callers keep it on
};

struct CbResult {
  double value = 0.0;
  bool exact = false;  // true on the CP path, where value = ||f(1)||
  int restarts_used = 0;
  bool converged = true;
  std::string note;
};

// Completely bounded norm. CP inputs take the exact path value = ||f(1)||;
// otherwise a lower-bound estimate of ||f tensor id_K||, K = codomain.embed,
// by multi-start alternating ascent over blockwise-unitary inputs.
CbResult cb_norm(const LinearMap& f, const CbOpts& opts = {});

}  // namespace qgavg
