#pragma once

#include "qgavg/multiplier.hpp"

namespace qgavg {

// Two-sided averaging by a functional on a face with coproduct cop:
// x -> (eta x id x eta) applied to the twofold coproduct of x.
LinearMap averaging_map(const AlgebraShape& s, const LinearMap& cop, const Functional& eta);

// Rank and a coordinate basis of the image of an idempotent map.
int image_dimension(const LinearMap& f, double tol = 1e-8);
std::vector<BlockedOperator> image_basis(const LinearMap& f, double tol = 1e-8);

// An embedding of quantum groups given through the surjection pi from the
// discrete face of the ambient source onto one face of the target. Averaging
// acts where multipliers live, so everything downstream stays on the source
// discrete face; eta = pistar_h is the target Haar state pulled back.
struct SubgroupMorphism {
  FiniteQuantumGroup source;
  FiniteQuantumGroup target;
  bool target_compact_face = true;
  LinearMap pi;             // source discrete face -> chosen target face
  Functional pistar_h;      // idempotent state on the source discrete face
  BlockedOperator pihat_pe; // its transform on the source compact face
  LinearMap xi;             // the averaging map on the source discrete face
};

// Validates pi (unital *-homomorphism, surjective, coproduct intertwiner)
// and derives the rest. Throws on structural failure.
SubgroupMorphism subgroup_morphism(const FiniteQuantumGroup& G, const FiniteQuantumGroup& K,
                                   const LinearMap& pi, bool target_compact_face);

// pi = counit into the one-point group: averaging is the identity.
SubgroupMorphism trivial_subgroup(const FiniteQuantumGroup& G);

// pi = id onto the source itself: averaging is the Haar mean times the unit.
SubgroupMorphism full_subgroup(const FiniteQuantumGroup& G);

// Function algebras of a classical group pair: embed[t] gives the index in g
// of the t-th element of k, and pi restricts functions along it.
SubgroupMorphism classical_subgroup(const FiniteGroupData& g, const FiniteGroupData& k,
                                    const std::vector<int>& embed);

BlockedOperator average(const SubgroupMorphism& m, const BlockedOperator& x);

// Projection, unitality, complete positivity, the convolution form
// eta * x * eta, the Tomiyama bimodule law on sampled pairs, symmetry under
// the involution, and the biinvariance characterization of the image.
Report check_conditional_expectation(const SubgroupMorphism& m, double tol = 1e-10,
                                     int samples = 20);

// Averaged multiplier with its action map.
Multiplier average_multiplier(const SubgroupMorphism& m, const BlockedOperator& a);

// Residual of the transported action-map formula: theta of the averaged
// multiplier against the three-leg expression routed through two copies of
// the multiplicative operator, compared on a full coordinate basis.
double averaged_theta_residual(const SubgroupMorphism& m, const BlockedOperator& a);

// Fourier side: compression of the compact face by pihat_pe and its predual.
struct XiPair {
  LinearMap xi_inf;  // compact face elements
  LinearMap xi_one;  // compact face functional coefficients
};

XiPair xi1_xiinf(const SubgroupMorphism& m);

// pihat_pe is a self-adjoint idempotent, the compression squares to itself,
// and the Fourier transform intertwines xi_one with the averaging map.
Report xi_fourier_report(const SubgroupMorphism& m, double tol = 1e-10);

}  // namespace qgavg
