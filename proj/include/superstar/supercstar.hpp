#pragma once

#include <vector>

#include "superstar/quantization.hpp"
#include "superstar/superoperator.hpp"

namespace superstar {

/// Graded Hilbert space with (·,·) given by `gram` and the superhermitian pairing ⟨x,y⟩ = (Jx, y).
struct HilbertSuper {
  std::vector<int> grading;
  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd J;
  int pJ = 0;
  double defect = 0.0;  // largest axiom residual found at construction
};

/// Checks (H0,H1) = 0, J unitary and homogeneous of degree pJ, J²x = (−1)^{(pJ+1)|x|}x.
HilbertSuper make_hilbert_super(std::vector<int> grading, Eigen::MatrixXcd gram, Eigen::MatrixXcd J, int pJ);
/// L²(R^{0|n}) on the monomials ξ^I with J = Hodge.
HilbertSuper hodge_hilbert(int n);
/// Truncated L²(Q): J = 1 on the Hermite factor ⊗ Hodge on the odd factor (no auxiliary generators).
HilbertSuper make_hilbert_super(const TruncatedBasis& b);

/// Λ-free superhermitian Gram matrix ⟨e_i, e_j⟩ = (J e_i, e_j).
Eigen::MatrixXcd superhermitian_gram(const HilbertSuper& H);

/// T† with ⟨T†x, y⟩ = (−1)^{|T||x|}⟨x, Ty⟩; inhomogeneous T is split into its homogeneous parts.
SuperOperator superadjoint(const HilbertSuper& H, const SuperOperator& T);
/// The same through the closed form (−1)^{(pJ+1)(|T|+|x|)+|T||x|} J T* J, applied block by block in |x|.
SuperOperator superadjoint_closed_form(const HilbertSuper& H, const SuperOperator& T);

struct CstarReport {
  double dagger_closure_residual = 0.0;  // distance of sampled W† from the span of generated words
  double star_closure_residual = 0.0;    // same for the Hilbert adjoint
  bool grading_consistent = true;        // every sampled word is homogeneous with the expected degree
  double cstar_discrepancy = 0.0;        // max | ‖T†T‖ − ‖T‖² | / ‖T‖², informative
  std::size_t span_dimension = 0;
};

/// Words of length ≤ max_length in the generators and their superadjoints.
CstarReport cstar_norm_check(const HilbertSuper& H, const std::vector<SuperOperator>& generators, int max_length = 3);

}  // namespace superstar
