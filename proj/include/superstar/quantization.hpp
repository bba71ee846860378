#pragma once

#include <vector>

#include "superstar/params.hpp"
#include "superstar/superfunction.hpp"
#include "superstar/superoperator.hpp"

namespace superstar {

/// Hermite functions of length sqrt(θ) on each of the m/2 coordinates of Q, tensored with the
/// 2^n monomials ξ0^I and 2^aux monomials of auxiliary generators (odd coordinates of Λ-points).
/// Index = even multi-level (first coordinate slowest) · 2^{n+aux} + mask, ξ0 in the low n bits.
struct TruncatedBasis {
  int levels = 32;
  int even_dims = 1;
  int n = 0;
  int aux = 0;
  double length = 1.0;

  std::size_t even_size() const;
  std::size_t odd_size() const { return std::size_t{1} << (n + aux); }
  std::size_t dim() const { return even_size() * odd_size(); }
  std::vector<int> grading() const;
  /// Indices whose even levels are all < `reliable`.
  std::vector<std::size_t> low_indices(int reliable) const;
};

TruncatedBasis make_basis(const DeformationParams& p, int levels = 32, int aux = 0);

/// Point (x, ξ, w, a) of the Heisenberg supergroup. ξ^i and a are Grassmann numbers over `aux`
/// auxiliary generators (odd and even respectively), so products of Λ-points stay exact.
struct GroupElement {
  RVec x, w;
  std::vector<Grassmann> xi;
  Grassmann a;
  int aux = 0;
};

GroupElement group_identity(int m, int n, int aux = 0);
/// (x,ξ,a)(y,η,b) = (x+y, ξ+η, a+b+½ω0(x,y)+ξη).
GroupElement group_mul(const GroupElement& g, const GroupElement& h);
GroupElement group_inverse(const GroupElement& g);
/// Places the auxiliary generators of h after those of g (aux counts add).
GroupElement shift_aux(const GroupElement& g, int offset, int total_aux);

/// ⟨h_j, e^{i(qx+c)} h_k(· − s)⟩ for the one-dimensional Hermite functions of length ℓ.
Eigen::MatrixXcd shift_modulate(int levels, double length, double s, double q, double c);

SuperOperator rep_U(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b);
SuperOperator sigma_op(const DeformationParams& p, const TruncatedBasis& b);
/// Ω(g) = U(g) Σ U(g⁻¹).
SuperOperator omega_point(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b);

/// Largest mass of a translated reliable basis state lost outside the truncated span.
double translation_leakage(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b,
                           int reliable);

/// Odd factor γ_odd·∫dξ ξ^I ∫dξ1 e^{(i/θ)(ξξ0 − αξ1ξ0 − (α+1)ξξ1)} ψ(ξ + ξ1) on the 2^{n+aux} monomials.
Eigen::MatrixXcd odd_omega_factor(const DeformationParams& p, Mask I, int aux = 0);
/// Even factor γ_even ∫dx dw f(x, w) e^{(2i/θ)ω0(x − x0, w)} φ(2x − x0).
struct EvenOmega {
  Eigen::MatrixXcd mat;
  double quadrature_error = 0.0;
};
EvenOmega even_omega(const DeformationParams& p, const CoeffFn& f, const TruncatedBasis& b);

struct OmegaResult {
  SuperOperator op;
  double quadrature_error = 0.0;
};
/// Ω(f) = Σ_I Ω_even(f_I) ⊗ Ω_odd(ξ^I). Plane waves (any m) and Gaussians (m = 2).
OmegaResult omega_map(const DeformationParams& p, const SuperFunction& f, const TruncatedBasis& b);

/// Λ-valued Gram matrix ⟨e_i, e_j⟩ = ∫dξ0 conj(e_i) e_j, one complex matrix per auxiliary monomial.
std::vector<std::pair<Mask, Eigen::MatrixXcd>> superhermitian_gram(const TruncatedBasis& b);

struct RepresentationReport {
  double residual = 0.0;  // ‖(U(g1)U(g2) − U(g1g2))|low‖
  double bound = 0.0;     // truncation-leakage bound
};
RepresentationReport representation_check(const DeformationParams& p, const GroupElement& g1, const GroupElement& g2,
                                          const TruncatedBasis& b, int reliable);

struct UnitarityReport {
  double superhermitian_residual = 0.0;  // max over aux monomials of ‖(U†GU − G)|low‖
  double hermitian_residual = 0.0;       // ‖(U^H U − 1)|low‖, informative
  double leakage = 0.0;
  double bound = 0.0;  // truncation-leakage bound for the superhermitian residual
};
UnitarityReport unitarity_check(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b,
                                int reliable);

/// max |A_ij − B_ij| over i, j in idx.
double restricted_distance(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, const std::vector<std::size_t>& idx);

}  // namespace superstar
