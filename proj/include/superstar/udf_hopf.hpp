#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "superstar/params.hpp"
#include "superstar/quantization.hpp"
#include "superstar/superfunction.hpp"

namespace superstar {

/// e^{ik·z} ξ^I: a basis element of the super-torus algebra (integer k) or of H (real k).
struct Mode {
  RVec k;
  Mask I = 0;
  auto operator<=>(const Mode&) const = default;
};

/// Finite element of a graded tensor power of mode spans; keys hold one mode per factor.
/// rank 1 models the algebra A or H, rank 2 models A⊗H or H⊗H, and so on.
struct ModeTensor {
  int m = 0;
  int n = 0;
  int rank = 1;
  std::map<std::vector<Mode>, cplx> terms;

  ModeTensor() = default;
  ModeTensor(int m_, int n_, int rank_) : m(m_), n(n_), rank(rank_) {}

  static ModeTensor basis(const RVec& k, Mask I, int n, cplx c = 1.0);
  static ModeTensor unit(int m, int n);

  void add(const std::vector<Mode>& key, cplx c);
  ModeTensor& operator+=(const ModeTensor& o);
  ModeTensor& operator-=(const ModeTensor& o);
  ModeTensor& operator*=(cplx s);
  /// Sum of |coefficients|; for rank 1 this is Σ_I ‖a_I‖_∞ bound, exact on single modes.
  double l1() const;
};

ModeTensor operator+(ModeTensor a, const ModeTensor& b);
ModeTensor operator-(ModeTensor a, const ModeTensor& b);
ModeTensor operator*(cplx s, ModeTensor a);
double max_coeff_distance(const ModeTensor& a, const ModeTensor& b);

/// Factorwise graded product: (a1⊗…⊗ar)(b1⊗…⊗br) = ±(a1b1)⊗…⊗(arbr) with Koszul signs.
ModeTensor graded_product(const ModeTensor& a, const ModeTensor& b);
/// Replaces factor `pos` of every key by f(mode) (a tensor of any rank, possibly 0). f must be even.
ModeTensor apply_factor(const ModeTensor& t, int pos, const std::function<ModeTensor(const Mode&)>& f);
/// Multiplies factors pos and pos+1.
ModeTensor merge_factors(const ModeTensor& t, int pos);

// Hopf structure of H = B(R^{m|n}) on spans.
ModeTensor hopf_product(const ModeTensor& a, const ModeTensor& b);
ModeTensor hopf_unit(int m, int n);
/// Δf(z1, z2) = f(z1 + z2).
ModeTensor hopf_coproduct(const ModeTensor& a);
/// ε(f) = f(0) as a rank-0 tensor.
ModeTensor hopf_counit(const ModeTensor& a);
cplx hopf_counit_value(const ModeTensor& a);
/// Sf(z) = f(−z).
ModeTensor hopf_antipode(const ModeTensor& a);

struct HopfReport {
  double associativity = 0.0;
  double unit = 0.0;
  double coassociativity = 0.0;
  double counit = 0.0;
  double coproduct_morphism = 0.0;
  double counit_morphism = 0.0;
  double antipode = 0.0;
  double max() const;
};
/// Checks all Hopf axioms on the span generated by `basis` (pairs and triples of basis elements).
HopfReport hopf_check(const std::vector<ModeTensor>& basis);

/// Action of R^{m|n} on a mode algebra, given by its coaction χ(a)(z) = ρ_z(a) on basis modes.
struct GroupAction {
  std::string name;
  int m = 0;
  int n = 0;
  std::function<ModeTensor(const Mode&)> coaction;
};

/// ρ_z(u_k η^A) = e^{−ik·y} u_k (η − ξ)^A, the translation action on T^m × R^{0|n}.
GroupAction torus_translation(int m, int n);
/// u_k ↦ e^{−i|k|² y1} u_k: additive in y but not multiplicative.
GroupAction non_homomorphic_action(int m, int n);
/// a ↦ e^{i y1} a: a z-dependent rescaling, not an algebra automorphism.
GroupAction rescaling_action(int m, int n);

/// χ extended linearly to a rank-1 tensor.
ModeTensor coact(const GroupAction& A, const ModeTensor& a);
/// ρ_y(a) at an even point: A-valued coefficients of ξ^I, keyed by (A mode, I).
std::map<std::pair<Mode, Mask>, cplx> act_at(const GroupAction& A, const ModeTensor& a, const RVec& y);

struct ActionReport {
  double identity_residual = 0.0;      // ρ_0 = id
  double group_law_residual = 0.0;     // ρ_{z1+z2} = ρ_{z1}ρ_{z2}
  double automorphism_residual = 0.0;  // ρ_z(ab) = ρ_z(a)ρ_z(b)
  double boundedness_constant = 0.0;   // max ‖ρ_y(a)_I‖ / ‖a‖ over samples
  bool ok(double tol = 1e-12) const;
};
ActionReport validate_action(const GroupAction& A, const std::vector<ModeTensor>& span,
                             const std::vector<RVec>& samples);
/// Throws InvariantViolation when validate_action reports a failing axiom.
void require_valid(const GroupAction& A, const std::vector<ModeTensor>& span, const std::vector<RVec>& samples);

/// Sup bounds of the derivatives of order ≤ `order` of every component of ρ^a; throws Precondition
/// if any bound is not finite.
std::vector<double> smooth_vector_bounds(const GroupAction& A, const ModeTensor& a, int order);

/// a ⋆_ρ b = (ρ^a ⋆ ρ^b)(0), the H factors multiplied with starprod.
ModeTensor deformed_product(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                            const ModeTensor& b);
/// Graded conjugation on the algebra: conj coefficients, u_k → u_{−k}.
ModeTensor torus_dagger(const ModeTensor& a);

struct WeylReport {
  double modulus_residual = 0.0;       // max ||Phase| − 1|
  double relation_residual = 0.0;      // max |u_k⋆u_l − e^{iΘ}u_l⋆u_k|
  double antisymmetry_residual = 0.0;  // Θ(k,l) + Θ(l,k)
  double bilinearity_residual = 0.0;   // Θ(k1+k2,l) − Θ(k1,l) − Θ(k2,l) mod 2π
  double unitarity_residual = 0.0;     // u_k ⋆ u_k† − 1
  double theta_formula_residual = 0.0; // measured Θ vs σθω0(k,l)
};
/// Weyl relation of the deformed torus on plane waves u_k, k in `ks` (integer vectors).
WeylReport weyl_check(const DeformationParams& p, const GroupAction& A, const std::vector<RVec>& ks);
/// Θ(k,l) = σθω0(k,l).
double weyl_theta(const DeformationParams& p, const RVec& k, const RVec& l);

/// F(a⊗b) = κ∫ e^{−(2i/θ)ω̃(z1,z2)} ρ_{z1}a ⊗ ρ_{z2}b, evaluated through the phase table.
ModeTensor twist_apply(const DeformationParams& p, const GroupAction& A, const ModeTensor& ab);
/// F⁻¹ on the span: the diagonal phase inverted, the nilpotent remainder resolved by iteration.
ModeTensor twist_inverse_apply(const DeformationParams& p, const GroupAction& A, const ModeTensor& ab);
/// μ0 on a rank-2 tensor of algebra modes.
ModeTensor mu0(const ModeTensor& ab);
ModeTensor tensor_of(const ModeTensor& a, const ModeTensor& b);

struct ComoduleReport {
  double coassociativity = 0.0;        // (χ⊗id)χ = (id⊗Δ)χ
  double counit = 0.0;                 // (id⊗ε)χ = id
  double product_equivariance = 0.0;   // χ(ab) = χ(a)χ(b)
  double deformed_equivariance = 0.0;  // χ(a⋆b) = χ(a)⋆χ(b)
  double max() const;
};
ComoduleReport comodule_check(const DeformationParams& p, const GroupAction& A, const std::vector<ModeTensor>& span);

/// Ξ(a) = Ω(ρ^a) on L²(Q)⊗Λ_n ⊗ (A represented by evaluation at `points` ⊗ left multiplication on Λ_n).
/// Block-diagonal in the evaluation points; one block per point.
std::vector<Eigen::MatrixXcd> xi_blocks(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                                        const TruncatedBasis& b, const std::vector<RVec>& points);

struct NormEstimate {
  std::vector<int> levels;
  std::vector<double> norms;
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};
/// ‖a‖_ρ ≈ max over points of ‖Ξ(a)‖ for the basis sizes levels and 2·levels.
NormEstimate deformed_norm_estimate(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                                    int levels, const std::vector<RVec>& points, double tol = 1e-6);

/// Relative residual ‖Ξ(a⋆b) − Ξ(a)Ξ(b)‖ on the reliable block (levels below half the basis).
double xi_multiplicativity(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                           const ModeTensor& b, int levels, const std::vector<RVec>& points);

}  // namespace superstar
