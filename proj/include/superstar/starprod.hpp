#pragma once

#include <memory>
#include <string>
#include <vector>

#include "superstar/params.hpp"
#include "superstar/superfunction.hpp"

namespace superstar {

/// Structure constants ξ^I ⋆ ξ^J = Σ_K c_{IJ}^K ξ^K of the odd factor.
class OddStarTable {
 public:
  OddStarTable(int n, double theta, double alpha, std::vector<cplx> c);

  int n() const { return n_; }
  double theta() const { return theta_; }
  double alpha() const { return alpha_; }
  cplx at(Mask I, Mask J, Mask K) const { return c_[((I << n_ | J) << n_) | K]; }
  Grassmann product(Mask I, Mask J) const;
  Grassmann star(const Grassmann& a, const Grassmann& b) const;
  /// c with ξ^1 ⋆ ξ^1 = c·1 (0 when n = 0).
  cplx clifford_scalar() const;

 private:
  int n_;
  double theta_, alpha_;
  std::vector<cplx> c_;
};

/// Exact expansion of the odd kernel; cached per (n, θ, α).
std::shared_ptr<const OddStarTable> odd_star_table(const DeformationParams& p);

/// σ in e_k ⋆ e_l = exp(σ(iθ/2)ω0(k,l)) e_{k+l}, derived once from the regularized direct evaluator.
int moyal_phase_sign();

struct DirectOptions {
  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  double max_residual = 1e-6;
};

struct DirectResult {
  SuperFunction value;
  double residual_estimate = 0.0;
};

/// Evaluates the star-product integral directly: Gaussian closed form, ε-regularized Fresnel
/// limits for plane waves, or grid quadrature (m = 2).
DirectResult star_direct(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g,
                         const DirectOptions& opts = {});
/// Factorized Moyal ⊗ Clifford evaluation for plane waves and grids (grids: m = 2).
SuperFunction star_fast(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g);
/// star_fast where available, otherwise the Gaussian closed form.
SuperFunction star(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g);
/// f ⋆ g − (−1)^{|f||g|} g ⋆ f for homogeneous f, g.
SuperFunction star_bracket(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g);

GaussianTerm moyal_gaussian(double theta, const GaussianTerm& f, const GaussianTerm& g);
GridFn moyal_grid_fast(double theta, const GridFn& f, const GridFn& g);
GridFn moyal_grid_direct(double theta, const GridFn& f, const GridFn& g);
/// ℓ ⋆ f (or f ⋆ ℓ) for an affine ℓ(z) = c + grad·z; exact because the series stops at first order.
GridFn moyal_affine(double theta, cplx c, const RVec& grad, const GridFn& f, bool affine_on_left);

struct CommutativeLimitReport {
  std::vector<double> thetas;
  std::vector<double> product_error;   // sup |f1⋆f2 − f1f2|
  std::vector<double> bracket_error;   // sup |bracket/θ − stated Poisson expression|
  std::vector<double> fitted_error;    // same with the fitted prefactor
  double product_rate = 0.0;
  double bracket_rate = 0.0;
  double fitted_bracket_rate = 0.0;
  double product_limit_discrepancy = 0.0;  // extrapolated θ→0 of sup |f1⋆f2 − f1f2|
  double bracket_limit_discrepancy = 0.0;  // extrapolated θ→0 vs stated expression
  double stated_prefactor = 1.0;
  cplx fitted_prefactor = 1.0;
};

CommutativeLimitReport commutative_limit_check(const DeformationParams& p, const SuperFunction& f1,
                                               const SuperFunction& f2, const std::vector<double>& thetas,
                                               const std::vector<RVec>& points);
/// −i·pref·(−1)^{|f1||μ|} ω̃^{-1}_{νμ} ∂_μf1 ∂_νf2 at a point.
Grassmann poisson_expression(const DeformationParams& p, const SuperFunction& f1, const SuperFunction& f2,
                             const RVec& z, double prefactor);

struct TracialReport {
  cplx trace_star;
  cplx trace_pointwise;
  double trace_residual;
  double conj_residual;
};

/// Integrals use the closed form (Gaussians), the box (grids) or the periodic-box volume (plane waves).
TracialReport tracial_check(const DeformationParams& p, const SuperFunction& f1, const SuperFunction& f2,
                            const std::vector<RVec>& points, std::optional<double> box_volume = std::nullopt);

/// z ↦ S z + t on even coordinates, ξ ↦ R ξ on odd ones.
struct AffineSuperMap {
  Eigen::MatrixXd S;
  Eigen::MatrixXd R;
  RVec t;
  static AffineSuperMap translation(const RVec& t, int n);
};

struct SymmetryReport {
  bool precondition_ok = false;
  double symplectic_defect = 0.0;
  double residual = 0.0;
  std::string message;
};

/// (φ*f)(z, ξ) = f(Sz + t, Rξ).
SuperFunction pullback(const AffineSuperMap& phi, const SuperFunction& f);
SymmetryReport symmetry_check(const DeformationParams& p, const AffineSuperMap& phi, const SuperFunction& f1,
                              const SuperFunction& f2, const std::vector<RVec>& points);

}  // namespace superstar
