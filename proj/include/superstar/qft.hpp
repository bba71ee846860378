#pragma once

#include <vector>

#include "superstar/coeff.hpp"
#include "superstar/params.hpp"
#include "superstar/superfunction.hpp"

namespace superstar {

struct QftParams {
  double theta = 1.0;
  double alpha = 0.3;
  double b = 0.0;
  double nu = 1.0;
  double Lambda = 1.0;
  int m = 2;

  QftParams() = default;
  QftParams(double theta, double alpha, double b, double nu, double Lambda, int m = 2);

  /// αθb²/(1+α)².
  double omega_pred() const;
  /// Λ(1 + Ω²).
  double lambda_pred() const;
  DeformationParams even_params() const { return {theta, alpha, m, 0}; }
  DeformationParams super_params() const { return {theta, alpha, m, 1}; }
};

/// Real field sampled on a periodic box, negligible on the box faces.
struct FieldConfig {
  GridFn phi;
};

/// Samples `f` (real-valued) on the grid; throws Precondition if it is complex or does not decay
/// below `decay` (relative to its peak) on the box faces.
FieldConfig make_field(const CoeffFn& f, GridSpec g, double decay = 1e-10);

/// x̃_μ = (2/θ)ω0(x, e_μ) as (constant, gradient).
RVec xtilde_gradient(double theta, int m, int mu);

struct HarmonicTerms {
  double kinetic = 0.0;        // ½ Σ_μ ∫ [−(i/2)x̃_μ, φ]⋆²
  double harmonic = 0.0;       // (Ω²/2) ∫ x̃²φ²
  double mass = 0.0;           // (ν²/2) ∫ φ²
  double quartic = 0.0;        // λ ∫ φ⋆φ⋆φ⋆φ
  double quartic_paired = 0.0; // λ ∫ (φ⋆φ)(φ⋆φ)
  double total() const { return kinetic + harmonic + mass + quartic; }
};
HarmonicTerms action_harmonic(const QftParams& q, double Omega, double lambda, const FieldConfig& f);

/// Terms of Tr(½|[−(i/2)(1+bξ)x̃_μ,(1+bξ)φ]|² + (ν²/2)|(1+bξ)φ|² + Λ|Φ⋆Φ|²), Φ = (1+bξ)φ.
struct SuperfieldTerms {
  // |X|² = conj(X)·X (pointwise graded product).
  double kinetic = 0.0;
  double mass = 0.0;
  double quartic = 0.0;
  // |X|² = conj(X)⋆X; complex in general.
  cplx kinetic_star;
  cplx mass_star;
  cplx quartic_star;
  /// Largest imaginary part of the pointwise-reading traces (should vanish).
  double imag_residual = 0.0;
  double total() const { return kinetic + mass + quartic; }
  cplx total_star() const { return kinetic_star + mass_star + quartic_star; }
};
SuperfieldTerms action_superfield(const QftParams& q, const FieldConfig& f);

/// ∫ f over the periodic box (rectangle rule, spectrally accurate for decaying fields).
cplx box_integral(const GridFn& f);

struct QftComparison {
  QftParams params;
  double omega_pred = 0.0;
  double lambda_pred = 0.0;
  HarmonicTerms harmonic;
  SuperfieldTerms superfield;
  // Relative residuals, pointwise reading.
  double kinetic_residual = 0.0;  // superfield kinetic vs harmonic kinetic + harmonic term
  double mass_residual = 0.0;
  double quartic_residual = 0.0;
  double total_residual = 0.0;
  // Same for the star reading.
  double kinetic_residual_star = 0.0;
  double mass_residual_star = 0.0;
  double quartic_residual_star = 0.0;
  double total_residual_star = 0.0;
  // Coefficients read off the superfield terms: Ω² from the kinetic excess, λ from the quartic term.
  double omega_fit = 0.0;
  double lambda_fit = 0.0;
  double traciality_residual = 0.0;  // two quartic evaluation orders
  double max_residual() const;
};
QftComparison qft_compare(const QftParams& q, const FieldConfig& f);

/// θ × α × b sweep for each field, evaluated in parallel.
std::vector<QftComparison> qft_sweep(double nu, double Lambda, const std::vector<double>& thetas,
                                     const std::vector<double>& alphas, const std::vector<double>& bs,
                                     const std::vector<FieldConfig>& fields);

}  // namespace superstar
