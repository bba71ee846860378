#pragma once

#include <Eigen/Dense>

#include "superstar/grassmann.hpp"

namespace superstar {

/// θ > 0, α ∉ {0,−1}, m even, n ≥ 0, with the derived normalization constants.
/// Each constant splits into an even factor (depending on m) and an odd factor (depending on n).
struct DeformationParams {
  double theta;
  double alpha;
  int m;
  int n;

  DeformationParams(double theta, double alpha, int m, int n);

  cplx gamma_even() const;  // (πθ)^{-m/2}
  cplx gamma_odd() const;   // (−1)^{n(n+1)/2}(iθ)^n/(1+α)^n
  cplx gamma() const { return gamma_even() * gamma_odd(); }
  cplx r_even() const;      // (πθ)^{-m}
  cplx r_odd() const;       // (−1)^n α^n/(1+α)^n · γ_odd
  cplx r() const { return r_even() * r_odd(); }
  cplx kappa_even() const;  // (πθ)^{-m}
  cplx kappa_odd() const;   // (iθ)^n (−1)^{n(n+1)/2} α^n/(1+α)^{2n}
  cplx kappa() const { return kappa_even() * kappa_odd(); }
  /// Coefficient β = (1+α)²/(αθ) of the odd exponent of the star kernel.
  double odd_beta() const { return (1 + alpha) * (1 + alpha) / (alpha * theta); }
  /// Odd block scale (1+α)²/(2α) of ω̃.
  double odd_scale() const { return (1 + alpha) * (1 + alpha) / (2 * alpha); }

  /// ω0 = [[0, 1],[−1, 0]] in the (x, w) block split.
  Eigen::MatrixXd omega0() const;
  Eigen::MatrixXd omega_tilde() const;
};

/// ω0(a, b) = a_x·b_w − a_w·b_x.
double omega0(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace superstar
