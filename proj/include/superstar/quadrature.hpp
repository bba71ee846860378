#pragma once

#include <vector>

namespace superstar {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Legendre rule on [a, b] split into `panels` equal panels of 20 nodes each.
QuadRule gauss_legendre_panels(double a, double b, int panels);

/// Gauss–Hermite nodes t_i with modified weights W_i = 1/(n ψ_{n−1}(t_i)²), so that
/// Σ W_i g(t_i) ≈ ∫ g(t) dt directly for g = e^{−t²}·poly.
QuadRule gauss_hermite(int n);

/// Normalized Hermite functions ψ_0..ψ_{nmax} at t (ψ_k(t) = H_k(t)e^{−t²/2}/sqrt(2^k k! sqrt(π))).
std::vector<double> hermite_functions(int nmax, double t);

}  // namespace superstar
