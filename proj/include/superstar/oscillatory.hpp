#pragma once

#include "superstar/superfunction.hpp"

namespace superstar {

struct OscOptions {
  double radius = 10.0;      // quadrature box [−R, R]^2
  double tolerance = 1e-6;   // allowed |I_k − I_{k+1}|; ≤ 0 disables the check
};

struct OscResult {
  cplx value;       // with k applications of O
  cplx next;        // with k + 1
  double k_residual;
};

/// Oscillating integral ∫dz dξ e^{iω0(x,w)} f(z, ξ) for m = 2, evaluated as ∫ e^{iω0}(O^k f) with
/// O f = (1 − Δ)(f/(1 + x² + w²)). Derivatives come from exact Taylor jets of the coefficient.
OscResult osc_integrate(const SuperFunction& f, int k, const OscOptions& opts = {});

/// Same for a plain even coefficient.
cplx osc_integrate_even(const CoeffFn& f, int k, double radius = 10.0);

}  // namespace superstar
