#pragma once

#include <optional>

#include "superstar/superfunction.hpp"

namespace superstar {

enum class ScalarProductKind { SuperHermitian, HermitianPositive };

/// ∫dz f = ∫dx f_{1..n}(x). Plane-wave coefficients need the periodic box volume.
cplx berezin_integrate(const SuperFunction& f, std::optional<double> box_volume = std::nullopt);

/// (⋆f)_{∁I} = ε(I,∁I) f_I.
SuperFunction hodge(const SuperFunction& f);
Grassmann hodge(const Grassmann& g, int n);
/// Sign s with ⋆⋆ξ^I = s ξ^I, read off from the computed Hodge map (|I| = k).
int hodge_square_sign(int n, int k);

/// SuperHermitian: Σ_I ε(I,∁I) ∫ conj(f_I) g_{∁I}; HermitianPositive: Σ_I ∫ conj(f_I) g_I.
cplx scalar_product(ScalarProductKind kind, const SuperFunction& f, const SuperFunction& g,
                    std::optional<double> box_volume = std::nullopt);

struct SupNorm {
  double value;        // best estimate of Σ_I ‖f_I‖_∞
  double upper_bound;  // Σ of per-term bounds
  bool exact;          // value is known to equal the true norm
};

SupNorm sup_norm(const SuperFunction& f, int samples = 4096);

}  // namespace superstar
