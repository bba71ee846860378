#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <numbers>

#include "superstar/oscillatory.hpp"
#include "superstar/quadrature.hpp"

using namespace superstar;
constexpr double kPi = std::numbers::pi;

TEST_CASE("quadrature rules") {
  auto gl = gauss_legendre_panels(-1.0, 2.0, 3);
  double s = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 6);
  CHECK(s == doctest::Approx((std::pow(2.0, 7) + 1) / 7).epsilon(1e-13));
  auto gh = gauss_hermite(30);
  double m0 = 0, m4 = 0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    double t = gh.nodes[i], e = std::exp(-t * t);
    m0 += gh.weights[i] * e;
    m4 += gh.weights[i] * e * std::pow(t, 4);
  }
  CHECK(m0 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(0.75 * std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("constant: ∫ e^{ixw} → 2π") {
  // ε-regularized closed form π/sqrt(ε² + 1/4) at ε = 0
  const double oracle = kPi / std::sqrt(0.25);
  auto one = SuperFunction::even(PlaneWaveSum::constant(2, 1.0), 0);
  auto r = osc_integrate(one, 4);
  CHECK(std::abs(r.value - oracle) < 1e-6);
  CHECK(r.k_residual < 1e-6);
}

TEST_CASE("bounded plane waves are k-stable and match the delta-function value") {
  // ∫ e^{ixw} e^{i(ax+bw)} = 2π e^{−iab}
  PlaneWaveSum f(2, {{{0.5, -0.3}, cplx(1.0, 0.5)}, {{1.0, 0.0}, 0.5}, {{-1.0, 0.0}, 0.5}});
  cplx oracle = cplx(1.0, 0.5) * 2.0 * kPi * std::polar(1.0, 0.15) + 2.0 * kPi;
  auto sf = SuperFunction::monomial(f, 1, 1);
  auto r = osc_integrate(sf, 4);
  CHECK(r.k_residual < 1e-6);
  CHECK(std::abs(r.value - oracle) < 1e-6);
}

TEST_CASE("integrable input matches plain quadrature") {
  GaussianSum g = GaussianSum::isotropic(2, 1.2, {0.3, -0.4}, cplx(0.8, 0.1));
  // plain trapezoid on the damped integrand
  const int N = 400;
  const double L = 12, h = 2 * L / N;
  cplx plain{};
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double x = -L + a * h, w = -L + b * h;
      plain += std::polar(1.0, x * w) * g.eval({x, w});
    }
  plain *= h * h;
  for (int k : {0, 2, 4}) CHECK(std::abs(osc_integrate_even(g, k) - plain) < 1e-8);
}
