#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "superstar/berezin.hpp"

using namespace superstar;
constexpr double kPi = std::numbers::pi;

namespace {

// Unit-mass Gaussian on R^1 and the unit-L² one.
CoeffFn unit_mass() { return GaussianSum::isotropic(1, 1.0, {0.0}, 1.0 / std::sqrt(2 * kPi)); }
CoeffFn unit_l2() { return GaussianSum::isotropic(1, 1.0, {0.0}, std::pow(kPi, -0.25)); }

SuperFunction random_gauss(std::mt19937& rng, int n) {
  std::normal_distribution<double> nd;
  SuperFunction f(1, n);
  for (Mask I = 0; I < (Mask{1} << n); ++I)
    f.set(I, GaussianSum::isotropic(1, 0.6 + 0.3 * std::abs(nd(rng)), {0.5 * nd(rng)}, cplx(nd(rng), nd(rng))));
  return f;
}

// Independent oracle for ⋆⋆ on monomials: count sign via explicit reordering.
int brute_hodge_square(int n, Mask I) {
  Mask full = (Mask{1} << n) - 1, C = full & ~I;
  auto perm_sign = [](Mask a, Mask b) {
    int s = 0;
    for (int i = 0; i < 64; ++i)
      if (a >> i & 1)
        for (int j = 0; j < i; ++j)
          if (b >> j & 1) ++s;
    return s % 2 ? -1 : 1;
  };
  return perm_sign(I, C) * perm_sign(C, I);
}

}  // namespace

TEST_CASE("Berezin integral picks the top component") {
  CHECK(std::abs(berezin_integrate(SuperFunction::monomial(unit_mass(), 1, 1)) - 1.0) < 1e-12);
  CHECK(berezin_integrate(SuperFunction::even(unit_mass(), 1)) == cplx{});
  SuperFunction c = SuperFunction::monomial(PlaneWaveSum::constant(2, cplx(2.0, 1.0)), 2, 3);
  CHECK(std::abs(berezin_integrate(c, 9.0) - cplx(18.0, 9.0)) < 1e-14);
}

TEST_CASE("Hodge examples and square table") {
  SuperFunction f(1, 1);
  f.set(0, PlaneWaveSum::wave({1.0}, 2.0));
  f.set(1, PlaneWaveSum::wave({2.0}, 3.0));
  auto h = hodge(f);
  CHECK(h.get(1)->plane_waves().terms()[0].a == 2.0);
  CHECK(h.get(0)->plane_waves().terms()[0].a == 3.0);
  auto h2 = hodge(SuperFunction::monomial(PlaneWaveSum::constant(1, 1.0), 2, 1));
  REQUIRE(h2.get(2));
  CHECK(h2.get(2)->plane_waves().terms()[0].a == 1.0);
  for (int n = 0; n <= 4; ++n)
    for (Mask I = 0; I < (Mask{1} << n); ++I) {
      Grassmann twice = hodge(hodge(Grassmann::monomial(n, I), n), n);
      CHECK(twice.coeff(I) == cplx(brute_hodge_square(n, I)));
      CHECK(brute_hodge_square(n, I) == hodge_square_sign(n, popcount(I)));
    }
}

TEST_CASE("scalar products") {
  SuperFunction f(1, 1);
  f.set(0, unit_l2());
  f.set(1, unit_l2());
  CHECK(std::abs(scalar_product(ScalarProductKind::HermitianPositive, f, f) - 2.0) < 1e-12);
  SuperFunction e = SuperFunction::even(unit_l2(), 1);
  CHECK(scalar_product(ScalarProductKind::SuperHermitian, e, e) == cplx{});

  std::mt19937 rng(7);
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      auto a = random_gauss(rng, n), b = random_gauss(rng, n);
      cplx lhs = scalar_product(ScalarProductKind::HermitianPositive, a, b);
      cplx rhs = scalar_product(ScalarProductKind::SuperHermitian, a, hodge(b));
      CHECK(std::abs(lhs - rhs) < 1e-12);
      cplx aa = scalar_product(ScalarProductKind::HermitianPositive, a, a);
      CHECK(aa.real() > 0.0);
      CHECK(std::abs(aa.imag()) < 1e-12);
      cplx hh = scalar_product(ScalarProductKind::HermitianPositive, hodge(a), hodge(a));
      CHECK(std::abs(hh - aa) < 1e-12);
    }
}

TEST_CASE("graded symmetry of the integrated product") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2;
    auto a = random_gauss(rng, n), b = random_gauss(rng, n);
    for (int pa = 0; pa < 2; ++pa)
      for (int pb = 0; pb < 2; ++pb) {
        auto fa = parity_part(a, pa), fb = parity_part(b, pb);
        cplx x = berezin_integrate(super_mul(fa, fb));
        cplx y = berezin_integrate(super_mul(fb, fa));
        CHECK(std::abs(x - ((pa * pb) ? -y : y)) < 1e-12);
      }
  }
}

TEST_CASE("sup norm") {
  CHECK(sup_norm(SuperFunction::even(PlaneWaveSum::constant(1, cplx(3, 4)), 0)).value == doctest::Approx(5.0));
  SuperFunction s(1, 2);
  s.set(1, PlaneWaveSum::constant(1, 1.0));
  s.set(2, PlaneWaveSum::constant(1, 1.0));
  CHECK(sup_norm(s).value == doctest::Approx(2.0));
  SuperFunction w(1, 1);
  w.set(0, PlaneWaveSum::wave({1.3}));
  w.set(1, PlaneWaveSum::wave({1.3}));
  auto nw = sup_norm(w);
  CHECK(nw.value == doctest::Approx(2.0));
  CHECK(nw.exact);
  auto g = sup_norm(SuperFunction::even(GaussianSum::isotropic(1, 1.0, {2.0}, 3.0), 0));
  CHECK(g.value == doctest::Approx(3.0));
}
