#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "superstar/error.hpp"
#include "superstar/superfunction.hpp"

using namespace superstar;
constexpr double kPi = std::numbers::pi;

TEST_CASE("plane-wave basics") {
  CoeffFn one = PlaneWaveSum::constant(2, 1.0);
  CHECK(std::abs(one.eval({3.1, -7.0}) - 1.0) < 1e-15);
  auto s = coeff_add(PlaneWaveSum::wave({1.0, 2.0}, 2.0), PlaneWaveSum::wave({1.0, 2.0}, cplx(0, 1)));
  REQUIRE(s.plane_waves().terms().size() == 1);
  CHECK(s.plane_waves().terms()[0].a == cplx(2, 1));
}

TEST_CASE("conversion to grid reproduces analytic samples") {
  const double L = 8.0;
  const int N = 32;
  CoeffFn pw = coeff_add(PlaneWaveSum::wave({kPi / L * 3, -kPi / L}, cplx(0.5, 1)), PlaneWaveSum::constant(2, 2.0));
  CoeffFn g = coeff_convert(pw, {L, N});
  for (std::size_t i = 0; i < g.grid().size(); i += 37) {
    auto z = g.grid().point(i);
    CHECK(std::abs(g.grid().samples()[i] - pw.eval(z)) < 1e-12);
  }
  CoeffFn ga = GaussianSum::isotropic(2, 1.0, {0.5, -0.3});
  CoeffFn gg = coeff_convert(ga, {L, 64});
  for (std::size_t i = 0; i < gg.grid().size(); i += 101)
    CHECK(std::abs(gg.grid().samples()[i] - ga.eval(gg.grid().point(i))) < 1e-12);
  // Trigonometric interpolation off the nodes.
  RVec z = {0.123, -0.456};
  CHECK(std::abs(gg.eval(z) - ga.eval(z)) < 1e-10);
}

TEST_CASE("aliasing violations") {
  const double L = 4.0;
  const int N = 16;  // Nyquist πN/(2L) = 2π
  CHECK_THROWS_AS(coeff_convert(PlaneWaveSum::wave({2 * kPi, 0.0}), {L, N}), Error);
  CHECK_NOTHROW(coeff_convert(PlaneWaveSum::wave({kPi * 7 / 4, 0.0}), {L, N}));
  CHECK_THROWS_AS(coeff_convert(GaussianSum::isotropic(2, 0.05, {0, 0}), {L, N}), Error);
  CHECK_THROWS_AS(coeff_convert(GaussianSum::isotropic(2, 3.0, {0, 0}), {L, N}), Error);
}

TEST_CASE("spectral derivative matches analytic gradient") {
  CoeffFn ga = GaussianSum::gaussian((Eigen::MatrixXd(2, 2) << 1.2, 0.3, 0.3, 0.8).finished(), {0.2, 0.1}, {1.0, -0.5});
  CoeffFn g = coeff_convert(ga, {10.0, 96});
  GridFn dx = g.grid().derivative(0), dw = g.grid().derivative(1);
  for (std::size_t i = 0; i < dx.size(); i += 331) {
    auto z = dx.point(i);
    auto grad = ga.gradient(z);
    CHECK(std::abs(dx.samples()[i] - grad[0]) < 1e-9);
    CHECK(std::abs(dw.samples()[i] - grad[1]) < 1e-9);
  }
}

TEST_CASE("Gaussian integral against trapezoid quadrature") {
  Eigen::MatrixXcd A(2, 2);
  A << cplx(1.0, 0.4), cplx(0.2, -0.1), cplx(0.2, -0.1), cplx(0.7, 0.3);
  Eigen::VectorXcd b(2);
  b << cplx(0.3, 1.0), cplx(-0.2, 0.5);
  CoeffFn f = GaussianSum(2, {{cplx(0.8, -0.2), A, b}});
  cplx closed = coeff_integral(f);
  const double L = 14.0;
  const int N = 400;
  const double h = 2 * L / N;
  cplx quad{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) quad += f.eval({-L + i * h, -L + j * h});
  quad *= h * h;
  CHECK(std::abs(closed - quad) < 1e-10);
}

TEST_CASE("JSON round trip for all backends") {
  SuperFunction f(2, 2);
  f.set(0, PlaneWaveSum::wave({1.0, 2.0}, cplx(0.1, 0.2)));
  f.set(3, PlaneWaveSum::wave({-1.0, 0.5}, cplx(3, 0)));
  auto g = superfunction_from_json(to_json(f));
  CHECK(max_distance(f, g, {{0, 0}, {0.3, -1.1}}) == 0.0);

  SuperFunction h = SuperFunction::monomial(GaussianSum::isotropic(2, 0.7, {0.1, 0.2}), 1, 1);
  auto h2 = superfunction_from_json(to_json(h));
  CHECK(max_distance(h, h2, {{0.4, 0.1}}) == 0.0);

  auto gr = to_grid(h, {6.0, 64});
  auto gr2 = superfunction_from_json(to_json(gr));
  CHECK(gr2.get(1)->grid().samples() == gr.get(1)->grid().samples());
  CHECK_THROWS_AS(superfunction_from_json(nlohmann::json::parse(R"({"m":2})")), Error);
}
