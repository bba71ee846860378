#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "superstar/berezin.hpp"
#include "superstar/starprod.hpp"

using namespace superstar;
constexpr double kPi = std::numbers::pi;

namespace {

// Minimal Grassmann algebra on explicit generator lists, independent of the library.
using Word = std::vector<int>;
using Poly = std::map<Word, cplx>;

int sort_word(Word& w) {
  int s = 1;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j + 1 < w.size() - i; ++j)
      if (w[j] > w[j + 1]) {
        std::swap(w[j], w[j + 1]);
        s = -s;
      }
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == w[i + 1]) return 0;
  return s;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      int s = sort_word(w);
      if (s) r[w] += double(s) * ca * cb;
    }
  return r;
}

Poly poly_exp(const Poly& x) {
  Poly r{{Word{}, 1.0}}, term{{Word{}, 1.0}};
  for (int k = 1; k < 20; ++k) {
    term = mul(term, x);
    for (auto& [w, c] : term) c /= double(k);
    bool any = false;
    for (const auto& [w, c] : term)
      if (std::abs(c) > 0) {
        r[w] += c;
        any = true;
      }
    if (!any) break;
  }
  return r;
}

// Integrate out `block` (ascending) by moving it to the far left.
Poly integrate(const Poly& a, const Word& block) {
  Poly r;
  for (const auto& [w, c] : a) {
    if (!std::all_of(block.begin(), block.end(), [&](int g) { return std::count(w.begin(), w.end(), g) == 1; }))
      continue;
    Word order = block, rest;
    for (int g : w)
      if (!std::count(block.begin(), block.end(), g)) rest.push_back(g);
    order.insert(order.end(), rest.begin(), rest.end());
    // sign of the permutation taking w (sorted) to `order`
    Word tmp = order;
    int s = sort_word(tmp);
    r[rest] += double(s) * c;
  }
  return r;
}

cplx odd_oracle(int n, double theta, double alpha, Mask I, Mask J, Mask K) {
  const double beta = (1 + alpha) * (1 + alpha) / (alpha * theta);
  Poly x;
  for (int i = 0; i < n; ++i) {
    x[{i, n + i}] += cplx(0, -beta);
    x[{n + i, 2 * n + i}] += cplx(0, -beta);
    x[{i, 2 * n + i}] += cplx(0, beta);  // ξ2ξ = −ξξ2
  }
  Poly e = poly_exp(x);
  Word wi, wj, b1, b2, wk;
  for (int i = 0; i < n; ++i) {
    if (I >> i & 1) wi.push_back(n + i);
    if (J >> i & 1) wj.push_back(2 * n + i);
    if (K >> i & 1) wk.push_back(i);
    b1.push_back(n + i);
    b2.push_back(2 * n + i);
  }
  Poly r = integrate(integrate(mul(mul(Poly{{wi, 1.0}}, Poly{{wj, 1.0}}), e), b2), b1);
  cplx kappa = std::pow(cplx(0, theta), n) * (n * (n + 1) / 2 % 2 ? -1.0 : 1.0) * std::pow(alpha, n) /
               std::pow(1 + alpha, 2 * n);
  auto it = r.find(wk);
  return it == r.end() ? cplx{} : kappa * it->second;
}

cplx eval_term(const GaussianTerm& t, double x, double w) {
  Eigen::Vector2cd z(x, w);
  return t.c * std::exp(-0.5 * (z.transpose() * t.A * z)(0) + (z.transpose() * t.b)(0));
}

// Trapezoid evaluation of the defining double integral on R^2 with the kernel written literally.
cplx moyal_oracle(double theta, const GaussianTerm& f, const GaussianTerm& g, double x, double w, int N,
                  double L) {
  const double h = 2 * L / N;
  std::vector<double> s(N);
  for (int i = 0; i < N; ++i) s[i] = -L + i * h;
  auto E = [&](double u, double v) { return std::polar(1.0, 2.0 / theta * u * v); };
  std::vector<cplx> F(N * N), G(N * N), P(N * N), Ex(N), Ew(N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      F[a * N + b] = eval_term(f, s[a], s[b]);
      G[a * N + b] = eval_term(g, s[a], s[b]);
      P[a * N + b] = E(s[a], s[b]);
    }
  for (int i = 0; i < N; ++i) {
    Ex[i] = E(x, s[i]);  // e^{(2i/θ) x·w_i}
    Ew[i] = E(s[i], w);  // e^{(2i/θ) x_i·w}
  }
  // phase = (2/θ)[(x2−x)w1 + (x−x1)w2 + (x1−x2)w]
  cplx sum{};
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      cplx fa = F[a * N + b] * std::conj(Ex[b]) * Ew[a];
      if (std::abs(fa) < 1e-300) continue;
      cplx inner{};
      for (int c = 0; c < N; ++c) {
        cplx gc = P[c * N + b] * std::conj(Ew[c]);
        for (int d = 0; d < N; ++d) inner += G[c * N + d] * gc * Ex[d] * std::conj(P[a * N + d]);
      }
      sum += fa * inner;
    }
  return sum * std::pow(h, 4) / std::pow(kPi * theta, 2);
}

GaussianTerm term(double a11, double a12, double a22, cplx b1, cplx b2, cplx c) {
  GaussianTerm t;
  t.A.resize(2, 2);
  t.A << a11, a12, a12, a22;
  t.b.resize(2);
  t.b << b1, b2;
  t.c = c;
  return t;
}

SuperFunction random_super(std::mt19937& rng, int n, double width = 1.0) {
  std::normal_distribution<double> nd;
  SuperFunction f(2, n);
  for (Mask I = 0; I < (Mask{1} << n); ++I)
    f.set(I, GaussianSum::isotropic(2, width * (0.8 + 0.2 * std::abs(nd(rng))), {0.4 * nd(rng), 0.4 * nd(rng)},
                                    cplx(nd(rng), nd(rng))));
  return f;
}

std::vector<RVec> sample_points(std::mt19937& rng, int count, double r = 1.5) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<RVec> p;
  for (int i = 0; i < count; ++i) p.push_back({u(rng), u(rng)});
  return p;
}

SuperFunction unit(int n) { return SuperFunction::even(GaussianSum::plane_wave({0.0, 0.0}), n); }

}  // namespace

TEST_CASE("odd structure constants match the literal Berezin expansion") {
  for (int n = 1; n <= 3; ++n)
    for (double alpha : {0.5, 2.0}) {
      DeformationParams p(0.7, alpha, 2, n);
      auto tab = odd_star_table(p);
      double err = 0;
      for (Mask I = 0; I < (Mask{1} << n); ++I)
        for (Mask J = 0; J < (Mask{1} << n); ++J)
          for (Mask K = 0; K < (Mask{1} << n); ++K)
            err = std::max(err, std::abs(tab->at(I, J, K) - odd_oracle(n, 0.7, alpha, I, J, K)));
      CHECK(err < 1e-12);
    }
}

TEST_CASE("odd table: unit, associativity, Clifford relations") {
  for (int n = 1; n <= 4; ++n) {
    DeformationParams p(0.9, 0.6, 2, n);
    auto tab = odd_star_table(p);
    const Mask D = Mask{1} << n;
    for (Mask I = 0; I < D; ++I) {
      CHECK(distance(tab->product(0, I), Grassmann::monomial(n, I)) < 1e-12);
      CHECK(distance(tab->product(I, 0), Grassmann::monomial(n, I)) < 1e-12);
    }
    double assoc = 0;
    for (Mask I = 0; I < D; ++I)
      for (Mask J = 0; J < D; ++J)
        for (Mask K = 0; K < D; ++K) {
          Grassmann l = tab->star(tab->product(I, J), Grassmann::monomial(n, K));
          Grassmann r = tab->star(Grassmann::monomial(n, I), tab->product(J, K));
          assoc = std::max(assoc, distance(l, r));
        }
    CHECK(assoc < 1e-12);
    const cplx c = tab->clifford_scalar();
    CHECK(std::abs(c - cplx(0, 0.9 * 0.6 / (1.6 * 1.6))) < 1e-14);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Grassmann a = tab->product(Mask{1} << i, Mask{1} << j) + tab->product(Mask{1} << j, Mask{1} << i);
        CHECK(distance(a, Grassmann::scalar(n, i == j ? 2.0 * c : cplx{})) < 1e-13);
      }
  }
}

TEST_CASE("Gaussian closed form agrees with brute-force quadrature of the kernel") {
  const double theta = 1.5;
  GaussianTerm f = term(1.2, 0.3, 0.8, cplx(0.2, 0.5), cplx(-0.3, 0.1), cplx(1.0, 0.5));
  GaussianTerm g = term(0.9, -0.2, 1.1, cplx(-0.1, -0.4), cplx(0.3, 0.2), cplx(0.7, -0.2));
  GaussianTerm fg = moyal_gaussian(theta, f, g);
  for (auto [x, w] : {std::pair{0.0, 0.0}, {0.4, -0.3}, {-0.7, 0.5}}) {
    cplx ref = moyal_oracle(theta, f, g, x, w, 64, 8.0);
    CHECK(std::abs(eval_term(fg, x, w) - ref) < 1e-9);
  }
}

TEST_CASE("plane-wave phase: fast table agrees with the regularized direct evaluator") {
  CHECK(moyal_phase_sign() == 1);
  DeformationParams p(0.8, 0.5, 2, 0);
  std::vector<RVec> ks = {{1.0, 0.0}, {0.0, 1.0}, {0.5, -1.5}, {-1.0, 2.0}};
  auto pts = std::vector<RVec>{{0.0, 0.0}, {0.3, -1.1}, {2.0, 0.7}};
  for (const auto& k : ks)
    for (const auto& l : ks) {
      auto ek = SuperFunction::even(PlaneWaveSum::wave(k), 0);
      auto el = SuperFunction::even(PlaneWaveSum::wave(l), 0);
      auto fast = star_fast(p, ek, el);
      auto direct = star_direct(p, ek, el);
      CHECK(max_distance(to_gaussian(fast), direct.value, pts) < 1e-8);
      // ratio e_k⋆e_l / e_l⋆e_k = exp(iθω0(k,l)), antisymmetric in (k, l)
      cplx r = star_fast(p, ek, el).eval({0.0, 0.0}).body() / star_fast(p, el, ek).eval({0.0, 0.0}).body();
      CHECK(std::abs(r - std::polar(1.0, 0.8 * omega0(k, l))) < 1e-12);
    }
  {
    DeformationParams q(0.8, 0.5, 2, 1);
    SuperFunction a(2, 1), b(2, 1);
    a.set(0, PlaneWaveSum::wave({1.0, -0.5}));
    a.set(1, PlaneWaveSum::wave({1.0, -0.5}));
    b.set(0, PlaneWaveSum::wave({0.3, 2.0}, cplx(0.5, 1.0)));
    b.set(1, PlaneWaveSum::wave({-1.0, 0.0}, 2.0));
    auto direct = star_direct(q, a, b);
    CHECK(max_distance(to_gaussian(star_fast(q, a, b)), direct.value, pts) < 1e-8);
    CHECK(direct.residual_estimate < 1e-6);
  }
  auto e0 = SuperFunction::even(PlaneWaveSum::constant(2, 1.0), 0);
  auto ek = SuperFunction::even(PlaneWaveSum::wave({1.0, -2.0}), 0);
  CHECK(max_distance(star_fast(p, ek, e0), ek, pts) < 1e-14);
}

TEST_CASE("unit and associativity on Gaussian superfunctions") {
  std::mt19937 rng(11);
  for (int n = 0; n <= 2; ++n) {
    DeformationParams p(0.8, 0.7, 2, n);
    auto pts = sample_points(rng, 6);
    auto f1 = random_super(rng, n), f2 = random_super(rng, n), f3 = random_super(rng, n);
    CHECK(max_distance(star(p, unit(n), f1), f1, pts) < 1e-8);
    CHECK(max_distance(star(p, f1, unit(n)), f1, pts) < 1e-8);
    CHECK(max_distance(star_direct(p, unit(n), f1).value, f1, pts) < 1e-8);
    auto l = star(p, star(p, f1, f2), f3), r = star(p, f1, star(p, f2, f3));
    CHECK(max_distance(l, r, pts) < 1e-6);
  }
}

TEST_CASE("grid evaluators agree with each other and with the closed form") {
  const double theta = 1.0;
  GridSpec spec{8.0, 128};
  auto f = GaussianSum::isotropic(2, 1.0, {0.3, -0.2}, cplx(1.0, 0.2));
  auto g = GaussianSum::isotropic(2, 0.9, {-0.4, 0.1}, cplx(0.5, -0.3));
  GridFn fg = coeff_convert(f, spec).grid();
  GridFn gg = coeff_convert(g, spec).grid();
  GridFn fast = moyal_grid_fast(theta, fg, gg);
  GridFn direct = moyal_grid_direct(theta, fg, gg);
  GaussianTerm exact = moyal_gaussian(theta, f.terms()[0], g.terms()[0]);
  double e1 = 0, e2 = 0;
  for (std::size_t i = 0; i < fast.size(); ++i) {
    RVec z = fast.point(i);
    e1 = std::max(e1, std::abs(fast.samples()[i] - direct.samples()[i]));
    e2 = std::max(e2, std::abs(fast.samples()[i] - eval_term(exact, z[0], z[1])));
  }
  CHECK(e1 < 1e-9);
  CHECK(e2 < 1e-9);

  DeformationParams p(theta, 0.5, 2, 1);
  std::mt19937 rng(4);
  auto s1 = random_super(rng, 1), s2 = random_super(rng, 1);
  auto ref = star(p, s1, s2);
  auto gridded = star_fast(p, to_grid(s1, spec), to_grid(s2, spec));
  CHECK(max_distance(ref, gridded, sample_points(rng, 5)) < 1e-8);
}

TEST_CASE("affine star product is exact") {
  const double theta = 0.6;
  GridSpec spec{8.0, 48};
  auto f = GaussianSum::isotropic(2, 1.0, {0.2, 0.1});
  GridFn fg = coeff_convert(f, spec).grid();
  // x ⋆ f − f ⋆ x = −iθ ∂_w f under the oracle-derived phase
  GridFn l = moyal_affine(theta, 0.0, {1.0, 0.0}, fg, true);
  GridFn r = moyal_affine(theta, 0.0, {1.0, 0.0}, fg, false);
  GridFn dw = fg.derivative(1);
  double err = 0;
  for (std::size_t i = 0; i < fg.size(); ++i)
    err = std::max(err, std::abs(l.samples()[i] - r.samples()[i] + cplx(0, theta) * dw.samples()[i]));
  CHECK(err < 1e-9);
}

TEST_CASE("commutative limit") {
  std::mt19937 rng(5);
  auto pts = sample_points(rng, 5, 1.0);
  {
    DeformationParams p(1.0, 0.5, 2, 0);
    auto f1 = random_super(rng, 0), f2 = random_super(rng, 0);
    auto rep = commutative_limit_check(p, f1, f2, {0.1, 0.05, 0.025, 0.0125}, pts);
    CHECK(rep.stated_prefactor == doctest::Approx(1.0));
    CHECK(rep.product_rate == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.bracket_rate == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rep.product_limit_discrepancy < 1e-6);
    CHECK(rep.bracket_limit_discrepancy < 1e-5);
  }
  {
    DeformationParams p(1.0, 0.5, 2, 1);
    auto f1 = parity_part(random_super(rng, 1), 1), f2 = parity_part(random_super(rng, 1), 1);
    auto rep = commutative_limit_check(p, f1, f2, {0.1, 0.05, 0.025, 0.0125}, pts);
    CHECK(std::abs(rep.fitted_prefactor - 1.0) < 1e-6);
    CHECK(rep.stated_prefactor == doctest::Approx(1.0 / (1.5 * 0.5)));
    CHECK(rep.bracket_limit_discrepancy > 1e-2);
  }
  // Poisson expression for ξ, ξ: i·2α/(1+α)²
  DeformationParams p(1.0, 0.5, 2, 1);
  auto xi = SuperFunction::monomial(PlaneWaveSum::constant(2, 1.0), 1, 1);
  auto pe = poisson_expression(p, xi, xi, {0.0, 0.0}, 1.0);
  CHECK(std::abs(pe.body() - cplx(0, 2 * 0.5 / 2.25)) < 1e-14);
}

TEST_CASE("tracial property and conjugation law") {
  std::mt19937 rng(6);
  for (int n = 0; n <= 2; ++n) {
    DeformationParams p(0.9, 0.5, 2, n);
    auto f1 = random_super(rng, n), f2 = random_super(rng, n);
    auto rep = tracial_check(p, f1, f2, sample_points(rng, 6));
    CHECK(rep.trace_residual < 1e-8);
    CHECK(rep.conj_residual < 1e-8);
  }
}

TEST_CASE("affine symplectic maps are symmetries") {
  std::mt19937 rng(7);
  const double a = 0.4;
  for (int n = 0; n <= 2; ++n) {
    DeformationParams p(0.9, 0.5, 2, n);
    AffineSuperMap phi;
    phi.S.resize(2, 2);
    phi.S << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    phi.S = phi.S * (Eigen::MatrixXd(2, 2) << 2.0, 0.0, 0.0, 0.5).finished();
    phi.R = Eigen::MatrixXd::Identity(n, n);
    if (n == 1) phi.R(0, 0) = -1;
    if (n == 2) phi.R << std::cos(1.1), std::sin(1.1), -std::sin(1.1), std::cos(1.1);
    phi.t = {0.3, -0.2};
    auto f1 = random_super(rng, n), f2 = random_super(rng, n);
    auto rep = symmetry_check(p, phi, f1, f2, sample_points(rng, 5));
    CHECK(rep.precondition_ok);
    CHECK(rep.residual < 1e-8);
    auto tr = symmetry_check(p, AffineSuperMap::translation({1.0, -0.5}, n), f1, f2, sample_points(rng, 5));
    CHECK(tr.residual < 1e-8);
    AffineSuperMap bad = phi;
    bad.S(0, 0) *= 1.5;
    CHECK_FALSE(symmetry_check(p, bad, f1, f2, {}).precondition_ok);
  }
}
