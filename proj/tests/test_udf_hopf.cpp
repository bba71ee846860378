#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "superstar/error.hpp"
#include "superstar/starprod.hpp"
#include "superstar/udf_hopf.hpp"

using namespace superstar;

namespace {

std::vector<RVec> lattice(int r) {
  std::vector<RVec> ks;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b) ks.push_back({double(a), double(b)});
  return ks;
}

std::vector<ModeTensor> span_of(const std::vector<RVec>& ks, int n) {
  std::vector<ModeTensor> s;
  for (const auto& k : ks)
    for (Mask I = 0; I < (Mask{1} << n); ++I) s.push_back(ModeTensor::basis(k, I, n));
  return s;
}

const std::vector<RVec> kSamples = {{0.0, 0.0}, {0.3, -1.1}, {2.5, 0.7}, {-4.0, 3.3}};

cplx oracle_phase(double theta, const RVec& k, const RVec& l) {
  // (e_{−k} ⋆ e_{−l})(0) straight from the plane-wave star product.
  DeformationParams p(theta, 1.0, 2, 0);
  SuperFunction a = SuperFunction::even(PlaneWaveSum::wave({-k[0], -k[1]}), 0);
  SuperFunction b = SuperFunction::even(PlaneWaveSum::wave({-l[0], -l[1]}), 0);
  return star_fast(p, a, b).eval({0.0, 0.0}).body();
}

/// Value of a rank-2 H tensor at (z1, z2), odd parts on 2n generators (ξ1 first).
Grassmann eval2(const ModeTensor& t, const RVec& y1, const RVec& y2) {
  const int n = t.n;
  Grassmann r(2 * n);
  for (const auto& [key, c] : t.terms) {
    double ph = 0.0;
    for (int i = 0; i < t.m; ++i) ph += key[0].k[i] * y1[i] + key[1].k[i] * y2[i];
    r += (c * std::polar(1.0, ph)) * Grassmann::monomial(2 * n, key[0].I | (key[1].I << n));
  }
  return r;
}

}  // namespace

TEST_CASE("translation action satisfies the axioms and C = 1") {
  for (int n : {0, 1, 2}) {
    GroupAction A = torus_translation(2, n);
    auto span = span_of(lattice(1), n);
    ActionReport r = validate_action(A, span, kSamples);
    CHECK(r.identity_residual < 1e-12);
    CHECK(r.group_law_residual < 1e-12);
    CHECK(r.automorphism_residual < 1e-12);
    CHECK(r.boundedness_constant == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_NOTHROW(require_valid(A, span, kSamples));
    auto bounds = smooth_vector_bounds(A, span.back(), 4);
    CHECK(bounds.size() == 5);
  }
}

TEST_CASE("negative controls violate the automorphism axiom") {
  auto span = span_of(lattice(1), 1);
  ActionReport nh = validate_action(non_homomorphic_action(2, 1), span, kSamples);
  CHECK(nh.group_law_residual < 1e-12);
  CHECK(nh.automorphism_residual > 0.5);
  CHECK_THROWS_AS(require_valid(non_homomorphic_action(2, 1), span, kSamples), Error);
  ActionReport rs = validate_action(rescaling_action(2, 1), span, kSamples);
  CHECK(rs.automorphism_residual > 0.5);
}

TEST_CASE("deformed product: unit, Weyl relation, odd generators") {
  for (double theta : {0.5, 1.0, 2.0}) {
    for (int n : {0, 1, 2}) {
      DeformationParams p(theta, 0.3, 2, n);
      GroupAction A = torus_translation(2, n);
      const ModeTensor one = ModeTensor::unit(2, n);
      for (const auto& b : span_of(lattice(1), n)) {
        CHECK(max_coeff_distance(deformed_product(p, A, one, b), b) < 1e-14);
        CHECK(max_coeff_distance(deformed_product(p, A, b, one), b) < 1e-14);
      }
      auto ks = lattice(1);
      for (const auto& k : ks)
        for (const auto& l : ks) {
          ModeTensor kl = deformed_product(p, A, ModeTensor::basis(k, 0, n), ModeTensor::basis(l, 0, n));
          REQUIRE(kl.terms.size() == 1);
          ModeTensor expect = ModeTensor::basis({k[0] + l[0], k[1] + l[1]}, 0, n, oracle_phase(theta, k, l));
          CHECK(max_coeff_distance(kl, expect) < 1e-13);
        }
      WeylReport w = weyl_check(p, A, ks);
      CHECK(w.modulus_residual < 1e-13);
      CHECK(w.relation_residual < 1e-13);
      CHECK(w.antisymmetry_residual < 1e-13);
      CHECK(w.bilinearity_residual < 1e-12);
      CHECK(w.unitarity_residual < 1e-13);
      CHECK(w.theta_formula_residual < 1e-12);

      if (n == 0) continue;
      const cplx c = odd_star_table(p)->clifford_scalar();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          ModeTensor ei = ModeTensor::basis({0, 0}, Mask{1} << i, n), ej = ModeTensor::basis({0, 0}, Mask{1} << j, n);
          ModeTensor ac = deformed_product(p, A, ei, ej) + deformed_product(p, A, ej, ei);
          CHECK(max_coeff_distance(ac, (i == j ? 2.0 * c : cplx{}) * one) < 1e-14);
        }
    }
  }
}

TEST_CASE("deformed product is associative on the span") {
  DeformationParams p(0.7, -0.5, 2, 2);
  GroupAction A = torus_translation(2, 2);
  auto span = span_of({{0, 0}, {1, 0}, {0, -1}}, 2);
  double worst = 0.0;
  for (const auto& a : span)
    for (const auto& b : span)
      for (const auto& c : span) {
        ModeTensor l = deformed_product(p, A, deformed_product(p, A, a, b), c);
        ModeTensor r = deformed_product(p, A, a, deformed_product(p, A, b, c));
        worst = std::max(worst, max_coeff_distance(l, r));
      }
  CHECK(worst < 1e-13);
}

TEST_CASE("twist implements the deformed product and is invertible") {
  DeformationParams p(1.3, 0.3, 2, 1);
  GroupAction A = torus_translation(2, 1);
  auto span = span_of(lattice(1), 1);
  const ModeTensor one = ModeTensor::unit(2, 1);
  for (const auto& a : span) {
    CHECK(max_coeff_distance(twist_apply(p, A, tensor_of(one, a)), tensor_of(one, a)) < 1e-14);
    for (const auto& b : span) {
      ModeTensor ab = tensor_of(a, b);
      ModeTensor f = twist_apply(p, A, ab);
      CHECK(max_coeff_distance(mu0(f), deformed_product(p, A, a, b)) < 1e-14);
      CHECK(max_coeff_distance(twist_apply(p, A, twist_inverse_apply(p, A, ab)), ab) < 1e-13);
      CHECK(max_coeff_distance(twist_inverse_apply(p, A, f), ab) < 1e-13);
    }
  }
  // On even plane waves F is the phase and F⁻¹ its conjugate.
  for (const auto& k : lattice(1))
    for (const auto& l : lattice(1)) {
      ModeTensor ab = tensor_of(ModeTensor::basis(k, 0, 1), ModeTensor::basis(l, 0, 1));
      cplx ph = oracle_phase(1.3, k, l);
      CHECK(max_coeff_distance(twist_apply(p, A, ab), ph * ab) < 1e-14);
      CHECK(max_coeff_distance(twist_inverse_apply(p, A, ab), std::conj(ph) * ab) < 1e-14);
    }
}

TEST_CASE("Hopf axioms on spans") {
  for (int n : {0, 1, 2}) {
    HopfReport r = hopf_check(span_of(lattice(1), n));
    CHECK(r.max() == 0.0);
  }
  // Δ against f(z1 + z2) with the odd coordinates as independent generators.
  const int n = 2;
  for (const auto& f : span_of({{1.5, -0.5}, {0, 2}}, n)) {
    const auto& [mo, c] = *f.terms.begin();
    ModeTensor d = hopf_coproduct(f);
    RVec y1 = {0.4, -0.9}, y2 = {1.7, 0.2};
    Grassmann expect = Grassmann::scalar(2 * n, c * std::polar(1.0, mo[0].k[0] * (y1[0] + y2[0]) +
                                                                          mo[0].k[1] * (y1[1] + y2[1])));
    for (int i = 0; i < n; ++i)
      if (mo[0].I >> i & 1) expect = expect * (Grassmann::generator(2 * n, i) + Grassmann::generator(2 * n, n + i));
    CHECK(distance(eval2(d, y1, y2), expect) < 1e-14);
    CHECK(hopf_counit_value(f) == (mo[0].I == 0 ? c : cplx{}));
  }
  ModeTensor s = hopf_antipode(ModeTensor::basis({1, 2}, 1, 1));
  CHECK(max_coeff_distance(s, ModeTensor::basis({-1, -2}, 1, 1, -1.0)) == 0.0);
}

TEST_CASE("comodule-algebra axioms and equivariance of both products") {
  for (int n : {0, 1, 2}) {
    DeformationParams p(1.0, 0.3, 2, n);
    auto span = span_of(n == 2 ? std::vector<RVec>{{0, 0}, {1, -1}} : lattice(1), n);
    ComoduleReport r = comodule_check(p, torus_translation(2, n), span);
    CHECK(r.coassociativity < 1e-12);
    CHECK(r.counit < 1e-12);
    CHECK(r.product_equivariance < 1e-12);
    CHECK(r.deformed_equivariance < 1e-9);
  }
  DeformationParams p(1.0, 0.3, 2, 1);
  ComoduleReport bad = comodule_check(p, rescaling_action(2, 1), span_of(lattice(1), 1));
  CHECK(bad.coassociativity < 1e-12);
  CHECK(bad.deformed_equivariance > 0.5);
}

TEST_CASE("deformed norm and multiplicativity of Xi") {
  const std::vector<RVec> pts = {{0.0, 0.0}, {1.0, 2.0}, {-2.2, 0.4}};
  for (int n : {0, 1}) {
    DeformationParams p(1.0, 0.3, 2, n);
    GroupAction A = torus_translation(2, n);
    NormEstimate e1 = deformed_norm_estimate(p, A, ModeTensor::unit(2, n), 16, pts, 1e-3);
    CHECK(e1.converged);
    MESSAGE("n=" << n << " |Xi(1)| = " << e1.value << " +- " << e1.error);
    for (const auto& k : std::vector<RVec>{{1, 0}, {0, 1}, {1, -1}}) {
      NormEstimate ek = deformed_norm_estimate(p, A, ModeTensor::basis(k, 0, n), 16, pts, 1e-3);
      CHECK(ek.converged);
      CHECK(ek.value == doctest::Approx(e1.value).epsilon(1e-3));
    }
    ModeTensor a = ModeTensor::basis({1, 0}, 0, n) + ModeTensor::basis({0, -1}, 0, n, 0.5);
    ModeTensor b = ModeTensor::basis({0, 1}, n ? 1 : 0, n) + 0.3 * ModeTensor::unit(2, n);
    double r16 = xi_multiplicativity(p, A, a, b, 16, pts);
    double r32 = xi_multiplicativity(p, A, a, b, 32, pts);
    MESSAGE("n=" << n << " Xi multiplicativity 16: " << r16 << " 32: " << r32);
    CHECK(r32 < 1e-4);
  }
}
