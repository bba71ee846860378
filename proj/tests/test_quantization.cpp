#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "superstar/starprod.hpp"
#include "superstar/supercstar.hpp"

using namespace superstar;
constexpr double kPi = std::numbers::pi;

namespace {

// Hermite functions from the standard-library polynomials.
double h_oracle(int k, double x, double ell) {
  double norm = 1.0 / std::sqrt(std::pow(2.0, k) * std::tgamma(k + 1.0) * std::sqrt(kPi) * ell);
  return norm * std::hermite(k, x / ell) * std::exp(-x * x / (2 * ell * ell));
}

GroupElement lambda_point(int n, int aux, int offset, double x, double w, double a, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  GroupElement g = group_identity(2, n, aux);
  g.x = {x};
  g.w = {w};
  g.a = Grassmann::scalar(aux, a);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.xi[i].add_term(Mask{1} << (offset + j), nd(rng));
  return g;
}

Eigen::MatrixXcd eye(std::size_t d) { return Eigen::MatrixXcd::Identity(d, d); }

}  // namespace

TEST_CASE("Hermite matrix elements") {
  const double ell = std::sqrt(0.7);
  CHECK((shift_modulate(32, ell, 0, 0, 0) - eye(32)).cwiseAbs().maxCoeff() < 1e-12);
  // trapezoid oracle for ⟨h_j, e^{i(qx+c)} h_k(·−s)⟩
  const double s = 0.4, q = -0.8, c = 0.3;
  auto M = shift_modulate(12, ell, s, q, c);
  const int N = 4000;
  const double L = 14, h = 2 * L / N;
  double err = 0;
  for (int j = 0; j < 12; j += 3)
    for (int k = 0; k < 12; k += 2) {
      cplx sum{};
      for (int i = 0; i < N; ++i) {
        double x = -L + i * h;
        sum += h_oracle(j, x, ell) * std::polar(1.0, q * x + c) * h_oracle(k, x - s, ell);
      }
      err = std::max(err, std::abs(sum * h - M(j, k)));
    }
  CHECK(err < 1e-12);
}

TEST_CASE("group law") {
  std::mt19937 rng(1);
  auto g1 = lambda_point(2, 4, 0, 0.3, -0.2, 0.1, rng), g2 = lambda_point(2, 4, 2, -0.5, 0.4, 0.7, rng);
  auto g3 = lambda_point(2, 4, 0, 0.2, 0.2, -0.3, rng);
  auto l = group_mul(group_mul(g1, g2), g3), r = group_mul(g1, group_mul(g2, g3));
  CHECK(distance(l.a, r.a) < 1e-14);
  auto e = group_mul(g1, group_inverse(g1));
  CHECK(distance(e.a, Grassmann(4)) < 1e-14);
  CHECK(e.x[0] == 0.0);
}

TEST_CASE("induced representation") {
  std::mt19937 rng(2);
  for (int n = 0; n <= 2; ++n) {
    DeformationParams p(0.6, 0.5, 2, n);
    const int aux = 2 * n;
    auto b = make_basis(p, 32, aux);
    CHECK((rep_U(p, group_identity(2, n, aux), b).mat - eye(b.dim())).cwiseAbs().maxCoeff() < 1e-12);
    auto g1 = lambda_point(n, aux, 0, 0.6, -0.5, 0.2, rng), g2 = lambda_point(n, aux, n, -0.3, 0.7, -0.4, rng);
    auto rep = representation_check(p, g1, g2, b, 16);
    CHECK(rep.residual <= rep.bound);
    auto inv = representation_check(p, g1, group_inverse(g1), b, 16);
    CHECK(inv.residual <= inv.bound);
    auto u = unitarity_check(p, g1, b, 16);
    CHECK(u.superhermitian_residual <= u.bound);
    if (n > 0) MESSAGE("Hilbert-product residual of U for n = " << n << ": " << u.hermitian_residual);
  }
}

TEST_CASE("Sigma identities") {
  for (int n = 0; n <= 3; ++n) {
    DeformationParams p(0.8, 0.6, 2, n);
    auto b = make_basis(p, 32);
    auto S = sigma_op(p, b);
    CHECK((S.mat * S.mat - p.r() * eye(b.dim())).cwiseAbs().maxCoeff() < 1e-12);
    auto H = make_hilbert_super(b);
    auto Sd = superadjoint(H, S).mat;
    // measured: Σ is self-superadjoint; Σ† = rΣ would need r = 1
    CHECK((Sd - S.mat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(p.r() - 1.0) > 0.1);
    CHECK((Sd - p.r() * S.mat).cwiseAbs().maxCoeff() > 1e-3);
    if (n == 0) {
      Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(32, 32);
      for (int k = 0; k < 32; ++k) P(k, k) = (k % 2 ? -1.0 : 1.0) * p.gamma();
      CHECK((S.mat - P).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("Omega at points") {
  std::mt19937 rng(3);
  DeformationParams p(0.7, 0.5, 2, 1);
  auto b = make_basis(p, 32, 1);
  auto S = sigma_op(p, b).mat;
  CHECK((omega_point(p, group_identity(2, 1, 1), b).mat - S).cwiseAbs().maxCoeff() < 1e-12);
  auto g = lambda_point(1, 1, 0, 0.4, -0.3, 0.9, rng);
  auto g0 = g;
  g0.a = Grassmann(1);
  auto O = omega_point(p, g, b).mat, O0 = omega_point(p, g0, b).mat;
  auto low = b.low_indices(16);
  CHECK(restricted_distance(O, O0, low) < 1e-10);
  CHECK(restricted_distance(O * O, p.r() * eye(b.dim()), low) < 1e-10);
}

TEST_CASE("odd factor of Omega(f) equals the Berezin average of Omega(z)") {
  for (int n = 1; n <= 3; ++n) {
    DeformationParams p(0.7, 0.6, 2, n);
    auto b = make_basis(p, 1, n);
    GroupElement g = group_identity(2, n, n);
    for (int i = 0; i < n; ++i) g.xi[i] = Grassmann::generator(n, i);
    Eigen::MatrixXcd Om = omega_point(p, g, b).mat / p.gamma_even();
    const Mask D = Mask{1} << n;
    for (Mask I = 0; I < D; ++I) {
      Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(D, D);
      for (Mask K = 0; K < D; ++K) {
        Grassmann v(2 * n);
        for (Mask M = 0; M < D * D; ++M) v.add_term(M, Om(M, K));
        Grassmann w = (Grassmann::monomial(2 * n, I << n) * v).berezin((D - 1) << n, Side::Left);
        for (const auto& [m, c] : w.terms()) B(m, K) += c;
      }
      CHECK((B - odd_omega_factor(p, I)).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("Omega of a narrow Gaussian approaches mass times Omega(z0)") {
  DeformationParams p(1.0, 0.5, 2, 0);
  auto b = make_basis(p, 32);
  GroupElement g = group_identity(2, 0);
  g.x = {0.3};
  g.w = {-0.2};
  auto Oz = omega_point(p, g, b).mat;
  auto low = b.low_indices(8);
  double prev = INFINITY;
  for (double sigma : {0.2, 0.1, 0.05}) {
    const double mass = 2.0;
    auto f = SuperFunction::even(GaussianSum::isotropic(2, sigma, {0.3, -0.2}, mass / (2 * kPi * sigma * sigma)), 0);
    auto O = omega_map(p, f, b);
    double d = restricted_distance(O.op.mat, mass * Oz, low);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("Omega is a homomorphism for the star product") {
  DeformationParams p(0.7, 0.5, 2, 1);
  SuperFunction f1(2, 1), f2(2, 1);
  auto g1 = GaussianSum::isotropic(2, 0.9, {0.2, -0.1}, 1.0), g2 = GaussianSum::isotropic(2, 1.1, {-0.3, 0.2}, 0.8);
  f1.set(0, g1);
  f1.set(1, g1);
  f2.set(0, g2);
  f2.set(1, g2);
  auto b = make_basis(p, 48);
  auto lhs = omega_map(p, star(p, f1, f2), b);
  auto O1 = omega_map(p, f1, b), O2 = omega_map(p, f2, b);
  auto low = b.low_indices(24);
  double scale = lhs.op.mat.cwiseAbs().maxCoeff();
  CHECK(restricted_distance(lhs.op.mat, O1.op.mat * O2.op.mat, low) / scale < 1e-8);
  CHECK(lhs.quadrature_error < 1e-10);
  // linearity
  auto sum = omega_map(p, super_add(f1, super_scale(f2, cplx(0.5, 2.0))), b);
  CHECK((sum.op.mat - O1.op.mat - cplx(0.5, 2.0) * O2.op.mat).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("plane-wave quantization is a displacement") {
  DeformationParams p(0.5, 0.5, 2, 1);
  auto b = make_basis(p, 40);
  auto e1 = SuperFunction::even(PlaneWaveSum::wave({0.7, -0.4}), 1);
  auto e2 = SuperFunction::even(PlaneWaveSum::wave({-0.2, 0.9}), 1);
  auto lhs = omega_map(p, star(p, e1, e2), b).op.mat;
  auto rhs = (omega_map(p, e1, b).op.mat * omega_map(p, e2, b).op.mat).eval();
  CHECK(restricted_distance(lhs, rhs, b.low_indices(16)) < 1e-10);
}
