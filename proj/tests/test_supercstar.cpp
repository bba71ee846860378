#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "superstar/berezin.hpp"
#include "superstar/error.hpp"
#include "superstar/supercstar.hpp"

using namespace superstar;

namespace {

SuperOperator random_homogeneous(std::mt19937& rng, const std::vector<int>& grading, int parity) {
  std::normal_distribution<double> nd;
  const auto d = static_cast<Eigen::Index>(grading.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if ((grading[i] ^ grading[j]) == parity) m(i, j) = cplx(nd(rng), nd(rng));
  return make_operator(m, grading);
}

Eigen::VectorXcd random_vector(std::mt19937& rng, const std::vector<int>& grading, int parity) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(grading.size());
  for (std::size_t i = 0; i < grading.size(); ++i)
    if (grading[i] == parity) v(i) = cplx(nd(rng), nd(rng));
  return v;
}

double maxabs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Hodge Hilbert superspaces") {
  auto H0 = hodge_hilbert(0);
  CHECK(H0.pJ == 0);
  CHECK(maxabs(H0.J - Eigen::MatrixXcd::Identity(1, 1)) == 0.0);
  auto H1 = hodge_hilbert(1);
  CHECK(H1.pJ == 1);
  CHECK(H1.J(1, 0) == cplx(1.0));
  CHECK(H1.J(0, 1) == cplx(1.0));
  for (int n = 0; n <= 5; ++n) CHECK(hodge_hilbert(n).defect < 1e-14);
  // J² = −1 on odd vectors for even n
  auto H2 = hodge_hilbert(2);
  CHECK((H2.J * H2.J)(1, 1) == cplx(-1.0));
  CHECK_THROWS_AS(make_hilbert_super({0, 1}, Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2), 1),
                  Error);
}

TEST_CASE("superhermitian Gram reproduces the Berezin scalar product") {
  const double c = std::pow(std::numbers::pi, -0.25);
  for (int n = 1; n <= 3; ++n) {
    auto H = hodge_hilbert(n);
    auto G = superhermitian_gram(H);
    const Mask D = Mask{1} << n;
    for (Mask I = 0; I < D; ++I)
      for (Mask J = 0; J < D; ++J) {
        auto fi = SuperFunction::monomial(GaussianSum::isotropic(1, 1.0, {0.0}, c), n, I);
        auto fj = SuperFunction::monomial(GaussianSum::isotropic(1, 1.0, {0.0}, c), n, J);
        CHECK(std::abs(scalar_product(ScalarProductKind::SuperHermitian, fi, fj) - G(I, J)) < 1e-12);
      }
    DeformationParams p(1.0, 0.5, 2, n);
    auto b = make_basis(p, 3);
    auto lam = superhermitian_gram(b);
    REQUIRE(lam.size() == 1);
    CHECK(maxabs(lam[0].second - superhermitian_gram(make_hilbert_super(b))) < 1e-14);
  }
}

TEST_CASE("superadjoint laws on random homogeneous operators") {
  std::mt19937 rng(9);
  for (int n : {1, 2, 3, 4, 6}) {
    auto H = hodge_hilbert(n);
    auto G = superhermitian_gram(H);
    for (int ps = 0; ps < 2; ++ps)
      for (int pt = 0; pt < 2; ++pt) {
        auto S = random_homogeneous(rng, H.grading, ps), T = random_homogeneous(rng, H.grading, pt);
        auto Td = superadjoint(H, T);
        CHECK(maxabs(superadjoint(H, Td).mat - T.mat) < 1e-12);
        CHECK(maxabs(superadjoint_closed_form(H, T).mat - Td.mat) < 1e-12);
        auto ST = make_operator(S.mat * T.mat, H.grading);
        double sign = (ps && pt) ? -1.0 : 1.0;
        CHECK(maxabs(superadjoint(H, ST).mat - sign * Td.mat * superadjoint(H, S).mat) < 1e-12);
        // defining identity ⟨T†x, y⟩ = (−1)^{|T||x|}⟨x, Ty⟩
        for (int px = 0; px < 2; ++px) {
          auto x = random_vector(rng, H.grading, px), y = random_vector(rng, H.grading, 1 - px);
          y += random_vector(rng, H.grading, px);
          cplx l = (Td.mat * x).dot(G * y);
          cplx r = ((pt && px) ? -1.0 : 1.0) * x.dot(G * (T.mat * y));
          CHECK(std::abs(l - r) < 1e-10);
        }
      }
  }
  auto H0 = hodge_hilbert(0);
  auto T = random_homogeneous(rng, H0.grading, 0);
  CHECK(maxabs(superadjoint(H0, T).mat - T.mat.adjoint()) < 1e-15);
}

TEST_CASE("closure under the superadjoint") {
  auto H = hodge_hilbert(1);
  // left multiplication by ξ on L^∞(R^{0|1})
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(2, 2);
  L(1, 0) = 1.0;
  auto rep = cstar_norm_check(H, {make_operator(L, H.grading)});
  CHECK(rep.dagger_closure_residual < 1e-12);
  CHECK(rep.star_closure_residual > 0.5);
  CHECK(rep.grading_consistent);
  MESSAGE("C*-identity discrepancy for L_xi: " << rep.cstar_discrepancy);

  auto H2 = hodge_hilbert(2);
  std::mt19937 rng(4);
  auto T = random_homogeneous(rng, H2.grading, 0);
  auto sym = make_operator(T.mat + superadjoint(H2, T).mat, H2.grading);
  CHECK(maxabs(superadjoint(H2, sym).mat - sym.mat) < 1e-12);
  auto r2 = cstar_norm_check(H2, {sym});
  CHECK(r2.dagger_closure_residual < 1e-10);
}

TEST_CASE("sup norm is submultiplicative") {
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    SuperFunction f(1, 2), g(1, 2);
    for (Mask I = 0; I < 4; ++I) {
      f.set(I, GaussianSum::isotropic(1, 0.5 + std::abs(nd(rng)), {nd(rng)}, cplx(nd(rng), nd(rng))));
      g.set(I, GaussianSum::isotropic(1, 0.5 + std::abs(nd(rng)), {nd(rng)}, cplx(nd(rng), nd(rng))));
    }
    auto nf = sup_norm(f), ng = sup_norm(g), nfg = sup_norm(super_mul(f, g));
    CHECK(nfg.value <= nf.value * ng.value * (1 + 1e-12));
  }
}
