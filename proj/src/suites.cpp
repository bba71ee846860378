#include "superstar/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "superstar/error.hpp"
#include "superstar/oscillatory.hpp"
#include "superstar/qft.hpp"
#include "superstar/quantization.hpp"
#include "superstar/starprod.hpp"
#include "superstar/supercstar.hpp"
#include "superstar/udf_hopf.hpp"

namespace superstar {

namespace {

using json = nlohmann::json;
using Rng = std::mt19937_64;

json cjson(cplx c) { return json::array({c.real(), c.imag()}); }

SuperFunction random_gaussian_super(Rng& rng, int n) {
  std::normal_distribution<double> nd;
  SuperFunction f(2, n);
  for (Mask I = 0; I < (Mask{1} << n); ++I)
    f.set(I, GaussianSum::isotropic(2, 0.8 + 0.2 * std::abs(nd(rng)), {0.4 * nd(rng), 0.4 * nd(rng)},
                                    cplx(nd(rng), nd(rng))));
  return f;
}

SuperFunction random_wave_super(Rng& rng, int n, int waves = 2) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  SuperFunction f(2, n);
  for (Mask I = 0; I < (Mask{1} << n); ++I) {
    std::vector<PlaneWave> t;
    for (int j = 0; j < waves; ++j) t.push_back({{u(rng), u(rng)}, cplx(nd(rng), nd(rng))});
    f.set(I, PlaneWaveSum(2, std::move(t)));
  }
  return f;
}

std::vector<RVec> random_points(Rng& rng, int count, double r = 1.5) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<RVec> p;
  for (int i = 0; i < count; ++i) p.push_back({u(rng), u(rng)});
  return p;
}

double sup_at(const SuperFunction& f, const std::vector<RVec>& pts) {
  double s = 0.0;
  for (const auto& z : pts) s = std::max(s, f.eval(z).max_abs());
  return s;
}

/// Λ-point with ‖(x, w)‖ ≤ 1; odd coordinates are random combinations of aux generators from `offset`.
GroupElement random_lambda_point(Rng& rng, int n, int aux, int offset) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GroupElement g = group_identity(2, n, aux);
  double rad = std::sqrt(u(rng)), ang = 2 * std::numbers::pi * u(rng);
  g.x = {rad * std::cos(ang)};
  g.w = {rad * std::sin(ang)};
  g.a = Grassmann::scalar(aux, nd(rng));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.xi[i].add_term(Mask{1} << (offset + j), nd(rng));
  return g;
}

SuperOperator random_homogeneous(Rng& rng, const std::vector<int>& grading, int parity) {
  std::normal_distribution<double> nd;
  const auto d = static_cast<Eigen::Index>(grading.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if ((grading[i] ^ grading[j]) == parity) m(i, j) = cplx(nd(rng), nd(rng));
  return make_operator(m, grading);
}

double maxabs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

int scaled(const SuiteConfig& cfg, int base) { return cfg.strict ? 3 * base : base; }

// 1. Exterior algebra laws, exhaustive on monomials.
CriterionReport criterion_exterior(const SuiteConfig&) {
  CriterionReport r{1, "Exterior-algebra laws, exhaustive for n <= 5", {}, 0, 10.0, {}};
  double assoc = 0, comm = 0, cocycle = 0;
  long triples = 0;
  for (int n = 0; n <= 5; ++n) {
    const Mask D = Mask{1} << n;
    std::vector<Grassmann> mono;
    for (Mask I = 0; I < D; ++I) mono.push_back(Grassmann::monomial(n, I));
    for (Mask I = 0; I < D; ++I)
      for (Mask J = 0; J < D; ++J) {
        const Grassmann ab = mono[I] * mono[J];
        const double s = (mask_parity(I) && mask_parity(J)) ? -1.0 : 1.0;
        comm = std::max(comm, distance(ab, s * (mono[J] * mono[I])));
        for (Mask K = 0; K < D; ++K) {
          ++triples;
          assoc = std::max(assoc, distance(ab * mono[K], mono[I] * (mono[J] * mono[K])));
          if ((I & J) || (I & K) || (J & K)) continue;
          MultiIndex mi(I, n), mj(J, n), mk(K, n);
          int lhs = sign_eps(mi, mj) * sign_eps(MultiIndex(I | J, n), mk);
          int rhs = sign_eps(mj, mk) * sign_eps(mi, MultiIndex(J | K, n));
          cocycle = std::max(cocycle, double(std::abs(lhs - rhs)));
        }
      }
  }
  // Exact means bitwise: every residual must be zero.
  r.checks = {{"associativity residual", assoc, 1e-300},
              {"graded commutativity residual", comm, 1e-300},
              {"sign cocycle violations", cocycle, 1e-300}};
  r.data = {{"triples", triples}};
  return r;
}

// 2. Star-product associativity and fast/direct agreement.
CriterionReport criterion_associativity(const SuiteConfig& cfg) {
  CriterionReport r{2, "Star-product associativity, fast vs direct", {}, 0, 120.0, {}};
  Rng rng(cfg.seed + 2);
  double gauss = 0, waves = 0, agree = 0, direct_est = 0;
  for (int n = 0; n <= 2; ++n) {
    DeformationParams p(0.8, 0.7, 2, n);
    for (int t = 0; t < scaled(cfg, 3); ++t) {
      auto pts = random_points(rng, 6);
      auto f1 = random_gaussian_super(rng, n), f2 = random_gaussian_super(rng, n), f3 = random_gaussian_super(rng, n);
      auto l = star(p, star(p, f1, f2), f3), rr = star(p, f1, star(p, f2, f3));
      gauss = std::max(gauss, max_distance(l, rr, pts) / std::max(1.0, sup_at(l, pts)));
      auto w1 = random_wave_super(rng, n), w2 = random_wave_super(rng, n), w3 = random_wave_super(rng, n);
      auto lw = star_fast(p, star_fast(p, w1, w2), w3), rw = star_fast(p, w1, star_fast(p, w2, w3));
      waves = std::max(waves, max_distance(lw, rw, pts) / std::max(1.0, sup_at(lw, pts)));
      auto fast = star_fast(p, w1, w2);
      auto direct = star_direct(p, w1, w2);
      agree = std::max(agree, max_distance(to_gaussian(fast), direct.value, pts));
      direct_est = std::max(direct_est, direct.residual_estimate);
    }
  }
  r.checks = {{"Gaussian triples associativity (relative)", gauss, 1e-6},
              {"plane-wave triples associativity (relative)", waves, 1e-6},
              {"star_fast vs star_direct on plane waves", agree, 1e-8}};
  r.data = {{"direct_extrapolation_estimate", direct_est}};
  return r;
}

// 3. Tracial property and graded conjugation law.
CriterionReport criterion_tracial(const SuiteConfig& cfg) {
  CriterionReport r{3, "Tracial property and graded conjugation law", {}, 0, 60.0, {}};
  Rng rng(cfg.seed + 3);
  double tr = 0, cj = 0;
  const int pairs = scaled(cfg, 20);
  for (int i = 0; i < pairs; ++i) {
    const int n = i % 3;
    DeformationParams p(0.5 + 0.1 * (i % 7), 0.3 + 0.2 * (i % 4), 2, n);
    auto rep = tracial_check(p, random_gaussian_super(rng, n), random_gaussian_super(rng, n), random_points(rng, 6));
    tr = std::max(tr, rep.trace_residual);
    cj = std::max(cj, rep.conj_residual);
  }
  r.checks = {{"trace residual", tr, 1e-8}, {"conjugation residual", cj, 1e-8}};
  r.data = {{"pairs", pairs}};
  return r;
}

// 4. Commutative limit.
CriterionReport criterion_commutative(const SuiteConfig& cfg) {
  CriterionReport r{4, "Commutative limit: O(theta) product, O(theta^2) bracket remainder", {}, 0, 0.0, {}};
  Rng rng(cfg.seed + 4);
  const std::vector<double> thetas = {0.1, 0.05, 0.025, 0.0125};
  auto pts = random_points(rng, 5, 1.0);
  DeformationParams p(1.0, 0.5, 2, 0);
  auto rep = commutative_limit_check(p, random_gaussian_super(rng, 0), random_gaussian_super(rng, 0), thetas, pts);
  r.checks = {{"|product rate - 1|", std::abs(rep.product_rate - 1.0), 0.1},
              {"|bracket rate - 2| / 2", std::abs(rep.bracket_rate - 2.0) / 2.0, 0.1},
              {"extrapolated product discrepancy", rep.product_limit_discrepancy, 1e-6},
              {"extrapolated bracket discrepancy", rep.bracket_limit_discrepancy, 1e-5}};
  DeformationParams p1(1.0, 0.5, 2, 1);
  auto f1 = parity_part(random_gaussian_super(rng, 1), 1), f2 = parity_part(random_gaussian_super(rng, 1), 1);
  auto rep1 = commutative_limit_check(p1, f1, f2, thetas, pts);
  r.data = {{"thetas", thetas},
            {"n0", {{"product_error", rep.product_error},
                    {"bracket_error", rep.bracket_error},
                    {"product_rate", rep.product_rate},
                    {"bracket_rate", rep.bracket_rate}}},
            {"n1", {{"stated_prefactor", rep1.stated_prefactor},
                    {"fitted_prefactor", cjson(rep1.fitted_prefactor)},
                    {"bracket_error_stated", rep1.bracket_error},
                    {"bracket_error_fitted", rep1.fitted_error},
                    {"fitted_bracket_rate", rep1.fitted_bracket_rate},
                    {"product_rate", rep1.product_rate}}}};
  return r;
}

// 5. Σ² = r and Σ† = rΣ.
CriterionReport criterion_sigma(const SuiteConfig&) {
  CriterionReport r{5, "Sigma^2 = r 1 and Sigma^dagger = r Sigma on 32 levels", {}, 0, 30.0, {}};
  double sq = 0, dag = 0, self = 0;
  json per_n = json::array();
  for (int n = 0; n <= 2; ++n) {
    DeformationParams p(0.8, 0.6, 2, n);
    auto b = make_basis(p, 32);
    auto S = sigma_op(p, b);
    const auto d = static_cast<Eigen::Index>(b.dim());
    double e_sq = maxabs(S.mat * S.mat - p.r() * Eigen::MatrixXcd::Identity(d, d));
    auto Sd = superadjoint(make_hilbert_super(b), S).mat;
    double e_dag = maxabs(Sd - p.r() * S.mat), e_self = maxabs(Sd - S.mat);
    sq = std::max(sq, e_sq);
    dag = std::max(dag, e_dag);
    self = std::max(self, e_self);
    per_n.push_back({{"n", n}, {"r", cjson(p.r())}, {"sigma_sq", e_sq}, {"dagger_vs_r_sigma", e_dag},
                     {"dagger_vs_sigma", e_self}});
  }
  r.checks = {{"|Sigma^2 - r|", sq, 1e-9}, {"|Sigma^dagger - r Sigma|", dag, 1e-9}};
  r.data = {{"per_n", per_n}, {"measured_dagger_vs_sigma", self}};
  return r;
}

// 6. Induced representation.
CriterionReport criterion_representation(const SuiteConfig& cfg) {
  CriterionReport r{6, "Induced representation and superhermitian unitarity", {}, 0, 120.0, {}};
  Rng rng(cfg.seed + 6);
  double rep_ratio = 0, uni_ratio = 0, herm = 0;
  json rows = json::array();
  for (int n = 0; n <= 2; ++n) {
    DeformationParams p(0.6, 0.5, 2, n);
    const int aux = 2 * n;
    auto b = make_basis(p, 32, aux);
    for (int t = 0; t < scaled(cfg, 3); ++t) {
      auto g1 = random_lambda_point(rng, n, aux, 0), g2 = random_lambda_point(rng, n, aux, n);
      auto rep = representation_check(p, g1, g2, b, 16);
      auto u = unitarity_check(p, g1, b, 16);
      rep_ratio = std::max(rep_ratio, rep.residual / std::max(rep.bound, 1e-300));
      uni_ratio = std::max(uni_ratio, u.superhermitian_residual / std::max(u.bound, 1e-300));
      herm = std::max(herm, u.hermitian_residual);
      rows.push_back({{"n", n}, {"rep_residual", rep.residual}, {"rep_bound", rep.bound},
                      {"unitarity_residual", u.superhermitian_residual}, {"unitarity_bound", u.bound}});
    }
  }
  // residual/bound < 1 is "below the reported truncation-leakage bound".
  r.checks = {{"representation residual / bound", rep_ratio, 1.0}, {"unitarity residual / bound", uni_ratio, 1.0}};
  r.data = {{"samples", rows}, {"hilbert_product_residual", herm}};
  return r;
}

// 7. Quantization homomorphism under refinement.
CriterionReport criterion_homomorphism(const SuiteConfig&) {
  CriterionReport r{7, "Omega(f1 * f2) = Omega(f1) Omega(f2) under refinement 16/32/48", {}, 0, 600.0, {}};
  DeformationParams p(0.3, 0.5, 2, 1);
  SuperFunction f1(2, 1), f2(2, 1);
  auto g1 = GaussianSum::isotropic(2, 1.5, {0.4, -0.2}, 1.0), g2 = GaussianSum::isotropic(2, 1.5, {-0.3, 0.5}, 0.8);
  f1.set(0, g1);
  f1.set(1, g1);
  f2.set(0, g2);
  f2.set(1, g2);
  auto prod = star(p, f1, f2);
  std::vector<int> levels = {16, 32, 48};
  std::vector<double> res, qerr;
  for (int L : levels) {
    auto b = make_basis(p, L);
    auto lhs = omega_map(p, prod, b);
    Eigen::MatrixXcd rhs = omega_map(p, f1, b).op.mat * omega_map(p, f2, b).op.mat;
    auto low = b.low_indices(L / 2);
    double scale = restricted_distance(rhs, Eigen::MatrixXcd::Zero(rhs.rows(), rhs.cols()), low);
    res.push_back(restricted_distance(lhs.op.mat, rhs, low) / scale);
    qerr.push_back(lhs.quadrature_error);
  }
  r.checks = {{"residual(32) / residual(16)", res[1] / res[0], 1.0},
              {"residual(48) / residual(32)", res[2] / res[1], 1.0},
              {"final relative residual", res[2], 1e-4}};
  r.data = {{"levels", levels}, {"relative_residual", res}, {"quadrature_error", qerr}};
  return r;
}

// 8. Super-torus UDF.
CriterionReport criterion_torus(const SuiteConfig&) {
  CriterionReport r{8, "Super-torus UDF: Weyl relation, Hopf and comodule axioms, Xi multiplicativity", {}, 0, 0.0, {}};
  DeformationParams p(1.0, 0.3, 2, 1);
  GroupAction A = torus_translation(2, 1);
  std::vector<RVec> ks9;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) ks9.push_back({double(a), double(b)});
  WeylReport w = weyl_check(p, A, ks9);
  // 32 plane waves times {1, ξ}: 64 span elements.
  std::vector<ModeTensor> span;
  for (int a = -1; a <= 2; ++a)
    for (int b = -3; b <= 4; ++b)
      for (Mask I : {Mask{0}, Mask{1}}) span.push_back(ModeTensor::basis({double(a), double(b)}, I, 1));
  HopfReport h = hopf_check(span);
  ComoduleReport c = comodule_check(p, A, span);

  const std::vector<RVec> pts = {{0.0, 0.0}, {1.0, 2.0}, {-2.2, 0.4}};
  ModeTensor a = ModeTensor::basis({1, 0}, 0, 1) + ModeTensor::basis({0, -1}, 0, 1, 0.5);
  ModeTensor b = ModeTensor::basis({0, 1}, 1, 1) + 0.3 * ModeTensor::unit(2, 1);
  std::vector<int> levels = {16, 32};
  std::vector<double> mult;
  for (int L : levels) mult.push_back(xi_multiplicativity(p, A, a, b, L, pts));
  NormEstimate n1 = deformed_norm_estimate(p, A, ModeTensor::unit(2, 1), 16, pts);
  NormEstimate nk = deformed_norm_estimate(p, A, ModeTensor::basis({1, -1}, 0, 1), 16, pts);

  r.checks = {{"Weyl relation residual", w.relation_residual, 1e-12},
              {"Theta antisymmetry residual", w.antisymmetry_residual, 1e-12},
              {"Theta bilinearity residual", w.bilinearity_residual, 1e-12},
              {"Hopf axioms (64 elements)", h.max(), 1e-12},
              {"comodule coassociativity and counit", std::max(c.coassociativity, c.counit), 1e-12},
              {"comodule-algebra equivariance (both products)",
               std::max(c.product_equivariance, c.deformed_equivariance), 1e-12},
              {"Xi multiplicativity at 32 levels", mult.back(), 1e-4}};
  r.data = {{"theta_formula", "Theta(k,l) = sigma*theta*(k_x l_w - k_w l_x)"},
            {"theta_formula_residual", w.theta_formula_residual},
            {"phase_modulus_residual", w.modulus_residual},
            {"unitarity_residual", w.unitarity_residual},
            {"span_size", span.size()},
            {"xi_levels", levels},
            {"xi_multiplicativity", mult},
            {"norm_levels", n1.levels},
            {"norm_unit", n1.norms},
            {"norm_u_k", nk.norms}};
  return r;
}

// 9. Superadjoint laws.
CriterionReport criterion_superadjoint(const SuiteConfig& cfg) {
  CriterionReport r{9, "Superadjoint involution and graded anti-multiplicativity", {}, 0, 5.0, {}};
  Rng rng(cfg.seed + 9);
  std::vector<HilbertSuper> spaces;
  for (int n = 1; n <= 6; ++n) spaces.push_back(hodge_hilbert(n));
  spaces.push_back(make_hilbert_super(make_basis(DeformationParams(0.8, 0.6, 2, 2), 16)));
  double inv = 0, anti = 0;
  for (const auto& H : spaces)
    for (int t = 0; t < scaled(cfg, 1); ++t)
      for (int ps = 0; ps < 2; ++ps)
        for (int pt = 0; pt < 2; ++pt) {
          auto S = random_homogeneous(rng, H.grading, ps), T = random_homogeneous(rng, H.grading, pt);
          auto Td = superadjoint(H, T);
          inv = std::max(inv, maxabs(superadjoint(H, Td).mat - T.mat));
          auto ST = make_operator(S.mat * T.mat, H.grading);
          const double sign = (ps && pt) ? -1.0 : 1.0;
          anti = std::max(anti, maxabs(superadjoint(H, ST).mat - sign * Td.mat * superadjoint(H, S).mat));
        }
  r.checks = {{"(T^dagger)^dagger - T", inv, 1e-12}, {"(ST)^dagger - (-1)^{|S||T|} T^dagger S^dagger", anti, 1e-12}};
  r.data = {{"max_dimension", 64}};
  return r;
}

// 10. QFT identity.
CriterionReport criterion_qft(const SuiteConfig& cfg) {
  CriterionReport r{10, "Superfield action equals the harmonic action (27-point sweep)", {}, 0, 300.0, {}};
  const GridSpec g{10.0, 128};
  Eigen::MatrixXd P1 = Eigen::MatrixXd::Identity(2, 2), P2(2, 2);
  P2 << 1 / 0.81, 0.2, 0.2, 1 / 1.69;
  GaussianSum h1 = GaussianSum::gaussian(P1, {0.5, -0.3}, {0, 0}, 1.0);
  std::vector<GaussianTerm> t2 = GaussianSum::gaussian(P2, {-0.4, 0.2}, {0, 0}, 0.8).terms();
  auto extra = GaussianSum::gaussian(Eigen::MatrixXd::Identity(2, 2) * 1.8, {1.1, 0.9}, {0, 0}, -0.5).terms();
  t2.insert(t2.end(), extra.begin(), extra.end());
  std::vector<FieldConfig> fields = {make_field(h1, g), make_field(GaussianSum(2, t2), g)};
  auto res = qft_sweep(1.0, 1.0, {0.5, 1.0, 2.0}, {-0.5, 0.3, 1.0}, {0.0, 0.7, 1.3}, fields);
  double kin = 0, mass = 0, quart = 0, total = 0, imag = 0;
  json rows = json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& c = res[i];
    kin = std::max(kin, c.kinetic_residual);
    mass = std::max(mass, c.mass_residual);
    quart = std::max(quart, c.quartic_residual);
    total = std::max(total, c.total_residual);
    imag = std::max(imag, c.superfield.imag_residual);
    rows.push_back({{"theta", c.params.theta}, {"alpha", c.params.alpha}, {"b", c.params.b}, {"field", i % 2},
                    {"omega_pred", c.omega_pred}, {"omega_fit", c.omega_fit},
                    {"lambda_pred", c.lambda_pred}, {"lambda_fit", c.lambda_fit},
                    {"kinetic_residual", c.kinetic_residual}, {"mass_residual", c.mass_residual},
                    {"quartic_residual", c.quartic_residual}, {"total_residual", c.total_residual},
                    {"star_reading", {{"kinetic_residual", c.kinetic_residual_star},
                                      {"mass_residual", c.mass_residual_star},
                                      {"quartic_residual", c.quartic_residual_star},
                                      {"total_residual", c.total_residual_star}}}});
  }
  r.checks = {{"kinetic + harmonic term residual", kin, 1e-6}, {"mass term residual", mass, 1e-6},
              {"quartic term residual", quart, 1e-6}, {"total residual", total, 1e-6}};
  r.data = {{"grid", {{"N", g.N}, {"L", g.L}}}, {"points", rows}, {"imaginary_part", imag},
            {"modulus_reading", "conj(X) X (pointwise); conj(X) * X reported under star_reading"}};
  if (cfg.qft_point) {
    const auto [th, al, b] = *cfg.qft_point;
    double worst = 0;
    json extra = json::array();
    for (const auto& f : fields) {
      auto c = qft_compare(QftParams(th, al, b, 1.0, 1.0), f);
      worst = std::max(worst, c.max_residual());
      extra.push_back({{"omega_pred", c.omega_pred}, {"omega_fit", c.omega_fit}, {"lambda_pred", c.lambda_pred},
                       {"lambda_fit", c.lambda_fit}, {"total_residual", c.total_residual}});
    }
    r.checks.push_back({"requested point: worst per-term/total residual", worst, 1e-6});
    r.data["requested_point"] = {{"theta", th}, {"alpha", al}, {"b", b}, {"fields", extra}};
  }
  return r;
}

// 11. Oscillating integral.
CriterionReport criterion_oscillating(const SuiteConfig&) {
  CriterionReport r{11, "Oscillating integral: k-stability, plain quadrature, 2 pi benchmark", {}, 0, 0.0, {}};
  const double two_pi = 2 * std::numbers::pi;
  auto one = SuperFunction::even(PlaneWaveSum::constant(2, 1.0), 0);
  auto r1 = osc_integrate(one, 4, {10.0, -1.0});
  PlaneWaveSum f(2, {{{0.5, -0.3}, cplx(1.0, 0.5)}, {{1.0, 0.0}, 0.5}, {{-1.0, 0.0}, 0.5}});
  auto r2 = osc_integrate(SuperFunction::monomial(f, 1, 1), 4, {10.0, -1.0});

  GaussianSum g = GaussianSum::isotropic(2, 1.2, {0.3, -0.4}, cplx(0.8, 0.1));
  const int N = 400;
  const double L = 12, h = 2 * L / N;
  cplx plain{};
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double x = -L + a * h, w = -L + b * h;
      plain += std::polar(1.0, x * w) * g.eval({x, w});
    }
  plain *= h * h;
  double quad = 0;
  for (int k : {0, 2, 4}) quad = std::max(quad, std::abs(osc_integrate_even(g, k) - plain));
  r.checks = {{"k-stability |I_k - I_{k+1}| (constant)", r1.k_residual, 1e-6},
              {"k-stability |I_k - I_{k+1}| (plane waves)", r2.k_residual, 1e-6},
              {"integrable input vs plain quadrature", quad, 1e-8},
              {"|integral of e^{ixw} - 2 pi|", std::abs(r1.value - two_pi), 1e-4}};
  r.data = {{"constant_value", cjson(r1.value)}, {"plane_wave_value", cjson(r2.value)}, {"k", 4}};
  return r;
}

using CriterionFn = CriterionReport (*)(const SuiteConfig&);
constexpr CriterionFn kCriteria[kCriterionCount] = {
    criterion_exterior,       criterion_associativity, criterion_tracial, criterion_commutative,
    criterion_sigma,          criterion_representation, criterion_homomorphism, criterion_torus,
    criterion_superadjoint,   criterion_qft,            criterion_oscillating};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

}  // namespace

bool CriterionReport::passed() const {
  bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
  return ok && (time_limit <= 0.0 || seconds < time_limit);
}

std::string CriterionReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass()) return c.name + " = " + fmt(c.value) + (c.upper ? " (bound < " : " (bound > ") + fmt(c.bound) + ")";
  if (time_limit > 0.0 && seconds >= time_limit) return "runtime " + fmt(seconds) + " s exceeds " + fmt(time_limit) + " s";
  return {};
}

CriterionReport run_criterion(int id, const SuiteConfig& cfg) {
  if (id < 1 || id > kCriterionCount) throw Error(Error::Kind::Precondition, "unknown criterion " + std::to_string(id));
  auto t0 = std::chrono::steady_clock::now();
  CriterionReport r = kCriteria[id - 1](cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool SuiteReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionReport& c) { return c.passed(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra", "star", "quantize", "cstar", "deform", "qft", "all"};
  return names;
}

std::vector<int> suite_criteria(const std::string& name) {
  if (name == "algebra") return {1, 11};
  if (name == "star") return {2, 3, 4};
  if (name == "quantize") return {5, 6, 7};
  if (name == "cstar") return {9};
  if (name == "deform") return {8};
  if (name == "qft") return {10};
  if (name == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw Error(Error::Kind::Precondition, "unknown suite '" + name + "'");
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  SuiteReport s;
  s.name = name;
  for (int id : suite_criteria(name)) s.criteria.push_back(run_criterion(id, cfg));
  s.constants = json::array();
  for (int n = 0; n <= 2; ++n) s.constants.push_back(derived_constants(DeformationParams(1.0, 0.3, 2, n)));
  return s;
}

json derived_constants(const DeformationParams& p) {
  json j = {{"theta", p.theta},
            {"alpha", p.alpha},
            {"m", p.m},
            {"n", p.n},
            {"moyal_phase_sign", moyal_phase_sign()},
            {"plane_wave_phase", "e_k * e_l = exp(sigma*(i theta/2)*(k_x l_w - k_w l_x)) e_{k+l}"},
            {"weyl_theta", "Theta(k,l) = sigma*theta*(k_x l_w - k_w l_x)"},
            {"gamma", cjson(p.gamma())},
            {"r", cjson(p.r())},
            {"kappa", cjson(p.kappa())}};
  if (p.n > 0) {
    auto table = odd_star_table(p);
    j["clifford_scalar"] = cjson(table->clifford_scalar());
    json entries = json::array();
    const Mask D = Mask{1} << p.n;
    for (Mask I = 0; I < D; ++I)
      for (Mask J = 0; J < D; ++J)
        for (Mask K = 0; K < D; ++K)
          if (cplx c = table->at(I, J, K); std::abs(c) > 0.0) entries.push_back({I, J, K, cjson(c)});
    j["odd_structure_constants"] = entries;
  }
  return j;
}

json to_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"comparison", c.upper ? "<" : ">"},
          {"pass", c.pass()}};
}

json to_json(const CriterionReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"id", r.id}, {"title", r.title}, {"pass", r.passed()}, {"seconds", r.seconds},
          {"time_limit", r.time_limit}, {"checks", checks}, {"data", r.data}};
}

json to_json(const SuiteReport& r, const SuiteConfig& cfg) {
  json crit = json::array();
  for (const auto& c : r.criteria) crit.push_back(to_json(c));
  return {{"schema_version", kReportSchemaVersion},
          {"suite", r.name},
          {"seed", cfg.seed},
          {"tolerance_profile", cfg.strict ? "strict" : "default"},
          {"pass", r.passed()},
          {"criteria", crit},
          {"derived_constants", r.constants}};
}

std::string pass_line(const CriterionReport& r) {
  std::ostringstream s;
  s << (r.passed() ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << " (" << std::fixed;
  s.precision(2);
  s << r.seconds << " s)";
  if (!r.passed()) s << " -- " << r.first_failure();
  return s.str();
}

std::string summary_text(const SuiteReport& r) {
  std::ostringstream s;
  s << "suite " << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : r.criteria) {
    s << pass_line(c) << "\n";
    for (const auto& k : c.checks)
      s << "    " << (k.pass() ? "ok  " : "FAIL") << " " << k.name << " = " << fmt(k.value) << (k.upper ? " < " : " > ")
        << fmt(k.bound) << "\n";
  }
  return s.str();
}

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series, bool logx, bool logy) {
  const double W = 640, H = 420, ml = 80, mr = 20, mt = 40, mb = 60;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((logx && s.x[i] <= 0) || (logy && s.y[i] <= 0)) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (x0 > x1) x0 = 0, x1 = 1;
  if (y0 > y1) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n"
    << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
    << "<text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << H / 2 << ")\">"
    << ylabel << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    double vx = x0 + t * (x1 - x0) / 4, vy = y0 + t * (y1 - y0) / 4;
    double sx = ml + t * (W - ml - mr) / 4, sy = H - mb - t * (H - mt - mb) / 4;
    s << "<text x=\"" << sx << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">"
      << fmt(logx ? std::pow(10.0, vx) : vx) << "</text>\n";
    s << "<text x=\"" << ml - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
      << fmt(logy ? std::pow(10.0, vy) : vy) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    const char* col = colors[k % 5];
    s << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < sr.x.size(); ++i)
      if (!((logx && sr.x[i] <= 0) || (logy && sr.y[i] <= 0))) s << px(sr.x[i]) << "," << py(sr.y[i]) << " ";
    s << "\"/>\n";
    for (std::size_t i = 0; i < sr.x.size(); ++i)
      if (!((logx && sr.x[i] <= 0) || (logy && sr.y[i] <= 0)))
        s << "<circle cx=\"" << px(sr.x[i]) << "\" cy=\"" << py(sr.y[i]) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    s << "<text x=\"" << W - mr - 200 << "\" y=\"" << mt + 16 * (k + 1) << "\" fill=\"" << col << "\">" << sr.label
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::string> write_suite_outputs(const SuiteReport& r, const SuiteConfig& cfg, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    fs::path path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
    out << text;
    written.push_back(path.string());
  };
  put(r.name + ".json", to_json(r, cfg).dump(2) + "\n");
  put(r.name + ".txt", summary_text(r));
  for (const auto& c : r.criteria) {
    const json& d = c.data;
    if (c.id == 4) {
      auto th = d["thetas"].get<std::vector<double>>();
      put("commutative_limit.svg",
          svg_plot("Commutative limit (n = 0)", "theta", "sup error",
                   {{"|f1*f2 - f1 f2|", th, d["n0"]["product_error"].get<std::vector<double>>()},
                    {"|bracket/theta - Poisson|", th, d["n0"]["bracket_error"].get<std::vector<double>>()},
                    {"n = 1, fitted prefactor", th, d["n1"]["bracket_error_fitted"].get<std::vector<double>>()}},
                   true, true));
    } else if (c.id == 7) {
      std::vector<double> lv;
      for (int l : d["levels"]) lv.push_back(l);
      put("homomorphism_truncation.svg",
          svg_plot("Omega homomorphism residual vs basis size", "levels", "relative residual",
                   {{"relative residual", lv, d["relative_residual"].get<std::vector<double>>()}}, false, true));
    } else if (c.id == 8) {
      std::vector<double> lv, xl;
      for (int l : d["norm_levels"]) lv.push_back(l);
      for (int l : d["xi_levels"]) xl.push_back(l);
      put("deformed_norm_truncation.svg",
          svg_plot("Deformed norm estimates vs basis size", "levels", "norm",
                   {{"||Xi(1)||", lv, d["norm_unit"].get<std::vector<double>>()},
                    {"||Xi(u_k)||", lv, d["norm_u_k"].get<std::vector<double>>()}},
                   false, false));
      put("xi_multiplicativity.svg",
          svg_plot("Xi multiplicativity residual vs basis size", "levels", "relative residual",
                   {{"Xi(a*b) - Xi(a)Xi(b)", xl, d["xi_multiplicativity"].get<std::vector<double>>()}}, false, true));
    }
  }
  return written;
}

}  // namespace superstar
