#include "superstar/berezin.hpp"

#include <cmath>
#include <random>

#include "superstar/error.hpp"

namespace superstar {

cplx berezin_integrate(const SuperFunction& f, std::optional<double> box_volume) {
  const Mask top = MultiIndex::full(f.n()).bits;
  const CoeffFn* c = f.get(top);
  if (!c) return 0.0;
  return coeff_integral(*c, box_volume);
}

SuperFunction hodge(const SuperFunction& f) {
  const Mask full = MultiIndex::full(f.n()).bits;
  SuperFunction r(f.m(), f.n());
  for (const auto& [I, c] : f.comps()) {
    Mask comp = full & ~I;
    r.set(comp, coeff_scale(c, static_cast<double>(merge_sign(I, comp))));
  }
  return r;
}

Grassmann hodge(const Grassmann& g, int n) {
  const Mask full = MultiIndex::full(n).bits;
  Grassmann r(n);
  for (const auto& [I, c] : g.terms()) {
    if (I & ~full) throw Error(Error::Kind::Precondition, "hodge: monomial outside the n generators");
    Mask comp = full & ~I;
    r.add_term(comp, static_cast<double>(merge_sign(I, comp)) * c);
  }
  return r;
}

int hodge_square_sign(int n, int k) {
  Mask I = (Mask{1} << k) - 1;
  Grassmann twice = hodge(hodge(Grassmann::monomial(n, I), n), n);
  return twice.coeff(I).real() > 0 ? 1 : -1;
}

cplx scalar_product(ScalarProductKind kind, const SuperFunction& f, const SuperFunction& g,
                    std::optional<double> box_volume) {
  if (f.n() != g.n() || f.m() != g.m())
    throw Error(Error::Kind::BackendMismatch, "scalar_product: different R^{m|n}");
  const Mask full = MultiIndex::full(f.n()).bits;
  cplx s{};
  for (const auto& [I, a] : f.comps()) {
    Mask J = kind == ScalarProductKind::SuperHermitian ? (full & ~I) : I;
    const CoeffFn* b = g.get(J);
    if (!b) continue;
    cplx v = coeff_integral(coeff_mul(coeff_conj(a), *b), box_volume);
    if (kind == ScalarProductKind::SuperHermitian) v *= static_cast<double>(merge_sign(I, J));
    s += v;
  }
  return s;
}

namespace {

struct CompNorm {
  double value;
  double bound;
  bool exact;
};

CompNorm gaussian_norm(const GaussianSum& g, std::mt19937& rng, int samples) {
  const int m = g.dim();
  double bound = 0.0;
  std::vector<RVec> peaks;
  for (const auto& t : g.terms()) {
    Eigen::MatrixXd ra = t.A.real();
    Eigen::VectorXd rb = t.b.real();
    if (ra.norm() == 0.0) {
      if (rb.norm() > 0.0) return {INFINITY, INFINITY, true};
      bound += std::abs(t.c);
      peaks.emplace_back(m, 0.0);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ra);
    if (es.eigenvalues().minCoeff() <= 0.0) return {INFINITY, INFINITY, false};
    Eigen::VectorXd zs = ra.ldlt().solve(rb);
    bound += std::abs(t.c) * std::exp(0.5 * rb.dot(zs));
    peaks.emplace_back(zs.data(), zs.data() + m);
  }
  double value = 0.0;
  std::normal_distribution<double> nd(0.0, 1.0);
  for (const auto& p : peaks) value = std::max(value, std::abs(g.eval(p)));
  for (int s = 0; s < samples && !peaks.empty(); ++s) {
    RVec z = peaks[s % peaks.size()];
    for (auto& v : z) v += 0.5 * nd(rng);
    value = std::max(value, std::abs(g.eval(z)));
  }
  return {value, bound, g.terms().size() <= 1};
}

CompNorm plane_wave_norm(const PlaneWaveSum& p, std::mt19937& rng, int samples) {
  double bound = 0.0;
  for (const auto& t : p.terms()) bound += std::abs(t.a);
  if (p.terms().size() <= 1) return {bound, bound, true};
  std::uniform_real_distribution<double> ud(-50.0, 50.0);
  double value = 0.0;
  RVec z(p.dim());
  for (int s = 0; s < samples; ++s) {
    for (auto& v : z) v = ud(rng);
    value = std::max(value, std::abs(p.eval(z)));
  }
  return {value, bound, value >= bound * (1.0 - 1e-12)};
}

}  // namespace

SupNorm sup_norm(const SuperFunction& f, int samples) {
  std::mt19937 rng(12345);
  SupNorm out{0.0, 0.0, true};
  for (const auto& [I, c] : f.comps()) {
    CompNorm n{};
    switch (c.backend()) {
      case Backend::PlaneWave: n = plane_wave_norm(c.plane_waves(), rng, samples); break;
      case Backend::Gaussian: n = gaussian_norm(c.gaussians(), rng, samples); break;
      case Backend::Grid: {
        double v = 0.0;
        for (cplx s : c.grid().samples()) v = std::max(v, std::abs(s));
        n = {v, v, true};
        break;
      }
    }
    out.value += n.value;
    out.upper_bound += n.bound;
    out.exact = out.exact && n.exact;
  }
  return out;
}

}  // namespace superstar
