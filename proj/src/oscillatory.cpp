#include "superstar/oscillatory.hpp"


#include <cmath>

#include "jet.hpp"
#include "superstar/error.hpp"
#include "superstar/parallel.hpp"
#include "superstar/quadrature.hpp"

namespace superstar {

namespace {

Jet2 coeff_jet(const CoeffFn& f, double x, double w, int D) {
  Jet2 r(D);
  if (f.backend() == Backend::PlaneWave) {
    for (const auto& t : f.plane_waves().terms()) {
      const cplx ax(0, t.k[0]), aw(0, t.k[1]);
      const cplx base = t.a * std::polar(1.0, t.k[0] * x + t.k[1] * w);
      std::vector<cplx> px(D + 1), pw(D + 1);
      px[0] = pw[0] = 1.0;
      for (int i = 1; i <= D; ++i) {
        px[i] = px[i - 1] * ax / double(i);
        pw[i] = pw[i - 1] * aw / double(i);
      }
      for (int d = 0; d <= D; ++d)
        for (int j = 0; j <= d; ++j) r(d - j, j) += base * px[d - j] * pw[j];
    }
    return r;
  }
  if (f.backend() == Backend::Gaussian) {
    for (const auto& t : f.gaussians().terms()) {
      const cplx axx = t.A(0, 0), axw = t.A(0, 1), aww = t.A(1, 1);
      Jet2 q(D);
      q(0, 0) = -0.5 * (axx * x * x + 2.0 * axw * x * w + aww * w * w) + t.b(0) * x + t.b(1) * w;
      if (D >= 1) {
        q(1, 0) = -(axx * x + axw * w) + t.b(0);
        q(0, 1) = -(axw * x + aww * w) + t.b(1);
      }
      if (D >= 2) {
        q(2, 0) = -0.5 * axx;
        q(1, 1) = -axw;
        q(0, 2) = -0.5 * aww;
      }
      Jet2 g = Jet2::exp(q);
      for (int d = 0; d <= D; ++d)
        for (int j = 0; j <= d; ++j) r(d - j, j) += t.c * g(d - j, j);
    }
    return r;
  }
  throw Error(Error::Kind::Unsupported, "oscillating integral needs an analytic coefficient");
}

}  // namespace

cplx osc_integrate_even(const CoeffFn& f, int k, double radius) {
  if (f.dim() != 2) throw Error(Error::Kind::Unsupported, "oscillating integral is implemented for m = 2");
  if (k < 0) throw Error(Error::Kind::Precondition, "k must be non-negative");
  const QuadRule q = gauss_legendre_panels(-radius, radius, static_cast<int>(std::ceil(2 * radius)));
  const std::size_t N = q.nodes.size();
  std::vector<cplx> rows(N);
  parallel_for(N, [&](std::size_t a) {
    const double x = q.nodes[a];
    cplx s{};
    for (std::size_t b = 0; b < N; ++b) {
      const double w = q.nodes[b];
      Jet2 F = coeff_jet(f, x, w, 2 * k);
      if (k > 0) {
        Jet2 p(2 * k);
        p(0, 0) = 1.0 + x * x + w * w;
        p(1, 0) = 2 * x;
        p(0, 1) = 2 * w;
        p(2, 0) = p(0, 2) = 1.0;
        const Jet2 W = Jet2::reciprocal(p);
        for (int t = 0; t < k; ++t) F = (F * W).one_minus_laplacian();
      }
      s += q.weights[b] * std::polar(1.0, x * w) * F.value();
    }
    rows[a] = q.weights[a] * s;
  });
  cplx total{};
  for (auto v : rows) total += v;
  return total;
}

OscResult osc_integrate(const SuperFunction& f, int k, const OscOptions& opts) {
  if (f.m() != 2) throw Error(Error::Kind::Unsupported, "oscillating integral is implemented for m = 2");
  const Mask top = (Mask{1} << f.n()) - 1;
  const CoeffFn* c = f.get(top);
  OscResult r{};
  if (!c) return r;
  r.value = osc_integrate_even(*c, k, opts.radius);
  r.next = osc_integrate_even(*c, k + 1, opts.radius);
  r.k_residual = std::abs(r.value - r.next);
  if (opts.tolerance > 0 && r.k_residual > opts.tolerance)
    throw Error(Error::Kind::Quadrature, "oscillating integral not stable in k; increase k");
  return r;
}

}  // namespace superstar
