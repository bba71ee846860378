#include <cmath>

#include "superstar/berezin.hpp"
#include "superstar/error.hpp"
#include "superstar/starprod.hpp"

namespace superstar {

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return 0.0;
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

cplx extrapolate(const std::vector<double>& x, const std::vector<cplx>& y) {
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) w *= -x[j] / (x[i] - x[j]);
    s += w * y[i];
  }
  return s;
}

/// ∂_μ f at z, μ over the m even then n odd coordinates.
std::vector<Grassmann> all_derivatives(const SuperFunction& f, const RVec& z) {
  const int m = f.m(), n = f.n();
  std::vector<Grassmann> d(m + n, Grassmann(n));
  for (const auto& [I, c] : f.comps()) {
    auto g = c.gradient(z);
    for (int a = 0; a < m; ++a) d[a].add_term(I, g[a]);
  }
  Grassmann v = f.eval(z);
  for (int i = 0; i < n; ++i) d[m + i] = v.left_derivative(i);
  return d;
}

}  // namespace

Grassmann poisson_expression(const DeformationParams& p, const SuperFunction& f1, const SuperFunction& f2,
                             const RVec& z, double prefactor) {
  const int pf = f1.parity();
  if (pf < 0) throw Error(Error::Kind::NonHomogeneous, "Poisson expression needs homogeneous f1");
  const Eigen::MatrixXd winv = p.omega_tilde().inverse();
  auto d1 = all_derivatives(f1, z), d2 = all_derivatives(f2, z);
  Grassmann s(p.n);
  const int dim = p.m + p.n;
  for (int mu = 0; mu < dim; ++mu) {
    const int pmu = mu >= p.m ? 1 : 0;
    const double sg = (pf && pmu) ? -1.0 : 1.0;
    for (int nu = 0; nu < dim; ++nu) {
      if (winv(nu, mu) == 0.0) continue;
      s += cplx(sg * winv(nu, mu)) * (d1[mu] * d2[nu]);
    }
  }
  return cplx(0.0, -prefactor) * s;
}

CommutativeLimitReport commutative_limit_check(const DeformationParams& p, const SuperFunction& f1,
                                               const SuperFunction& f2, const std::vector<double>& thetas,
                                               const std::vector<RVec>& points) {
  if (f1.parity() < 0 || f2.parity() < 0)
    throw Error(Error::Kind::NonHomogeneous, "commutative limit needs homogeneous inputs");
  CommutativeLimitReport rep;
  rep.thetas = thetas;
  rep.stated_prefactor = std::pow(1 + p.alpha, p.n * p.n - 2 * p.n) / std::pow(p.alpha, p.n);

  const std::size_t dimK = std::size_t{1} << p.n;
  // samples[θ][point][K]
  std::vector<std::vector<std::vector<cplx>>> brk, dif;
  std::vector<std::vector<cplx>> unit(points.size(), std::vector<cplx>(dimK));
  for (std::size_t q = 0; q < points.size(); ++q) {
    Grassmann u = poisson_expression(p, f1, f2, points[q], 1.0);
    for (std::size_t K = 0; K < dimK; ++K) unit[q][K] = u.coeff(K);
  }
  for (double th : thetas) {
    DeformationParams pt(th, p.alpha, p.m, p.n);
    SuperFunction prod = star(pt, f1, f2);
    SuperFunction point = super_mul(f1, f2);
    SuperFunction br = star_bracket(pt, f1, f2);
    std::vector<std::vector<cplx>> b(points.size(), std::vector<cplx>(dimK)), d = b;
    double e = 0.0;
    for (std::size_t q = 0; q < points.size(); ++q) {
      Grassmann gp = prod.eval(points[q]) - point.eval(points[q]);
      Grassmann gb = br.eval(points[q]);
      for (std::size_t K = 0; K < dimK; ++K) {
        d[q][K] = gp.coeff(K);
        b[q][K] = gb.coeff(K) / th;
      }
      e = std::max(e, gp.max_abs());
    }
    rep.product_error.push_back(e);
    brk.push_back(std::move(b));
    dif.push_back(std::move(d));
  }

  cplx num{}, den{};
  std::vector<std::vector<cplx>> limit(points.size(), std::vector<cplx>(dimK));
  for (std::size_t q = 0; q < points.size(); ++q)
    for (std::size_t K = 0; K < dimK; ++K) {
      std::vector<cplx> yb, yd;
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        yb.push_back(brk[t][q][K]);
        yd.push_back(dif[t][q][K]);
      }
      limit[q][K] = extrapolate(thetas, yb);
      rep.product_limit_discrepancy = std::max(rep.product_limit_discrepancy, std::abs(extrapolate(thetas, yd)));
      num += std::conj(unit[q][K]) * limit[q][K];
      den += std::norm(unit[q][K]);
    }
  rep.fitted_prefactor = den.real() > 0 ? num / den : cplx(1.0);

  for (std::size_t t = 0; t < thetas.size(); ++t) {
    double es = 0.0, ef = 0.0;
    for (std::size_t q = 0; q < points.size(); ++q)
      for (std::size_t K = 0; K < dimK; ++K) {
        es = std::max(es, std::abs(brk[t][q][K] - rep.stated_prefactor * unit[q][K]));
        ef = std::max(ef, std::abs(brk[t][q][K] - rep.fitted_prefactor * unit[q][K]));
      }
    rep.bracket_error.push_back(es);
    rep.fitted_error.push_back(ef);
  }
  for (std::size_t q = 0; q < points.size(); ++q)
    for (std::size_t K = 0; K < dimK; ++K)
      rep.bracket_limit_discrepancy =
          std::max(rep.bracket_limit_discrepancy, std::abs(limit[q][K] - rep.stated_prefactor * unit[q][K]));
  rep.product_rate = fit_slope(thetas, rep.product_error);
  rep.bracket_rate = fit_slope(thetas, rep.bracket_error);
  rep.fitted_bracket_rate = fit_slope(thetas, rep.fitted_error);
  return rep;
}

TracialReport tracial_check(const DeformationParams& p, const SuperFunction& f1, const SuperFunction& f2,
                            const std::vector<RVec>& points, std::optional<double> box_volume) {
  TracialReport r;
  SuperFunction fg = star(p, f1, f2);
  r.trace_star = berezin_integrate(fg, box_volume);
  r.trace_pointwise = berezin_integrate(super_mul(f1, f2), box_volume);
  r.trace_residual = std::abs(r.trace_star - r.trace_pointwise) / std::max(1.0, std::abs(r.trace_pointwise));

  SuperFunction lhs = super_conj(fg);
  SuperFunction rhs(p.m, p.n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      SuperFunction pa = parity_part(f1, a), pb = parity_part(f2, b);
      if (pa.comps().empty() || pb.comps().empty()) continue;
      SuperFunction t = star(p, super_conj(pb), super_conj(pa));
      rhs = super_add(rhs, super_scale(t, (a && b) ? -1.0 : 1.0));
    }
  double scale = 1.0;
  for (const auto& z : points) scale = std::max(scale, lhs.eval(z).max_abs());
  r.conj_residual = max_distance(lhs, rhs, points) / scale;
  return r;
}

AffineSuperMap AffineSuperMap::translation(const RVec& t, int n) {
  const int m = static_cast<int>(t.size());
  return {Eigen::MatrixXd::Identity(m, m), Eigen::MatrixXd::Identity(n, n), t};
}

SuperFunction pullback(const AffineSuperMap& phi, const SuperFunction& f) {
  const int m = f.m(), n = f.n();
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(phi.t.data(), m);
  auto even = [&](const CoeffFn& c) -> CoeffFn {
    switch (c.backend()) {
      case Backend::PlaneWave: {
        std::vector<PlaneWave> out;
        for (const auto& w : c.plane_waves().terms()) {
          Eigen::VectorXd k = Eigen::Map<const Eigen::VectorXd>(w.k.data(), m);
          Eigen::VectorXd k2 = phi.S.transpose() * k;
          out.push_back({RVec(k2.data(), k2.data() + m), w.a * std::polar(1.0, k.dot(t))});
        }
        return PlaneWaveSum(m, std::move(out));
      }
      case Backend::Gaussian: {
        std::vector<GaussianTerm> out;
        const Eigen::MatrixXcd S = phi.S.cast<cplx>();
        const Eigen::VectorXcd tc = t.cast<cplx>();
        for (const auto& g : c.gaussians().terms()) {
          GaussianTerm h;
          h.A = S.transpose() * g.A * S;
          h.b = S.transpose() * (g.b - g.A * tc);
          h.c = g.c * std::exp(-0.5 * (tc.transpose() * g.A * tc)(0) + (g.b.transpose() * tc)(0));
          out.push_back(std::move(h));
        }
        return GaussianSum(m, std::move(out));
      }
      case Backend::Grid: {
        const GridFn& g = c.grid();
        std::vector<RVec> pts(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
          RVec z = g.point(i);
          Eigen::VectorXd zz = phi.S * Eigen::Map<const Eigen::VectorXd>(z.data(), m) + t;
          pts[i] = RVec(zz.data(), zz.data() + m);
        }
        return GridFn(m, g.half_width(), g.points_per_axis(), g.interpolate(pts));
      }
    }
    return c;
  };
  std::vector<Grassmann> images(n, Grassmann(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) images[i].add_term(Mask{1} << j, phi.R(i, j));
  SuperFunction r(m, n);
  for (const auto& [I, c] : f.comps()) {
    CoeffFn e = even(c);
    Grassmann img = Grassmann::monomial(n, I).substitute(images);
    for (const auto& [K, v] : img.terms()) r.add_to(K, coeff_scale(e, v));
  }
  return r;
}

SymmetryReport symmetry_check(const DeformationParams& p, const AffineSuperMap& phi, const SuperFunction& f1,
                              const SuperFunction& f2, const std::vector<RVec>& points) {
  SymmetryReport rep;
  if (phi.S.rows() != p.m || phi.S.cols() != p.m || phi.R.rows() != p.n || phi.R.cols() != p.n ||
      static_cast<int>(phi.t.size()) != p.m) {
    rep.message = "map has the wrong shape";
    return rep;
  }
  const Eigen::MatrixXd w0 = p.omega0();
  double d_even = (phi.S.transpose() * w0 * phi.S - w0).cwiseAbs().maxCoeff();
  double d_odd = p.n ? (phi.R.transpose() * phi.R - Eigen::MatrixXd::Identity(p.n, p.n)).cwiseAbs().maxCoeff() : 0.0;
  rep.symplectic_defect = std::max(p.m ? d_even : 0.0, d_odd);
  if (rep.symplectic_defect > 1e-10) {
    rep.message = "map does not preserve the rescaled symplectic form";
    return rep;
  }
  rep.precondition_ok = true;
  SuperFunction lhs = pullback(phi, star(p, f1, f2));
  SuperFunction rhs = star(p, pullback(phi, f1), pullback(phi, f2));
  rep.residual = max_distance(lhs, rhs, points);
  return rep;
}

}  // namespace superstar
