#include "superstar/qft.hpp"

#include <cmath>

#include "superstar/error.hpp"
#include "superstar/parallel.hpp"
#include "superstar/starprod.hpp"

namespace superstar {

namespace {

double rel(double a, double b) {
  double d = std::abs(a - b);
  if (d == 0.0) return 0.0;
  return d / std::max(std::abs(b), 1e-300);
}

double rel(cplx a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// ℓ = Σ_I s_I x̃_μ ξ^I times F (ℓ on the left or the right), exact for the linear factor.
SuperFunction affine_star(const DeformationParams& p, const std::map<Mask, cplx>& ell, const RVec& grad,
                          const SuperFunction& F, bool ell_on_left) {
  auto table = odd_star_table(p);
  SuperFunction r(p.m, p.n);
  for (const auto& [I, s] : ell)
    for (const auto& [J, fj] : F.comps()) {
      GridFn g = moyal_affine(p.theta, 0.0, grad, fj.grid(), ell_on_left);
      Grassmann odd = ell_on_left ? table->product(I, J) : table->product(J, I);
      for (const auto& [K, c] : odd.terms()) r.add_to(K, coeff_scale(g, s * c));
    }
  return r;
}

/// Graded star bracket [ℓ, F] with ℓ = Σ_I s_I x̃_μ ξ^I, both split into parity parts.
SuperFunction affine_bracket(const DeformationParams& p, const std::map<Mask, cplx>& ell, const RVec& grad,
                             const SuperFunction& F) {
  SuperFunction r(p.m, p.n);
  for (int a = 0; a < 2; ++a) {
    std::map<Mask, cplx> la;
    for (const auto& [I, s] : ell)
      if (mask_parity(I) == a) la[I] = s;
    if (la.empty()) continue;
    for (int b = 0; b < 2; ++b) {
      SuperFunction fb = parity_part(F, b);
      if (fb.comps().empty()) continue;
      r = super_add(r, affine_star(p, la, grad, fb, true));
      r = super_sub(r, super_scale(affine_star(p, la, grad, fb, false), (a && b) ? -1.0 : 1.0));
    }
  }
  return r;
}

cplx trace(const SuperFunction& f) {
  const CoeffFn* c = f.get(0);
  return c ? box_integral(c->grid()) : cplx{};
}

}  // namespace

QftParams::QftParams(double theta_, double alpha_, double b_, double nu_, double Lambda_, int m_)
    : theta(theta_), alpha(alpha_), b(b_), nu(nu_), Lambda(Lambda_), m(m_) {
  if (!(theta > 0.0)) throw Error(Error::Kind::Precondition, "theta must be positive");
  if (alpha == 0.0 || alpha == -1.0) throw Error(Error::Kind::Precondition, "alpha must avoid 0 and -1");
  if (m <= 0 || m % 2) throw Error(Error::Kind::Precondition, "m must be even and positive");
}

double QftParams::omega_pred() const { return alpha * theta * b * b / ((1 + alpha) * (1 + alpha)); }

double QftParams::lambda_pred() const {
  double o = omega_pred();
  return Lambda * (1 + o * o);
}

FieldConfig make_field(const CoeffFn& f, GridSpec g, double decay) {
  const int m = f.dim();
  GridFn grid(m, g.L, g.N);
  double peak = 0.0, imag = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx v = f.eval(grid.point(i));
    grid.samples()[i] = v.real();
    peak = std::max(peak, std::abs(v));
    imag = std::max(imag, std::abs(v.imag()));
  }
  if (imag > 1e-12 * std::max(peak, 1.0)) throw Error(Error::Kind::Precondition, "field is not real-valued");
  if (grid.boundary_fraction() > decay)
    throw Error(Error::Kind::Precondition, "field does not decay on the box faces");
  return {std::move(grid)};
}

RVec xtilde_gradient(double theta, int m, int mu) {
  // ω0(x, e_μ) = x_x·(e_μ)_w − x_w·(e_μ)_x.
  const int d = m / 2;
  RVec g(m, 0.0);
  if (mu < d) g[d + mu] = -2.0 / theta;
  else g[mu - d] = 2.0 / theta;
  return g;
}

cplx box_integral(const GridFn& f) {
  cplx s{};
  for (const auto& v : f.samples()) s += v;
  return s * std::pow(f.spacing(), f.dim());
}

HarmonicTerms action_harmonic(const QftParams& q, double Omega, double lambda, const FieldConfig& f) {
  const GridFn& phi = f.phi;
  const int m = phi.dim();
  if (m != q.m) throw Error(Error::Kind::Precondition, "field dimension differs from m");
  HarmonicTerms t;
  GridFn xt2(m, phi.half_width(), phi.points_per_axis());
  for (int mu = 0; mu < m; ++mu) {
    RVec g = xtilde_gradient(q.theta, m, mu);
    GridFn l = moyal_affine(q.theta, 0.0, g, phi, true), r = moyal_affine(q.theta, 0.0, g, phi, false);
    GridFn d(m, phi.half_width(), phi.points_per_axis());
    for (std::size_t i = 0; i < d.size(); ++i) d.samples()[i] = cplx(0.0, -0.5) * (l.samples()[i] - r.samples()[i]);
    t.kinetic += 0.5 * box_integral(moyal_grid_fast(q.theta, d, d)).real();
    for (std::size_t i = 0; i < xt2.size(); ++i) {
      RVec z = phi.point(i);
      double x = 0.0;
      for (int a = 0; a < m; ++a) x += g[a] * z[a];
      xt2.samples()[i] += x * x * phi.samples()[i] * phi.samples()[i];
    }
  }
  t.harmonic = 0.5 * Omega * Omega * box_integral(xt2).real();
  GridFn sq(m, phi.half_width(), phi.points_per_axis());
  for (std::size_t i = 0; i < sq.size(); ++i) sq.samples()[i] = phi.samples()[i] * phi.samples()[i];
  t.mass = 0.5 * q.nu * q.nu * box_integral(sq).real();
  GridFn pp = moyal_grid_fast(q.theta, phi, phi);
  t.quartic = lambda * box_integral(moyal_grid_fast(q.theta, moyal_grid_fast(q.theta, pp, phi), phi)).real();
  GridFn pp2 = pp;
  for (std::size_t i = 0; i < pp2.size(); ++i) pp2.samples()[i] *= pp.samples()[i];
  t.quartic_paired = lambda * box_integral(pp2).real();
  return t;
}

SuperfieldTerms action_superfield(const QftParams& q, const FieldConfig& f) {
  const DeformationParams p = q.super_params();
  const GridFn& phi = f.phi;
  SuperFunction Phi = SuperFunction::even(phi, 1);
  if (q.b != 0.0) Phi.set(1, coeff_scale(phi, q.b));

  SuperfieldTerms t;
  auto both = [&](const SuperFunction& X, cplx& star_part) {
    SuperFunction cx = super_conj(X);
    cplx pw = trace(super_mul(cx, X));
    star_part = trace(star(p, cx, X));
    t.imag_residual = std::max(t.imag_residual, std::abs(pw.imag()) / std::max(1.0, std::abs(pw.real())));
    return pw.real();
  };

  std::map<Mask, cplx> ell{{0, cplx(0.0, -0.5)}};
  if (q.b != 0.0) ell[1] = cplx(0.0, -0.5 * q.b);
  cplx ks{};
  for (int mu = 0; mu < q.m; ++mu) {
    SuperFunction X = affine_bracket(p, ell, xtilde_gradient(q.theta, q.m, mu), Phi);
    cplx s;
    t.kinetic += 0.5 * both(X, s);
    ks += 0.5 * s;
  }
  t.kinetic_star = ks;
  cplx ms;
  t.mass = 0.5 * q.nu * q.nu * both(Phi, ms);
  t.mass_star = 0.5 * q.nu * q.nu * ms;
  cplx qs;
  t.quartic = q.Lambda * both(star(p, Phi, Phi), qs);
  t.quartic_star = q.Lambda * qs;
  return t;
}

double QftComparison::max_residual() const {
  return std::max({kinetic_residual, mass_residual, quartic_residual, total_residual});
}

QftComparison qft_compare(const QftParams& q, const FieldConfig& f) {
  QftComparison c;
  c.params = q;
  c.omega_pred = q.omega_pred();
  c.lambda_pred = q.lambda_pred();
  // All terms are linear in Ω² and λ, so one evaluation at Ω = λ = 1 serves both the comparison and the fit.
  const HarmonicTerms unit = action_harmonic(q, 1.0, 1.0, f);
  c.harmonic = unit;
  c.harmonic.harmonic *= c.omega_pred * c.omega_pred;
  c.harmonic.quartic *= c.lambda_pred;
  c.harmonic.quartic_paired *= c.lambda_pred;
  c.superfield = action_superfield(q, f);
  const auto& h = c.harmonic;
  const auto& s = c.superfield;
  c.kinetic_residual = rel(s.kinetic, h.kinetic + h.harmonic);
  c.mass_residual = rel(s.mass, h.mass);
  c.quartic_residual = rel(s.quartic, h.quartic);
  c.total_residual = rel(s.total(), h.total());
  c.kinetic_residual_star = rel(s.kinetic_star, h.kinetic + h.harmonic);
  c.mass_residual_star = rel(s.mass_star, h.mass);
  c.quartic_residual_star = rel(s.quartic_star, h.quartic);
  c.total_residual_star = rel(s.total_star(), h.total());

  c.omega_fit = unit.harmonic > 0 ? std::sqrt(std::max(0.0, (s.kinetic - h.kinetic) / unit.harmonic)) : 0.0;
  c.lambda_fit = unit.quartic != 0.0 ? s.quartic / unit.quartic : 0.0;
  c.traciality_residual = rel(h.quartic_paired, h.quartic);
  return c;
}

std::vector<QftComparison> qft_sweep(double nu, double Lambda, const std::vector<double>& thetas,
                                     const std::vector<double>& alphas, const std::vector<double>& bs,
                                     const std::vector<FieldConfig>& fields) {
  std::vector<QftParams> pts;
  std::vector<std::size_t> which;
  for (double th : thetas)
    for (double al : alphas)
      for (double b : bs)
        for (std::size_t i = 0; i < fields.size(); ++i) {
          pts.emplace_back(th, al, b, nu, Lambda);
          which.push_back(i);
        }
  std::vector<QftComparison> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = qft_compare(pts[i], fields[which[i]]); });
  return out;
}

}  // namespace superstar
