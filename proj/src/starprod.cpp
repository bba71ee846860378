#include "superstar/starprod.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fft.hpp"
#include "superstar/error.hpp"
#include "superstar/parallel.hpp"

namespace superstar {

namespace {

constexpr double kPi = std::numbers::pi;

int signed_mode(int n, int N) { return n < (N + 1) / 2 ? n : n - N; }

std::shared_ptr<const OddStarTable> compute_table(const DeformationParams& p) {
  const int n = p.n;
  const int G = 3 * n;
  const Mask blk = (Mask{1} << n) - 1;
  Grassmann Q(G);
  auto gen = [G](int i) { return Grassmann::generator(G, i); };
  for (int i = 0; i < n; ++i) Q += gen(i) * gen(n + i) + gen(n + i) * gen(2 * n + i) + gen(2 * n + i) * gen(i);
  Grassmann E = (cplx(0.0, -p.odd_beta()) * Q).exp();

  const std::size_t dim = std::size_t{1} << n;
  std::vector<cplx> c(dim * dim * dim);
  const cplx kappa = p.kappa_odd();
  const Mask B1 = blk << n, B2 = blk << (2 * n);
  for (const auto& [e, v] : E.terms()) {
    Mask e0 = e & blk, e1 = (e >> n) & blk, e2 = (e >> (2 * n)) & blk;
    Mask I = blk & ~e1, J = blk & ~e2;
    Mask mI = I << n, mJ = J << (2 * n);
    // ξ1^I ξ2^J · (E term), then ∫dξ2 (inner, left) and ∫dξ1 (left).
    int s = merge_sign(mI, mJ) * merge_sign(mI | mJ, e);
    Mask full = mI | mJ | e;
    Mask rest = full & ~B2;
    s *= merge_sign(B2, rest);
    s *= merge_sign(B1, rest & ~B1);
    c[((I << n | J) << n) | e0] += kappa * static_cast<double>(s) * v;
  }
  return std::make_shared<OddStarTable>(n, p.theta, p.alpha, std::move(c));
}

/// Polynomial extrapolation to 0 through (x_i, y_i); also returns the change from dropping the largest x.
std::pair<cplx, double> extrapolate_zero(const std::vector<double>& x, const std::vector<cplx>& y) {
  auto lagrange = [](const std::vector<double>& xs, const std::vector<cplx>& ys) {
    cplx s{};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double w = 1.0;
      for (std::size_t j = 0; j < xs.size(); ++j)
        if (j != i) w *= (0.0 - xs[j]) / (xs[i] - xs[j]);
      s += w * ys[i];
    }
    return s;
  };
  cplx full = lagrange(x, y);
  if (x.size() < 2) return {full, 0.0};
  std::vector<double> x2(x.begin() + 1, x.end());
  std::vector<cplx> y2(y.begin() + 1, y.end());
  return {full, std::abs(full - lagrange(x2, y2))};
}

void require_match(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g) {
  if (f.m() != p.m || g.m() != p.m || f.n() != p.n || g.n() != p.n)
    throw Error(Error::Kind::Precondition, "superfunction dimensions do not match the deformation parameters");
  auto a = f.backend(), b = g.backend();
  if (a && b && *a != *b)
    throw Error(Error::Kind::BackendMismatch, std::string("star of ") + backend_name(*a) + " and " + backend_name(*b));
}

using EvenProduct = std::function<CoeffFn(const CoeffFn&, const CoeffFn&)>;

SuperFunction combine(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g,
                      const EvenProduct& even) {
  auto table = odd_star_table(p);
  const Mask dim = Mask{1} << p.n;
  SuperFunction r(p.m, p.n);
  for (const auto& [I, a] : f.comps()) {
    for (const auto& [J, b] : g.comps()) {
      CoeffFn h = even(a, b);
      for (Mask K = 0; K < dim; ++K) {
        cplx c = table->at(I, J, K);
        if (c != cplx{}) r.add_to(K, coeff_scale(h, c));
      }
    }
  }
  return r;
}

PlaneWaveSum moyal_plane_waves(double theta, const PlaneWaveSum& f, const PlaneWaveSum& g) {
  const double s = moyal_phase_sign() * theta / 2.0;
  std::vector<PlaneWave> out;
  for (const auto& x : f.terms())
    for (const auto& y : g.terms()) {
      RVec k = x.k;
      for (std::size_t i = 0; i < k.size(); ++i) k[i] += y.k[i];
      out.push_back({std::move(k), x.a * y.a * std::polar(1.0, s * omega0(x.k, y.k))});
    }
  return PlaneWaveSum(f.dim(), std::move(out));
}

/// ε-regularized direct evaluation of one plane-wave pair, extrapolated to ε = 0.
PlaneWave direct_plane_wave_pair(double theta, const PlaneWave& x, const PlaneWave& y, const DirectOptions& opts,
                                 double& residual) {
  const int m = static_cast<int>(x.k.size());
  std::vector<std::vector<cplx>> params;
  for (double eps : opts.eps) {
    GaussianTerm F{x.a, eps * Eigen::MatrixXcd::Identity(m, m), Eigen::VectorXcd(m)};
    GaussianTerm G{y.a, eps * Eigen::MatrixXcd::Identity(m, m), Eigen::VectorXcd(m)};
    for (int i = 0; i < m; ++i) {
      F.b[i] = cplx(0.0, x.k[i]);
      G.b[i] = cplx(0.0, y.k[i]);
    }
    GaussianTerm out = moyal_gaussian(theta, F, G);
    std::vector<cplx> v = {out.c};
    for (int i = 0; i < m; ++i) v.push_back(out.b[i]);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) v.push_back(out.A(i, j));
    params.push_back(std::move(v));
  }
  std::vector<cplx> limit(params[0].size());
  double res = 0.0;
  for (std::size_t q = 0; q < limit.size(); ++q) {
    std::vector<cplx> ys;
    for (const auto& v : params) ys.push_back(v[q]);
    auto [val, r] = extrapolate_zero(opts.eps, ys);
    limit[q] = val;
    res = std::max(res, r);
  }
  double leftover = 0.0;
  PlaneWave w{RVec(m), limit[0]};
  for (int i = 0; i < m; ++i) {
    w.k[i] = limit[1 + i].imag();
    leftover = std::max(leftover, std::abs(limit[1 + i].real()));
  }
  for (int i = 0; i < m * m; ++i) leftover = std::max(leftover, std::abs(limit[1 + m + i]));
  residual = std::max(res, leftover);
  return w;
}

}  // namespace

OddStarTable::OddStarTable(int n, double theta, double alpha, std::vector<cplx> c)
    : n_(n), theta_(theta), alpha_(alpha), c_(std::move(c)) {}

Grassmann OddStarTable::product(Mask I, Mask J) const {
  Grassmann g(n_);
  for (Mask K = 0; K < (Mask{1} << n_); ++K) g.add_term(K, at(I, J, K));
  return g;
}

Grassmann OddStarTable::star(const Grassmann& a, const Grassmann& b) const {
  Grassmann r(n_);
  for (const auto& [I, x] : a.terms())
    for (const auto& [J, y] : b.terms()) r += (x * y) * product(I, J);
  return r;
}

cplx OddStarTable::clifford_scalar() const { return n_ == 0 ? cplx{} : at(1, 1, 0); }

std::shared_ptr<const OddStarTable> odd_star_table(const DeformationParams& p) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const OddStarTable>> cache;
  if (p.n > 6) throw Error(Error::Kind::Precondition, "odd star table supports n <= 6");
  auto key = std::make_tuple(p.n, p.theta, p.alpha);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto t = compute_table(p);
  std::lock_guard lock(mu);
  return cache.emplace(key, t).first->second;
}

int moyal_phase_sign() {
  static const int sign = [] {
    // e_{(1,0)} ⋆ e_{(0,1)} at θ = 1 must equal exp(σ i/2) e_{(1,1)}.
    double res = 0.0;
    PlaneWave w = direct_plane_wave_pair(1.0, {{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, DirectOptions{}, res);
    int s = w.a.imag() > 0 ? 1 : -1;
    if (std::abs(w.a - std::polar(1.0, 0.5 * s)) > 1e-8 || std::abs(w.k[0] - 1.0) > 1e-8)
      throw Error(Error::Kind::InvariantViolation, "plane-wave phase oracle is inconsistent");
    return s;
  }();
  return sign;
}

GaussianTerm moyal_gaussian(double theta, const GaussianTerm& f, const GaussianTerm& g) {
  const int m = static_cast<int>(f.A.rows());
  const int d = m / 2;
  Eigen::MatrixXcd w0 = Eigen::MatrixXcd::Zero(m, m);
  w0.topRightCorner(d, d) = Eigen::MatrixXcd::Identity(d, d);
  w0.bottomLeftCorner(d, d) = -Eigen::MatrixXcd::Identity(d, d);
  const cplx c(0.0, 2.0 / theta);

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  M.topLeftCorner(m, m) = f.A;
  M.bottomRightCorner(m, m) = g.A;
  M.topRightCorner(m, m) = c * w0;
  M.bottomLeftCorner(m, m) = c * w0.transpose();
  Eigen::VectorXcd v0(2 * m);
  v0 << f.b, g.b;
  Eigen::MatrixXcd R(2 * m, m);
  R << c * w0, -c * w0;

  auto lu = M.fullPivLu();
  Eigen::MatrixXcd MR = lu.solve(R);
  Eigen::VectorXcd Mv = lu.solve(v0);
  GaussianTerm out;
  out.A = -R.transpose() * MR;
  out.A = 0.5 * (out.A + out.A.transpose()).eval();
  out.b = R.transpose() * Mv;
  const cplx quad = (v0.transpose() * Mv)(0);
  out.c = std::pow(kPi * theta, -1.0 * m) * std::pow(2.0 * kPi, m) * f.c * g.c / sqrt_det_principal(M) *
          std::exp(0.5 * quad);
  return out;
}

GridFn moyal_grid_direct(double theta, const GridFn& f, const GridFn& g) {
  if (f.dim() != 2 || !f.same_grid(g)) throw Error(Error::Kind::Unsupported, "grid direct star needs m = 2 on one grid");
  const int N = f.points_per_axis();
  const double h = f.spacing(), c = 2.0 / theta;
  Eigen::MatrixXcd G(N, N), F(N, N), Gm(N, N);
  for (int j = 0; j < N; ++j)
    for (int p = 0; p < N; ++p) {
      G(j, p) = std::polar(1.0, -c * f.node(j) * f.node(p));
      F(j, p) = f.samples()[static_cast<std::size_t>(j) * N + p];
      Gm(j, p) = g.samples()[static_cast<std::size_t>(j) * N + p];
    }
  const Eigen::MatrixXcd V = G.conjugate();
  const Eigen::MatrixXcd GmT = Gm.transpose();
  const double scale = std::pow(kPi * theta, -2.0) * std::pow(h, 4);
  GridFn out(2, f.half_width(), N);
  parallel_for(N, [&](std::size_t t) {
    const double w = f.node(static_cast<int>(t));
    Eigen::VectorXcd dw(N);
    for (int p = 0; p < N; ++p) dw[p] = std::polar(1.0, c * f.node(p) * w);
    Eigen::MatrixXcd T = G * (dw.asDiagonal() * F);
    Eigen::MatrixXcd P = GmT * (dw.conjugate().asDiagonal() * V);
    Eigen::MatrixXcd Q = T.cwiseProduct(P);
    Eigen::VectorXcd S = ((V * Q).cwiseProduct(V.conjugate())).rowwise().sum();
    for (int r = 0; r < N; ++r) out.samples()[static_cast<std::size_t>(r) * N + t] = scale * S[r];
  });
  return out;
}

GridFn moyal_grid_fast(double theta, const GridFn& f, const GridFn& g) {
  if (f.dim() != 2 || !f.same_grid(g)) throw Error(Error::Kind::Unsupported, "grid star needs m = 2 on one grid");
  const int N = f.points_per_axis();
  const double L = f.half_width();
  const double half = moyal_phase_sign() * theta / 2.0;
  const std::vector<cplx> fh = f.spectrum(), gh = g.spectrum();
  std::vector<double> k(N);
  for (int i = 0; i < N; ++i) k[i] = kPi * signed_mode(i, N) / L;
  auto flip = [](int i) { return (i & 1) ? -1.0 : 1.0; };
  // E[n·N + b] = (−1)^n e^{i·half·k_n k_b}
  std::vector<cplx> E(static_cast<std::size_t>(N) * N);
  for (int n1 = 0; n1 < N; ++n1)
    for (int b = 0; b < N; ++b) E[static_cast<std::size_t>(n1) * N + b] = flip(n1) * std::polar(1.0, k[n1] * half * k[b]);

  const int workers = std::max(1, std::min(thread_count(), N));
  std::vector<std::vector<cplx>> acc(workers, std::vector<cplx>(static_cast<std::size_t>(N) * N));
  parallel_for(workers, [&](std::size_t wk) {
    std::vector<cplx> A(static_cast<std::size_t>(N) * N), B(A.size());
    auto& D = acc[wk];
    for (int a = static_cast<int>(wk); a < N; a += workers) {
      for (int b = 0; b < N; ++b) {
        for (int n1 = 0; n1 < N; ++n1) {
          const std::size_t r = static_cast<std::size_t>(n1) * N;
          A[static_cast<std::size_t>(b) * N + n1] = fh[r + a] * E[r + b];
          B[static_cast<std::size_t>(b) * N + n1] = gh[r + b] * std::conj(E[r + a]);
        }
      }
      fft::transform(A.data(), {N}, +1, N);
      fft::transform(B.data(), {N}, +1, N);
      for (int b = 0; b < N; ++b) {
        const int s = (a + b) % N;
        const double sg = flip(a + b);
        for (int i = 0; i < N; ++i)
          D[static_cast<std::size_t>(i) * N + s] +=
              sg * A[static_cast<std::size_t>(b) * N + i] * B[static_cast<std::size_t>(b) * N + i];
      }
    }
  });
  std::vector<cplx> D(static_cast<std::size_t>(N) * N);
  for (const auto& part : acc)
    for (std::size_t i = 0; i < D.size(); ++i) D[i] += part[i];
  fft::transform(D.data(), {N}, +1, N);
  return GridFn(2, L, N, std::move(D));
}

GridFn moyal_affine(double theta, cplx c, const RVec& grad, const GridFn& f, bool affine_on_left) {
  const int m = f.dim();
  const int d = m / 2;
  if (static_cast<int>(grad.size()) != m || m % 2) throw Error(Error::Kind::Precondition, "affine gradient size");
  std::vector<GridFn> df;
  for (int a = 0; a < m; ++a) df.push_back(f.derivative(a));
  const cplx pre = cplx(0.0, -moyal_phase_sign() * theta / 2.0);
  GridFn out(m, f.half_width(), f.points_per_axis());
  for (std::size_t i = 0; i < f.size(); ++i) {
    RVec z = f.point(i);
    cplx ell = c;
    for (int a = 0; a < m; ++a) ell += grad[a] * z[a];
    // (∇u)ᵀω0(∇v) with u the left factor.
    cplx bracket{};
    for (int j = 0; j < d; ++j) {
      cplx fx = df[j].samples()[i], fw = df[d + j].samples()[i];
      bracket += affine_on_left ? grad[j] * fw - grad[d + j] * fx : fx * grad[d + j] - fw * grad[j];
    }
    out.samples()[i] = ell * f.samples()[i] + pre * bracket;
  }
  return out;
}

DirectResult star_direct(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g,
                         const DirectOptions& opts) {
  require_match(p, f, g);
  DirectResult res;
  auto backend = f.backend() ? f.backend() : g.backend();
  if (!backend) {
    res.value = SuperFunction(p.m, p.n);
    return res;
  }
  double worst = 0.0;
  EvenProduct even;
  switch (*backend) {
    case Backend::Gaussian:
      even = [&](const CoeffFn& a, const CoeffFn& b) -> CoeffFn {
        std::vector<GaussianTerm> t;
        for (const auto& x : a.gaussians().terms())
          for (const auto& y : b.gaussians().terms()) t.push_back(moyal_gaussian(p.theta, x, y));
        return GaussianSum(p.m, std::move(t));
      };
      break;
    case Backend::PlaneWave:
      even = [&](const CoeffFn& a, const CoeffFn& b) -> CoeffFn {
        std::vector<PlaneWave> t;
        for (const auto& x : a.plane_waves().terms())
          for (const auto& y : b.plane_waves().terms()) {
            double r = 0.0;
            t.push_back(direct_plane_wave_pair(p.theta, x, y, opts, r));
            worst = std::max(worst, r);
          }
        return PlaneWaveSum(p.m, std::move(t));
      };
      break;
    case Backend::Grid:
      even = [&](const CoeffFn& a, const CoeffFn& b) -> CoeffFn {
        return moyal_grid_direct(p.theta, a.grid(), b.grid());
      };
      break;
  }
  res.value = combine(p, f, g, even);
  res.residual_estimate = worst;
  if (worst > opts.max_residual)
    throw Error(Error::Kind::Quadrature,
                "regularized direct star did not converge (residual " + std::to_string(worst) + ")");
  return res;
}

SuperFunction star_fast(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g) {
  require_match(p, f, g);
  auto backend = f.backend() ? f.backend() : g.backend();
  if (!backend) return SuperFunction(p.m, p.n);
  switch (*backend) {
    case Backend::PlaneWave:
      return combine(p, f, g, [&](const CoeffFn& a, const CoeffFn& b) -> CoeffFn {
        return moyal_plane_waves(p.theta, a.plane_waves(), b.plane_waves());
      });
    case Backend::Grid:
      return combine(p, f, g, [&](const CoeffFn& a, const CoeffFn& b) -> CoeffFn {
        return moyal_grid_fast(p.theta, a.grid(), b.grid());
      });
    case Backend::Gaussian: break;
  }
  throw Error(Error::Kind::BackendMismatch, "star_fast handles plane waves and grids only");
}

SuperFunction star(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g) {
  auto backend = f.backend() ? f.backend() : g.backend();
  if (backend && *backend == Backend::Gaussian) return star_direct(p, f, g).value;
  return star_fast(p, f, g);
}

SuperFunction star_bracket(const DeformationParams& p, const SuperFunction& f, const SuperFunction& g) {
  int pf = f.parity(), pg = g.parity();
  if (pf < 0 || pg < 0) throw Error(Error::Kind::NonHomogeneous, "graded bracket needs homogeneous inputs");
  SuperFunction fg = star(p, f, g), gf = star(p, g, f);
  return super_sub(fg, super_scale(gf, (pf && pg) ? -1.0 : 1.0));
}

}  // namespace superstar
