#include "superstar/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "superstar/error.hpp"

namespace superstar {

namespace {

constexpr double kPi = std::numbers::pi;

bool same_k(const RVec& a, const RVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12 * (1.0 + std::abs(a[i]))) return false;
  return true;
}

void require_dim(int a, int b) {
  if (a != b) throw Error(Error::Kind::BackendMismatch, "coefficient dimensions differ");
}

int signed_mode(int n, int N) { return n < (N + 1) / 2 ? n : n - N; }

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::PlaneWave: return "plane_wave";
    case Backend::Gaussian: return "gaussian";
    case Backend::Grid: return "grid";
  }
  return "?";
}

PlaneWaveSum::PlaneWaveSum(int m, std::vector<PlaneWave> terms) : m_(m), terms_(std::move(terms)) {
  for (const auto& t : terms_) require_dim(static_cast<int>(t.k.size()), m_);
  normalize();
}

PlaneWaveSum PlaneWaveSum::constant(int m, cplx c) { return PlaneWaveSum(m, {{RVec(m, 0.0), c}}); }

PlaneWaveSum PlaneWaveSum::wave(const RVec& k, cplx a) {
  return PlaneWaveSum(static_cast<int>(k.size()), {{k, a}});
}

void PlaneWaveSum::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const PlaneWave& x, const PlaneWave& y) { return x.k < y.k; });
  std::vector<PlaneWave> out;
  for (auto& t : terms_) {
    if (!out.empty() && same_k(out.back().k, t.k)) out.back().a += t.a;
    else out.push_back(std::move(t));
  }
  std::erase_if(out, [](const PlaneWave& t) { return t.a == cplx{}; });
  terms_ = std::move(out);
}

cplx PlaneWaveSum::eval(const RVec& z) const {
  cplx s{};
  for (const auto& t : terms_) {
    double ph = 0.0;
    for (int i = 0; i < m_; ++i) ph += t.k[i] * z[i];
    s += t.a * std::polar(1.0, ph);
  }
  return s;
}

std::vector<cplx> PlaneWaveSum::gradient(const RVec& z) const {
  std::vector<cplx> g(m_);
  for (const auto& t : terms_) {
    double ph = 0.0;
    for (int i = 0; i < m_; ++i) ph += t.k[i] * z[i];
    cplx v = t.a * std::polar(1.0, ph);
    for (int i = 0; i < m_; ++i) g[i] += cplx(0.0, t.k[i]) * v;
  }
  return g;
}

GaussianSum::GaussianSum(int m, std::vector<GaussianTerm> terms) : m_(m), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.A.rows() != m_ || t.A.cols() != m_ || t.b.size() != m_)
      throw Error(Error::Kind::Precondition, "Gaussian term has wrong shape");
  }
}

GaussianSum GaussianSum::gaussian(const Eigen::MatrixXd& P, const RVec& z0, const RVec& k, cplx amp) {
  const int m = static_cast<int>(P.rows());
  Eigen::VectorXd c0 = Eigen::Map<const Eigen::VectorXd>(z0.data(), m);
  Eigen::VectorXd kv = Eigen::Map<const Eigen::VectorXd>(k.data(), m);
  GaussianTerm t;
  t.A = P.cast<cplx>();
  t.b = (P * c0).cast<cplx>() + cplx(0, 1) * kv.cast<cplx>();
  t.c = amp * std::exp(-0.5 * c0.dot(P * c0));
  return GaussianSum(m, {t});
}

GaussianSum GaussianSum::isotropic(int m, double sigma, const RVec& z0, cplx amp) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m) / (sigma * sigma);
  return gaussian(P, z0, RVec(m, 0.0), amp);
}

GaussianSum GaussianSum::plane_wave(const RVec& k, cplx a) {
  const int m = static_cast<int>(k.size());
  GaussianTerm t;
  t.A = Eigen::MatrixXcd::Zero(m, m);
  t.b = Eigen::VectorXcd(m);
  for (int i = 0; i < m; ++i) t.b[i] = cplx(0.0, k[i]);
  t.c = a;
  return GaussianSum(m, {t});
}

GaussianSum GaussianSum::from_plane_waves(const PlaneWaveSum& p) {
  std::vector<GaussianTerm> terms;
  for (const auto& w : p.terms()) terms.push_back(plane_wave(w.k, w.a).terms()[0]);
  return GaussianSum(p.dim(), std::move(terms));
}

cplx GaussianSum::eval(const RVec& z) const {
  // zv is real, so zv.dot(·) (which conjugates zv) is the plain bilinear form.
  Eigen::VectorXcd zv = Eigen::Map<const Eigen::VectorXd>(z.data(), m_).cast<cplx>();
  cplx s{};
  for (const auto& t : terms_) s += t.c * std::exp(-0.5 * zv.dot(t.A * zv) + zv.dot(t.b));
  return s;
}

std::vector<cplx> GaussianSum::gradient(const RVec& z) const {
  Eigen::VectorXcd zv = Eigen::Map<const Eigen::VectorXd>(z.data(), m_).cast<cplx>();
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m_);
  for (const auto& t : terms_) {
    cplx v = t.c * std::exp(-0.5 * zv.dot(t.A * zv) + zv.dot(t.b));
    g += v * (t.b - t.A * zv);
  }
  return std::vector<cplx>(g.data(), g.data() + m_);
}

GridFn::GridFn(int m, double L, int N) : GridFn(m, L, N, {}) {}

GridFn::GridFn(int m, double L, int N, std::vector<cplx> samples)
    : m_(m), L_(L), N_(N), samples_(std::move(samples)) {
  if (m < 1 || L <= 0.0 || N < 2 || N % 2 != 0)
    throw Error(Error::Kind::Precondition, "GridFn needs m ≥ 1, L > 0 and even N ≥ 2");
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(N);
  if (samples_.empty()) samples_.assign(total, cplx{});
  if (samples_.size() != total) throw Error(Error::Kind::Precondition, "GridFn sample count mismatch");
}

RVec GridFn::point(std::size_t flat) const {
  RVec z(m_);
  for (int a = m_ - 1; a >= 0; --a) {
    z[a] = node(static_cast<int>(flat % N_));
    flat /= N_;
  }
  return z;
}

bool GridFn::same_grid(const GridFn& o) const { return m_ == o.m_ && N_ == o.N_ && L_ == o.L_; }

std::vector<cplx> GridFn::spectrum() const {
  std::vector<cplx> s = samples_;
  fft::transform(s.data(), std::vector<int>(m_, N_), -1);
  const double norm = 1.0 / static_cast<double>(s.size());
  for (std::size_t f = 0; f < s.size(); ++f) {
    std::size_t r = f;
    int parity = 0;
    for (int a = 0; a < m_; ++a) {
      parity += static_cast<int>(r % N_);
      r /= N_;
    }
    s[f] *= (parity & 1) ? -norm : norm;
  }
  return s;
}

std::vector<cplx> GridFn::interpolate(const std::vector<RVec>& pts) const {
  const std::vector<cplx> c = spectrum();
  std::vector<cplx> out(pts.size());
  std::vector<std::vector<cplx>> e(m_, std::vector<cplx>(N_));
  for (std::size_t p = 0; p < pts.size(); ++p) {
    for (int a = 0; a < m_; ++a) {
      for (int n = 0; n < N_; ++n) {
        if (n == N_ / 2) {
          e[a][n] = std::cos(kPi * (N_ / 2) / L_ * pts[p][a]);
        } else {
          e[a][n] = std::polar(1.0, kPi * signed_mode(n, N_) / L_ * pts[p][a]);
        }
      }
    }
    cplx s{};
    for (std::size_t f = 0; f < c.size(); ++f) {
      std::size_t r = f;
      cplx term = c[f];
      for (int a = m_ - 1; a >= 0; --a) {
        term *= e[a][r % N_];
        r /= N_;
      }
      s += term;
    }
    out[p] = s;
  }
  return out;
}

cplx GridFn::eval(const RVec& z) const {
  const double h = spacing();
  std::size_t flat = 0;
  bool on_node = true;
  for (int a = 0; a < m_; ++a) {
    double t = (z[a] + L_) / h;
    double r = std::round(t);
    if (std::abs(t - r) > 1e-12 || r < 0 || r >= N_) {
      on_node = false;
      break;
    }
    flat = flat * N_ + static_cast<std::size_t>(r);
  }
  if (on_node) return samples_[flat];
  return interpolate({z})[0];
}

GridFn GridFn::derivative(int axis) const {
  std::vector<cplx> c = spectrum();
  std::size_t stride = 1;
  for (int a = axis + 1; a < m_; ++a) stride *= N_;
  for (std::size_t f = 0; f < c.size(); ++f) {
    int n = static_cast<int>((f / stride) % N_);
    if (n == N_ / 2) c[f] = 0.0;
    else c[f] *= cplx(0.0, kPi * signed_mode(n, N_) / L_);
  }
  for (std::size_t f = 0; f < c.size(); ++f) {
    std::size_t r = f;
    int parity = 0;
    for (int a = 0; a < m_; ++a) {
      parity += static_cast<int>(r % N_);
      r /= N_;
    }
    if (parity & 1) c[f] = -c[f];
  }
  fft::transform(c.data(), std::vector<int>(m_, N_), +1);
  return GridFn(m_, L_, N_, std::move(c));
}

double GridFn::spectral_tail() const {
  const std::vector<cplx> c = spectrum();
  double peak = 0.0, tail = 0.0;
  const int cut = (3 * N_) / 8;
  for (std::size_t f = 0; f < c.size(); ++f) {
    double v = std::abs(c[f]);
    peak = std::max(peak, v);
    std::size_t r = f;
    bool outer = false;
    for (int a = 0; a < m_; ++a) {
      if (std::abs(signed_mode(static_cast<int>(r % N_), N_)) > cut) outer = true;
      r /= N_;
    }
    if (outer) tail = std::max(tail, v);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

double GridFn::boundary_fraction() const {
  double peak = 0.0, edge = 0.0;
  for (std::size_t f = 0; f < samples_.size(); ++f) {
    double v = std::abs(samples_[f]);
    peak = std::max(peak, v);
    std::size_t r = f;
    bool face = false;
    for (int a = 0; a < m_; ++a) {
      if (r % N_ == 0) face = true;
      r /= N_;
    }
    if (face) edge = std::max(edge, v);
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

int CoeffFn::dim() const {
  return std::visit([](const auto& x) { return x.dim(); }, v_);
}

bool CoeffFn::is_zero() const {
  switch (backend()) {
    case Backend::PlaneWave: return plane_waves().terms().empty();
    case Backend::Gaussian: return gaussians().terms().empty();
    case Backend::Grid:
      return std::all_of(grid().samples().begin(), grid().samples().end(),
                         [](cplx c) { return c == cplx{}; });
  }
  return true;
}

cplx CoeffFn::eval(const RVec& z) const {
  return std::visit([&](const auto& x) { return x.eval(z); }, v_);
}

std::vector<cplx> CoeffFn::gradient(const RVec& z) const {
  switch (backend()) {
    case Backend::PlaneWave: return plane_waves().gradient(z);
    case Backend::Gaussian: return gaussians().gradient(z);
    case Backend::Grid: {
      std::vector<cplx> g(grid().dim());
      for (int a = 0; a < grid().dim(); ++a) g[a] = grid().derivative(a).eval(z);
      return g;
    }
  }
  return {};
}

CoeffFn coeff_add(const CoeffFn& a, const CoeffFn& b) {
  if (a.backend() != b.backend())
    throw Error(Error::Kind::BackendMismatch, std::string("cannot add ") + backend_name(a.backend()) +
                                                  " and " + backend_name(b.backend()));
  require_dim(a.dim(), b.dim());
  switch (a.backend()) {
    case Backend::PlaneWave: {
      auto t = a.plane_waves().terms();
      t.insert(t.end(), b.plane_waves().terms().begin(), b.plane_waves().terms().end());
      return PlaneWaveSum(a.dim(), std::move(t));
    }
    case Backend::Gaussian: {
      auto t = a.gaussians().terms();
      for (const auto& x : b.gaussians().terms()) {
        auto it = std::find_if(t.begin(), t.end(), [&](const GaussianTerm& y) {
          return y.A == x.A && y.b == x.b;
        });
        if (it != t.end()) it->c += x.c;
        else t.push_back(x);
      }
      std::erase_if(t, [](const GaussianTerm& y) { return y.c == cplx{}; });
      return GaussianSum(a.dim(), std::move(t));
    }
    case Backend::Grid: {
      if (!a.grid().same_grid(b.grid())) throw Error(Error::Kind::BackendMismatch, "grid shapes differ");
      auto s = a.grid().samples();
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.grid().samples()[i];
      const auto& g = a.grid();
      return GridFn(g.dim(), g.half_width(), g.points_per_axis(), std::move(s));
    }
  }
  return a;
}

CoeffFn coeff_scale(const CoeffFn& a, cplx s) {
  switch (a.backend()) {
    case Backend::PlaneWave: {
      auto t = a.plane_waves().terms();
      for (auto& x : t) x.a *= s;
      return PlaneWaveSum(a.dim(), std::move(t));
    }
    case Backend::Gaussian: {
      auto t = a.gaussians().terms();
      for (auto& x : t) x.c *= s;
      std::erase_if(t, [](const GaussianTerm& y) { return y.c == cplx{}; });
      return GaussianSum(a.dim(), std::move(t));
    }
    case Backend::Grid: {
      auto v = a.grid().samples();
      for (auto& x : v) x *= s;
      const auto& g = a.grid();
      return GridFn(g.dim(), g.half_width(), g.points_per_axis(), std::move(v));
    }
  }
  return a;
}

CoeffFn coeff_mul(const CoeffFn& a, const CoeffFn& b) {
  if (a.backend() != b.backend())
    throw Error(Error::Kind::BackendMismatch, std::string("cannot multiply ") + backend_name(a.backend()) +
                                                  " and " + backend_name(b.backend()));
  require_dim(a.dim(), b.dim());
  switch (a.backend()) {
    case Backend::PlaneWave: {
      std::vector<PlaneWave> t;
      for (const auto& x : a.plane_waves().terms()) {
        for (const auto& y : b.plane_waves().terms()) {
          RVec k(x.k);
          for (std::size_t i = 0; i < k.size(); ++i) k[i] += y.k[i];
          t.push_back({std::move(k), x.a * y.a});
        }
      }
      return PlaneWaveSum(a.dim(), std::move(t));
    }
    case Backend::Gaussian: {
      std::vector<GaussianTerm> t;
      for (const auto& x : a.gaussians().terms())
        for (const auto& y : b.gaussians().terms()) t.push_back({x.c * y.c, x.A + y.A, x.b + y.b});
      return GaussianSum(a.dim(), std::move(t));
    }
    case Backend::Grid: {
      if (!a.grid().same_grid(b.grid())) throw Error(Error::Kind::BackendMismatch, "grid shapes differ");
      auto s = a.grid().samples();
      for (std::size_t i = 0; i < s.size(); ++i) s[i] *= b.grid().samples()[i];
      const auto& g = a.grid();
      return GridFn(g.dim(), g.half_width(), g.points_per_axis(), std::move(s));
    }
  }
  return a;
}

CoeffFn coeff_conj(const CoeffFn& a) {
  switch (a.backend()) {
    case Backend::PlaneWave: {
      auto t = a.plane_waves().terms();
      for (auto& x : t) {
        for (auto& k : x.k) k = -k;
        x.a = std::conj(x.a);
      }
      return PlaneWaveSum(a.dim(), std::move(t));
    }
    case Backend::Gaussian: {
      auto t = a.gaussians().terms();
      for (auto& x : t) {
        x.c = std::conj(x.c);
        x.A = x.A.conjugate();
        x.b = x.b.conjugate();
      }
      return GaussianSum(a.dim(), std::move(t));
    }
    case Backend::Grid: {
      auto v = a.grid().samples();
      for (auto& x : v) x = std::conj(x);
      const auto& g = a.grid();
      return GridFn(g.dim(), g.half_width(), g.points_per_axis(), std::move(v));
    }
  }
  return a;
}

CoeffFn coeff_convert(const CoeffFn& f, GridSpec spec, double tol) {
  const int m = f.dim();
  if (f.backend() == Backend::Grid) {
    if (f.grid().half_width() == spec.L && f.grid().points_per_axis() == spec.N) return f;
    throw Error(Error::Kind::Unsupported, "grid-to-grid resampling is not a conversion");
  }
  GridFn g(m, spec.L, spec.N);
  const double nyquist = kPi * spec.N / (2.0 * spec.L);
  if (f.backend() == Backend::PlaneWave) {
    for (const auto& t : f.plane_waves().terms()) {
      for (double k : t.k) {
        if (std::abs(k) >= nyquist)
          throw Error(Error::Kind::Aliasing, "plane wave frequency at or above the grid Nyquist bound");
        double n = k * spec.L / kPi;
        if (std::abs(n - std::round(n)) > 1e-9)
          throw Error(Error::Kind::Aliasing, "plane wave is not periodic on the box");
      }
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i) g.samples()[i] = f.eval(g.point(i));
  if (f.backend() == Backend::Gaussian) {
    if (g.boundary_fraction() > tol)
      throw Error(Error::Kind::Aliasing, "Gaussian does not decay at the box faces (periodic wrap)");
    if (g.spectral_tail() > tol)
      throw Error(Error::Kind::Aliasing, "Gaussian spectrum not resolved by the grid");
  }
  return g;
}

cplx sqrt_det_principal(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  cplx s = 1.0;
  for (int i = 0; i < M.rows(); ++i) s *= std::sqrt(es.eigenvalues()[i]);
  return s;
}

cplx coeff_integral(const CoeffFn& f, std::optional<double> box_volume) {
  switch (f.backend()) {
    case Backend::PlaneWave: {
      cplx s{};
      for (const auto& t : f.plane_waves().terms()) {
        bool zero = std::all_of(t.k.begin(), t.k.end(), [](double k) { return k == 0.0; });
        if (zero) s += t.a;
      }
      if (!box_volume) {
        if (f.plane_waves().terms().empty()) return 0.0;
        throw Error(Error::Kind::NotIntegrable, "plane-wave integral needs a box volume");
      }
      return s * *box_volume;
    }
    case Backend::Gaussian: {
      const int m = f.dim();
      cplx s{};
      for (const auto& t : f.gaussians().terms()) {
        Eigen::MatrixXd herm = t.A.real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(herm);
        if (m > 0 && es.eigenvalues().minCoeff() <= 0.0)
          throw Error(Error::Kind::NotIntegrable, "Gaussian term is not integrable (Re A not positive)");
        Eigen::VectorXcd y = t.A.partialPivLu().solve(t.b);
        cplx q = (t.b.transpose() * y)(0);
        s += t.c * std::pow(2.0 * kPi, 0.5 * m) / sqrt_det_principal(t.A) * std::exp(0.5 * q);
      }
      return s;
    }
    case Backend::Grid: {
      const auto& g = f.grid();
      cplx s{};
      for (cplx v : g.samples()) s += v;
      return s * std::pow(g.spacing(), g.dim());
    }
  }
  return 0.0;
}

}  // namespace superstar
