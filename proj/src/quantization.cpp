#include "superstar/quantization.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "superstar/error.hpp"
#include "superstar/quadrature.hpp"

namespace superstar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLeakFloor = 1e-12;

double op_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Grassmann embed(const Grassmann& lam, int gens, int offset) {
  Grassmann r(gens);
  for (const auto& [m, c] : lam.terms()) r.add_term(m << offset, c);
  return r;
}

Eigen::MatrixXcd columns_of(int gens, const std::function<Grassmann(Mask)>& image) {
  const Mask D = Mask{1} << gens;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(D, D);
  for (Mask col = 0; col < D; ++col) {
    const Grassmann img = image(col);
    for (const auto& [m, c] : img.terms()) {
      if (m >= D) throw Error(Error::Kind::InvariantViolation, "odd operator left its algebra");
      M(m, col) += c;
    }
  }
  return M;
}

void check_element(const GroupElement& g, const TruncatedBasis& b) {
  if (static_cast<int>(g.x.size()) != b.even_dims || static_cast<int>(g.w.size()) != b.even_dims ||
      static_cast<int>(g.xi.size()) != b.n)
    throw Error(Error::Kind::Precondition, "group element does not match the basis");
  if (g.aux != b.aux) throw Error(Error::Kind::Precondition, "group element uses a different auxiliary algebra");
}

Eigen::MatrixXcd even_translation(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b) {
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 0; j < b.even_dims; ++j) {
    const double x = g.x[j], w = g.w[j];
    V = kron(V, shift_modulate(b.levels, b.length, x, -w / p.theta, x * w / (2 * p.theta)));
  }
  return V;
}

Eigen::MatrixXcd odd_translation(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b) {
  const int G = b.n + b.aux;
  std::vector<Grassmann> images;
  Grassmann phase = embed(g.a, G, b.n);
  for (int i = 0; i < b.n; ++i) {
    Grassmann xi = embed(g.xi[i], G, b.n);
    images.push_back(Grassmann::generator(G, i) - xi);
    phase += xi * Grassmann::generator(G, i);
  }
  for (int j = 0; j < b.aux; ++j) images.push_back(Grassmann::generator(G, b.n + j));
  const Grassmann factor = (cplx(0, 1.0 / p.theta) * phase).exp();
  return columns_of(G, [&](Mask col) { return factor * Grassmann::monomial(G, col).substitute(images); });
}

Eigen::MatrixXcd even_parity(const TruncatedBasis& b) {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(1, 1);
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(b.levels, b.levels);
  for (int k = 0; k < b.levels; ++k) one(k, k) = (k % 2) ? -1.0 : 1.0;
  for (int j = 0; j < b.even_dims; ++j) P = kron(P, one);
  return P;
}

Eigen::MatrixXcd plane_wave_omega(const DeformationParams& p, const RVec& k, const TruncatedBasis& b) {
  const int h = b.even_dims;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 0; j < h; ++j) {
    const double a = k[j], bw = k[h + j];
    M = kron(M, shift_modulate(b.levels, b.length, p.theta * bw, a, -p.theta * a * bw / 2));
  }
  return M;
}

Eigen::MatrixXcd gaussian_kernel_omega(const DeformationParams& p, const GaussianTerm& t, const TruncatedBasis& b,
                                       int nq) {
  const cplx axx = t.A(0, 0), axw = t.A(0, 1), aww = t.A(1, 1);
  if (aww.real() <= 0.0)
    throw Error(Error::Kind::Unsupported, "Gaussian coefficient must decay in w for the kernel route");
  const QuadRule q = gauss_hermite(nq);
  const double ell = b.length, r2 = std::sqrt(2.0);
  Eigen::MatrixXd Psi(nq, b.levels);
  std::vector<double> z(nq);
  for (int i = 0; i < nq; ++i) {
    auto psi = hermite_functions(b.levels - 1, r2 * q.nodes[i]);
    for (int k = 0; k < b.levels; ++k) Psi(i, k) = psi[k];
    z[i] = r2 * ell * q.nodes[i];
  }
  const cplx pref = p.gamma_even() * 0.5 * t.c * std::sqrt(2.0 * kPi / aww);
  Eigen::MatrixXcd K(nq, nq);
  for (int i = 0; i < nq; ++i)
    for (int l = 0; l < nq; ++l) {
      const double x0 = z[i], y = z[l], x = 0.5 * (x0 + y);
      const cplx beta = -axw * x + t.b(1) + cplx(0, (y - x0) / p.theta);
      K(i, l) = q.weights[i] * q.weights[l] * pref *
                std::exp(-0.5 * axx * x * x + t.b(0) * x + beta * beta / (2.0 * aww));
    }
  return 2.0 * ell * Psi.transpose().cast<cplx>() * K * Psi.cast<cplx>();
}

}  // namespace

std::size_t TruncatedBasis::even_size() const {
  std::size_t s = 1;
  for (int j = 0; j < even_dims; ++j) s *= levels;
  return s;
}

std::vector<int> TruncatedBasis::grading() const {
  std::vector<int> g(dim());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = mask_parity(i % odd_size());
  return g;
}

std::vector<std::size_t> TruncatedBasis::low_indices(int reliable) const {
  std::vector<std::size_t> r;
  for (std::size_t e = 0; e < even_size(); ++e) {
    bool ok = true;
    for (std::size_t rest = e, j = 0; j < static_cast<std::size_t>(even_dims); ++j, rest /= levels)
      ok = ok && static_cast<int>(rest % levels) < reliable;
    if (!ok) continue;
    for (std::size_t o = 0; o < odd_size(); ++o) r.push_back(e * odd_size() + o);
  }
  return r;
}

TruncatedBasis make_basis(const DeformationParams& p, int levels, int aux) {
  if (levels < 1) throw Error(Error::Kind::Precondition, "basis needs at least one level");
  if (p.n + aux > 20) throw Error(Error::Kind::Precondition, "too many odd generators for a dense basis");
  return {levels, p.m / 2, p.n, aux, std::sqrt(p.theta)};
}

GroupElement group_identity(int m, int n, int aux) {
  GroupElement g;
  g.x.assign(m / 2, 0.0);
  g.w.assign(m / 2, 0.0);
  g.xi.assign(n, Grassmann(aux));
  g.a = Grassmann(aux);
  g.aux = aux;
  return g;
}

GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
  if (g.aux != h.aux || g.x.size() != h.x.size() || g.xi.size() != h.xi.size())
    throw Error(Error::Kind::Precondition, "group elements live in different groups");
  GroupElement r = g;
  double om = 0.0;
  for (std::size_t j = 0; j < g.x.size(); ++j) {
    r.x[j] += h.x[j];
    r.w[j] += h.w[j];
    om += g.x[j] * h.w[j] - g.w[j] * h.x[j];
  }
  r.a = g.a + h.a + Grassmann::scalar(g.aux, 0.5 * om);
  for (std::size_t i = 0; i < g.xi.size(); ++i) {
    r.xi[i] = g.xi[i] + h.xi[i];
    r.a += g.xi[i] * h.xi[i];
  }
  return r;
}

GroupElement group_inverse(const GroupElement& g) {
  GroupElement r = g;
  for (auto& v : r.x) v = -v;
  for (auto& v : r.w) v = -v;
  for (auto& v : r.xi) v *= -1.0;
  r.a *= -1.0;
  return r;
}

GroupElement shift_aux(const GroupElement& g, int offset, int total_aux) {
  GroupElement r = g;
  for (auto& v : r.xi) v = embed(v, total_aux, offset);
  r.a = embed(g.a, total_aux, offset);
  r.aux = total_aux;
  return r;
}

Eigen::MatrixXcd shift_modulate(int levels, double length, double s, double q, double c) {
  const int nq = 2 * levels + 40;
  const QuadRule rule = gauss_hermite(nq);
  const double sh = s / (2 * length);
  Eigen::MatrixXd A(nq, levels), B(nq, levels);
  Eigen::VectorXcd ph(nq);
  for (int i = 0; i < nq; ++i) {
    const double t = rule.nodes[i];
    auto pa = hermite_functions(levels - 1, t + sh), pb = hermite_functions(levels - 1, t - sh);
    for (int k = 0; k < levels; ++k) {
      A(i, k) = pa[k];
      B(i, k) = pb[k];
    }
    ph(i) = rule.weights[i] * std::polar(1.0, q * (s / 2 + length * t) + c);
  }
  return A.transpose().cast<cplx>() * ph.asDiagonal() * B.cast<cplx>();
}

SuperOperator rep_U(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b) {
  check_element(g, b);
  return make_operator(kron(even_translation(p, g, b), odd_translation(p, g, b)), b.grading());
}

SuperOperator sigma_op(const DeformationParams& p, const TruncatedBasis& b) {
  const int G = b.n + b.aux, G2 = G + b.n;
  std::vector<Grassmann> images;
  Grassmann pair(G2);
  for (int i = 0; i < b.n; ++i) {
    images.push_back(Grassmann::generator(G2, G + i));
    pair += Grassmann::generator(G2, G + i) * Grassmann::generator(G2, i);
  }
  for (int j = 0; j < b.aux; ++j) images.push_back(Grassmann::generator(G2, b.n + j));
  const Grassmann E = (cplx(0, -p.alpha / p.theta) * pair).exp();
  const Mask block = ((Mask{1} << b.n) - 1) << G;
  Eigen::MatrixXcd S = columns_of(G, [&](Mask col) {
    Grassmann r = (E * Grassmann::monomial(G2, col).substitute(images)).berezin(block, Side::Left);
    Grassmann out(G);
    for (const auto& [m, c] : r.terms()) out.add_term(m, c);
    return out;
  });
  return make_operator(kron(p.gamma_even() * even_parity(b), p.gamma_odd() * S), b.grading());
}

SuperOperator omega_point(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b) {
  Eigen::MatrixXcd M = rep_U(p, g, b).mat * sigma_op(p, b).mat * rep_U(p, group_inverse(g), b).mat;
  return make_operator(std::move(M), b.grading());
}

double translation_leakage(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b,
                           int reliable) {
  Eigen::MatrixXcd V = even_translation(p, g, b);
  TruncatedBasis even_only = b;
  even_only.n = even_only.aux = 0;
  double leak = 0.0;
  for (std::size_t k : even_only.low_indices(reliable)) leak = std::max(leak, 1.0 - V.col(k).squaredNorm());
  return std::max(leak, 0.0);
}

Eigen::MatrixXcd odd_omega_factor(const DeformationParams& p, Mask I, int aux) {
  const int n = p.n, G = n + aux, G3 = G + 2 * n;
  auto xi = [&](int i) { return Grassmann::generator(G3, G + i); };
  auto xi1 = [&](int i) { return Grassmann::generator(G3, G + n + i); };
  std::vector<Grassmann> images;
  Grassmann ex(G3);
  for (int i = 0; i < n; ++i) {
    images.push_back(xi(i) + xi1(i));
    Grassmann x0 = Grassmann::generator(G3, i);
    ex += xi(i) * x0 - p.alpha * (xi1(i) * x0) - (p.alpha + 1) * (xi(i) * xi1(i));
  }
  for (int j = 0; j < aux; ++j) images.push_back(Grassmann::generator(G3, n + j));
  const Grassmann E = (cplx(0, 1.0 / p.theta) * ex).exp();
  const Mask full = (Mask{1} << n) - 1;
  const Grassmann lead = Grassmann::monomial(G3, I << G);
  return p.gamma_odd() * columns_of(G, [&](Mask col) {
           Grassmann inner = (E * Grassmann::monomial(G3, col).substitute(images)).berezin(full << (G + n));
           Grassmann r = (lead * inner).berezin(full << G);
           Grassmann out(G);
           for (const auto& [m, c] : r.terms()) out.add_term(m, c);
           return out;
         });
}

EvenOmega even_omega(const DeformationParams& p, const CoeffFn& f, const TruncatedBasis& b) {
  const std::size_t E = b.even_size();
  EvenOmega r{Eigen::MatrixXcd::Zero(E, E), 0.0};
  switch (f.backend()) {
    case Backend::PlaneWave:
      for (const auto& t : f.plane_waves().terms()) r.mat += t.a * plane_wave_omega(p, t.k, b);
      return r;
    case Backend::Gaussian:
      for (const auto& t : f.gaussians().terms()) {
        if (t.A.norm() == 0.0) {
          if (t.b.real().norm() != 0.0)
            throw Error(Error::Kind::NotIntegrable, "exponentially growing coefficient");
          RVec k(t.b.size());
          for (Eigen::Index i = 0; i < t.b.size(); ++i) k[i] = t.b(i).imag();
          r.mat += t.c * plane_wave_omega(p, k, b);
          continue;
        }
        if (b.even_dims != 1)
          throw Error(Error::Kind::Unsupported, "Gaussian quantization is implemented for m = 2");
        const int nq = 2 * b.levels + 40;
        Eigen::MatrixXcd lo = gaussian_kernel_omega(p, t, b, nq);
        Eigen::MatrixXcd hi = gaussian_kernel_omega(p, t, b, nq + nq / 2);
        r.quadrature_error += (hi - lo).cwiseAbs().maxCoeff();
        r.mat += hi;
      }
      return r;
    case Backend::Grid:
      break;
  }
  throw Error(Error::Kind::Unsupported, "grid coefficients cannot be quantized");
}

OmegaResult omega_map(const DeformationParams& p, const SuperFunction& f, const TruncatedBasis& b) {
  if (f.n() != b.n || f.m() != 2 * b.even_dims)
    throw Error(Error::Kind::Precondition, "superfunction does not match the basis");
  OmegaResult r{make_operator(Eigen::MatrixXcd::Zero(b.dim(), b.dim()), b.grading()), 0.0};
  for (const auto& [I, c] : f.comps()) {
    EvenOmega e = even_omega(p, c, b);
    r.quadrature_error += e.quadrature_error;
    r.op.mat += kron(e.mat, odd_omega_factor(p, I, b.aux));
  }
  r.op = make_operator(std::move(r.op.mat), b.grading());
  return r;
}

std::vector<std::pair<Mask, Eigen::MatrixXcd>> superhermitian_gram(const TruncatedBasis& b) {
  const int G = b.n + b.aux;
  const Mask D = Mask{1} << G, xi0 = (Mask{1} << b.n) - 1;
  std::map<Mask, Eigen::MatrixXcd> odd;
  for (Mask i = 0; i < D; ++i)
    for (Mask j = 0; j < D; ++j) {
      Grassmann pr = (Grassmann::monomial(G, i).conj() * Grassmann::monomial(G, j)).berezin(xi0, Side::Left);
      for (const auto& [m, c] : pr.terms()) {
        auto it = odd.try_emplace(m, Eigen::MatrixXcd::Zero(D, D)).first;
        it->second(i, j) += c;
      }
    }
  std::vector<std::pair<Mask, Eigen::MatrixXcd>> r;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(b.even_size(), b.even_size());
  for (auto& [m, g] : odd) r.emplace_back(m, kron(I, g));
  return r;
}

double restricted_distance(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                           const std::vector<std::size_t>& idx) {
  double d = 0.0;
  for (std::size_t j : idx)
    for (std::size_t i : idx) d = std::max(d, std::abs(A(i, j) - B(i, j)));
  return d;
}

UnitarityReport unitarity_check(const DeformationParams& p, const GroupElement& g, const TruncatedBasis& b,
                                int reliable) {
  check_element(g, b);
  // U = V ⊗ T and G = 1 ⊗ g, so both residuals factor through the even and odd blocks.
  UnitarityReport r;
  const Eigen::MatrixXcd V = even_translation(p, g, b), T = odd_translation(p, g, b);
  TruncatedBasis even_only = b;
  even_only.n = even_only.aux = 0;
  const auto low = even_only.low_indices(reliable);
  const Eigen::MatrixXcd VV = V.adjoint() * V;
  auto combine = [&](const Eigen::MatrixXcd& odd_new, const Eigen::MatrixXcd& odd_old) {
    double d = 0.0;
    for (std::size_t i : low)
      for (std::size_t j : low) {
        const cplx e = VV(i, j);
        const double delta = i == j ? 1.0 : 0.0;
        d = std::max(d, (e * odd_new - delta * odd_old).cwiseAbs().maxCoeff());
      }
    return d;
  };
  TruncatedBasis odd_only = b;
  odd_only.levels = 1;
  odd_only.even_dims = 0;
  for (const auto& [m, G] : superhermitian_gram(odd_only))
    r.superhermitian_residual = std::max(r.superhermitian_residual, combine(T.adjoint() * G * T, G));
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(T.rows(), T.cols());
  r.hermitian_residual = combine(T.adjoint() * T, one);
  r.leakage = translation_leakage(p, g, b, reliable);
  double gnorm = 0.0;
  for (const auto& [m, G] : superhermitian_gram(odd_only)) gnorm += op_norm(G);
  r.bound = op_norm(T) * op_norm(T) * gnorm * r.leakage + kLeakFloor;
  return r;
}

RepresentationReport representation_check(const DeformationParams& p, const GroupElement& g1, const GroupElement& g2,
                                          const TruncatedBasis& b, int reliable) {
  check_element(g1, b);
  check_element(g2, b);
  RepresentationReport r;
  const GroupElement g12 = group_mul(g1, g2);
  const Eigen::MatrixXcd VV = even_translation(p, g1, b) * even_translation(p, g2, b);
  const Eigen::MatrixXcd TT = odd_translation(p, g1, b) * odd_translation(p, g2, b);
  const Eigen::MatrixXcd V12 = even_translation(p, g12, b), T12 = odd_translation(p, g12, b);
  TruncatedBasis even_only = b;
  even_only.n = even_only.aux = 0;
  const auto low = even_only.low_indices(reliable);
  for (std::size_t i : low)
    for (std::size_t j : low)
      r.residual = std::max(r.residual, (VV(i, j) * TT - V12(i, j) * T12).cwiseAbs().maxCoeff());
  const double t = op_norm(odd_translation(p, g1, b)) * op_norm(odd_translation(p, g2, b));
  r.bound = t * std::sqrt(translation_leakage(p, group_inverse(g1), b, reliable) *
                          translation_leakage(p, g2, b, reliable)) +
            kLeakFloor;
  return r;
}

}  // namespace superstar
