#include "superstar/udf_hopf.hpp"

#include <cmath>
#include <numbers>

#include "superstar/error.hpp"
#include "superstar/starprod.hpp"

namespace superstar {

namespace {

using Key = std::vector<Mode>;

RVec add_k(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RVec neg_k(const RVec& a) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

double wrap(double x) { return std::remainder(x, 2 * std::numbers::pi); }

/// Π_{i∈A} (g_i + s·g_{n+i}) on 2n generators, ascending; returns (low mask, high mask) → coefficient.
std::vector<std::tuple<Mask, Mask, cplx>> split_expand(Mask A, int n, double s) {
  Grassmann g = Grassmann::scalar(2 * n, 1.0);
  for (int i = 0; i < n; ++i) {
    if (!(A >> i & 1)) continue;
    Grassmann f = Grassmann::generator(2 * n, i) + s * Grassmann::generator(2 * n, n + i);
    g = g * f;
  }
  std::vector<std::tuple<Mask, Mask, cplx>> out;
  const Mask low = (Mask{1} << n) - 1;
  for (const auto& [M, c] : g.terms()) out.emplace_back(M & low, M >> n, c);
  return out;
}

ModeTensor single(int m, int n, Key key, cplx c) {
  ModeTensor t(m, n, static_cast<int>(key.size()));
  t.add(key, c);
  return t;
}

ModeTensor mode_tensor(const Mode& mo, int n) { return ModeTensor::basis(mo.k, mo.I, n); }

ModeTensor scalar_tensor(int m, int n, cplx c) { return single(m, n, {}, c); }

/// Pairs (A-mode, H-mode, coefficient) of χ(a).
std::vector<std::tuple<Mode, Mode, cplx>> coaction_terms(const GroupAction& A, const ModeTensor& a) {
  std::vector<std::tuple<Mode, Mode, cplx>> out;
  ModeTensor c = coact(A, a);
  for (const auto& [key, v] : c.terms) out.emplace_back(key[0], key[1], v);
  return out;
}

/// (h ⋆ g)(0) for H modes, through the star product of the corresponding superfunctions.
class PhaseCache {
 public:
  explicit PhaseCache(const DeformationParams& p) : p_(p) {}
  cplx operator()(const Mode& h, const Mode& g) {
    auto key = std::make_pair(h, g);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    SuperFunction fh = SuperFunction::monomial(PlaneWaveSum::wave(h.k), p_.n, h.I);
    SuperFunction fg = SuperFunction::monomial(PlaneWaveSum::wave(g.k), p_.n, g.I);
    cplx v = star(p_, fh, fg).eval(RVec(p_.m, 0.0)).body();
    cache_.emplace(key, v);
    return v;
  }

 private:
  DeformationParams p_;
  std::map<std::pair<Mode, Mode>, cplx> cache_;
};

void check_dims(const DeformationParams& p, const GroupAction& A) {
  if (p.m != A.m || p.n != A.n) throw Error(Error::Kind::Precondition, "action and deformation dimensions differ");
}

ModeTensor deformed_product_cached(PhaseCache& phase, const GroupAction& A, const ModeTensor& a,
                                   const ModeTensor& b) {
  ModeTensor r(a.m, a.n, 1);
  auto ta = coaction_terms(A, a), tb = coaction_terms(A, b);
  for (const auto& [ai, hi, ci] : ta)
    for (const auto& [bj, gj, cj] : tb) {
      int s = merge_sign(ai.I, bj.I);
      if (!s) continue;
      cplx ph = phase(hi, gj);
      if (ph == 0.0) continue;
      double sg = (mask_parity(hi.I) && mask_parity(bj.I)) ? -1.0 : 1.0;
      r.add({{add_k(ai.k, bj.k), ai.I | bj.I}}, sg * s * ci * cj * ph);
    }
  return r;
}

ModeTensor twist_cached(PhaseCache& phase, const GroupAction& A, const ModeTensor& ab) {
  ModeTensor r(ab.m, ab.n, 2);
  for (const auto& [key, c] : ab.terms) {
    auto ta = coaction_terms(A, mode_tensor(key[0], ab.n));
    auto tb = coaction_terms(A, mode_tensor(key[1], ab.n));
    for (const auto& [ai, hi, ci] : ta)
      for (const auto& [bj, gj, cj] : tb) {
        cplx ph = phase(hi, gj);
        if (ph == 0.0) continue;
        double sg = (mask_parity(hi.I) && mask_parity(bj.I)) ? -1.0 : 1.0;
        r.add({ai, bj}, sg * c * ci * cj * ph);
      }
  }
  return r;
}

}  // namespace

ModeTensor ModeTensor::basis(const RVec& k, Mask I, int n, cplx c) {
  return single(static_cast<int>(k.size()), n, {{k, I}}, c);
}

ModeTensor ModeTensor::unit(int m, int n) { return basis(RVec(m, 0.0), 0, n); }

void ModeTensor::add(const std::vector<Mode>& key, cplx c) {
  if (c == 0.0) return;
  auto [it, fresh] = terms.try_emplace(key, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0.0) terms.erase(it);
  }
}

ModeTensor& ModeTensor::operator+=(const ModeTensor& o) {
  for (const auto& [k, c] : o.terms) add(k, c);
  return *this;
}

ModeTensor& ModeTensor::operator-=(const ModeTensor& o) {
  for (const auto& [k, c] : o.terms) add(k, -c);
  return *this;
}

ModeTensor& ModeTensor::operator*=(cplx s) {
  if (s == 0.0) terms.clear();
  for (auto& [k, c] : terms) c *= s;
  return *this;
}

double ModeTensor::l1() const {
  double s = 0.0;
  for (const auto& [k, c] : terms) s += std::abs(c);
  return s;
}

ModeTensor operator+(ModeTensor a, const ModeTensor& b) { return a += b; }
ModeTensor operator-(ModeTensor a, const ModeTensor& b) { return a -= b; }
ModeTensor operator*(cplx s, ModeTensor a) { return a *= s; }

double max_coeff_distance(const ModeTensor& a, const ModeTensor& b) {
  double d = 0.0;
  for (const auto& [k, c] : (a - b).terms) d = std::max(d, std::abs(c));
  return d;
}

ModeTensor graded_product(const ModeTensor& a, const ModeTensor& b) {
  if (a.rank != b.rank) throw Error(Error::Kind::Precondition, "tensor ranks differ");
  ModeTensor r(a.m, a.n, a.rank);
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      int sign = 1, koszul = 0;
      Key key(a.rank);
      for (int i = 0; i < a.rank; ++i) {
        sign *= merge_sign(ka[i].I, kb[i].I);
        if (!sign) break;
        key[i] = {add_k(ka[i].k, kb[i].k), ka[i].I | kb[i].I};
        for (int j = i + 1; j < a.rank; ++j) koszul += mask_parity(kb[i].I) * mask_parity(ka[j].I);
      }
      if (!sign) continue;
      r.add(key, ((koszul & 1) ? -1.0 : 1.0) * sign * ca * cb);
    }
  return r;
}

ModeTensor apply_factor(const ModeTensor& t, int pos, const std::function<ModeTensor(const Mode&)>& f) {
  ModeTensor r(t.m, t.n, -1);
  for (const auto& [key, c] : t.terms) {
    ModeTensor img = f(key[pos]);
    if (r.rank < 0) r.rank = t.rank - 1 + img.rank;
    for (const auto& [ik, ic] : img.terms) {
      Key nk(key.begin(), key.begin() + pos);
      nk.insert(nk.end(), ik.begin(), ik.end());
      nk.insert(nk.end(), key.begin() + pos + 1, key.end());
      r.add(nk, c * ic);
    }
  }
  if (r.rank < 0) r.rank = t.rank - 1 + f(Mode{RVec(t.m, 0.0), 0}).rank;
  return r;
}

ModeTensor merge_factors(const ModeTensor& t, int pos) {
  ModeTensor r(t.m, t.n, t.rank - 1);
  for (const auto& [key, c] : t.terms) {
    int s = merge_sign(key[pos].I, key[pos + 1].I);
    if (!s) continue;
    Key nk(key.begin(), key.begin() + pos);
    nk.push_back({add_k(key[pos].k, key[pos + 1].k), key[pos].I | key[pos + 1].I});
    nk.insert(nk.end(), key.begin() + pos + 2, key.end());
    r.add(nk, double(s) * c);
  }
  return r;
}

ModeTensor hopf_product(const ModeTensor& a, const ModeTensor& b) { return graded_product(a, b); }

ModeTensor hopf_unit(int m, int n) { return ModeTensor::unit(m, n); }

namespace {

ModeTensor coproduct_mode(const Mode& mo, int n) {
  ModeTensor r(static_cast<int>(mo.k.size()), n, 2);
  for (const auto& [B, C, c] : split_expand(mo.I, n, 1.0)) r.add({{mo.k, B}, {mo.k, C}}, c);
  return r;
}

ModeTensor counit_mode(const Mode& mo, int n) {
  return scalar_tensor(static_cast<int>(mo.k.size()), n, mo.I == 0 ? 1.0 : 0.0);
}

ModeTensor antipode_mode(const Mode& mo, int n) {
  return ModeTensor::basis(neg_k(mo.k), mo.I, n, mask_parity(mo.I) ? -1.0 : 1.0);
}

}  // namespace

ModeTensor hopf_coproduct(const ModeTensor& a) {
  return apply_factor(a, 0, [&](const Mode& mo) { return coproduct_mode(mo, a.n); });
}

ModeTensor hopf_counit(const ModeTensor& a) {
  return apply_factor(a, 0, [&](const Mode& mo) { return counit_mode(mo, a.n); });
}

cplx hopf_counit_value(const ModeTensor& a) {
  ModeTensor e = hopf_counit(a);
  auto it = e.terms.find({});
  return it == e.terms.end() ? cplx{} : it->second;
}

ModeTensor hopf_antipode(const ModeTensor& a) {
  return apply_factor(a, 0, [&](const Mode& mo) { return antipode_mode(mo, a.n); });
}

double HopfReport::max() const {
  return std::max({associativity, unit, coassociativity, counit, coproduct_morphism, counit_morphism, antipode});
}

HopfReport hopf_check(const std::vector<ModeTensor>& basis) {
  HopfReport r;
  if (basis.empty()) return r;
  const int m = basis[0].m, n = basis[0].n;
  auto D = [n](const Mode& mo) { return coproduct_mode(mo, n); };
  auto E = [n](const Mode& mo) { return counit_mode(mo, n); };
  auto S = [n](const Mode& mo) { return antipode_mode(mo, n); };
  const ModeTensor one = hopf_unit(m, n);
  for (const auto& a : basis) {
    r.unit = std::max({r.unit, max_coeff_distance(hopf_product(one, a), a), max_coeff_distance(hopf_product(a, one), a)});
    ModeTensor d = hopf_coproduct(a);
    r.coassociativity = std::max(r.coassociativity, max_coeff_distance(apply_factor(d, 0, D), apply_factor(d, 1, D)));
    r.counit = std::max({r.counit, max_coeff_distance(apply_factor(d, 0, E), a),
                         max_coeff_distance(apply_factor(d, 1, E), a)});
    ModeTensor eps_one = hopf_counit_value(a) * one;
    r.antipode = std::max({r.antipode, max_coeff_distance(merge_factors(apply_factor(d, 0, S), 0), eps_one),
                           max_coeff_distance(merge_factors(apply_factor(d, 1, S), 0), eps_one)});
    for (const auto& b : basis) {
      ModeTensor ab = hopf_product(a, b);
      r.coproduct_morphism = std::max(
          r.coproduct_morphism, max_coeff_distance(hopf_coproduct(ab), graded_product(d, hopf_coproduct(b))));
      r.counit_morphism = std::max(r.counit_morphism,
                                   std::abs(hopf_counit_value(ab) - hopf_counit_value(a) * hopf_counit_value(b)));
      for (const auto& c : basis)
        r.associativity = std::max(r.associativity, max_coeff_distance(hopf_product(ab, c),
                                                                       hopf_product(a, hopf_product(b, c))));
    }
  }
  return r;
}

GroupAction torus_translation(int m, int n) {
  return {"torus", m, n, [n](const Mode& mo) {
            ModeTensor r(static_cast<int>(mo.k.size()), n, 2);
            for (const auto& [B, C, c] : split_expand(mo.I, n, -1.0)) r.add({{mo.k, B}, {neg_k(mo.k), C}}, c);
            return r;
          }};
}

GroupAction non_homomorphic_action(int m, int n) {
  return {"non-homomorphic", m, n, [m, n](const Mode& mo) {
            RVec q(m, 0.0);
            for (double v : mo.k) q[0] -= v * v;
            return single(m, n, {mo, {q, 0}}, 1.0);
          }};
}

GroupAction rescaling_action(int m, int n) {
  return {"rescaling", m, n, [m, n](const Mode& mo) {
            RVec q(m, 0.0);
            q[0] = 1.0;
            return single(m, n, {mo, {q, 0}}, 1.0);
          }};
}

ModeTensor coact(const GroupAction& A, const ModeTensor& a) { return apply_factor(a, 0, A.coaction); }

std::map<std::pair<Mode, Mask>, cplx> act_at(const GroupAction& A, const ModeTensor& a, const RVec& y) {
  std::map<std::pair<Mode, Mask>, cplx> r;
  for (const auto& [key, c] : coact(A, a).terms) {
    double ph = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) ph += key[1].k[i] * y[i];
    r[{key[0], key[1].I}] += c * std::polar(1.0, ph);
  }
  return r;
}

bool ActionReport::ok(double tol) const {
  return identity_residual <= tol && group_law_residual <= tol && automorphism_residual <= tol &&
         std::isfinite(boundedness_constant);
}

ActionReport validate_action(const GroupAction& A, const std::vector<ModeTensor>& span,
                             const std::vector<RVec>& samples) {
  ActionReport r;
  const int n = A.n;
  auto D = [n](const Mode& mo) { return coproduct_mode(mo, n); };
  auto E = [n](const Mode& mo) { return counit_mode(mo, n); };
  for (const auto& a : span) {
    ModeTensor ca = coact(A, a);
    r.identity_residual = std::max(r.identity_residual, max_coeff_distance(apply_factor(ca, 1, E), a));
    r.group_law_residual =
        std::max(r.group_law_residual, max_coeff_distance(apply_factor(ca, 0, A.coaction), apply_factor(ca, 1, D)));
    for (const auto& b : span)
      r.automorphism_residual = std::max(
          r.automorphism_residual, max_coeff_distance(coact(A, graded_product(a, b)), graded_product(ca, coact(A, b))));
    const double na = a.l1();
    if (na == 0.0) continue;
    for (const auto& y : samples) {
      std::map<Mask, double> comp;
      for (const auto& [key, c] : act_at(A, a, y)) comp[key.second] += std::abs(c);
      for (const auto& [I, v] : comp) r.boundedness_constant = std::max(r.boundedness_constant, v / na);
    }
  }
  return r;
}

void require_valid(const GroupAction& A, const std::vector<ModeTensor>& span, const std::vector<RVec>& samples) {
  ActionReport r = validate_action(A, span, samples);
  if (!r.ok())
    throw Error(Error::Kind::InvariantViolation,
                "action '" + A.name + "' violates the axioms (identity " + std::to_string(r.identity_residual) +
                    ", group law " + std::to_string(r.group_law_residual) + ", automorphism " +
                    std::to_string(r.automorphism_residual) + ")");
}

std::vector<double> smooth_vector_bounds(const GroupAction& A, const ModeTensor& a, int order) {
  std::vector<double> bounds(order + 1, 0.0);
  for (const auto& [key, c] : coact(A, a).terms) {
    double kn = 0.0;
    for (double v : key[1].k) kn += v * v;
    kn = std::sqrt(kn);
    for (int j = 0; j <= order; ++j) bounds[j] += std::abs(c) * std::pow(kn, j);
  }
  for (double b : bounds)
    if (!std::isfinite(b)) throw Error(Error::Kind::Precondition, "not a smooth vector: unbounded derivative estimate");
  return bounds;
}

ModeTensor deformed_product(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                            const ModeTensor& b) {
  check_dims(p, A);
  PhaseCache phase(p);
  return deformed_product_cached(phase, A, a, b);
}

ModeTensor torus_dagger(const ModeTensor& a) {
  ModeTensor r(a.m, a.n, a.rank);
  for (const auto& [key, c] : a.terms) {
    Key nk;
    for (const auto& mo : key) nk.push_back({neg_k(mo.k), mo.I});
    r.add(nk, std::conj(c));
  }
  return r;
}

double weyl_theta(const DeformationParams& p, const RVec& k, const RVec& l) {
  return moyal_phase_sign() * p.theta * omega0(k, l);
}

WeylReport weyl_check(const DeformationParams& p, const GroupAction& A, const std::vector<RVec>& ks) {
  check_dims(p, A);
  PhaseCache phase(p);
  WeylReport r;
  const int n = p.n;
  auto u = [n](const RVec& k) { return ModeTensor::basis(k, 0, n); };
  auto prod = [&](const RVec& k, const RVec& l) { return deformed_product_cached(phase, A, u(k), u(l)); };
  auto coeff = [](const ModeTensor& t, const RVec& k) {
    auto it = t.terms.find({{k, 0}});
    return it == t.terms.end() ? cplx{} : it->second;
  };
  auto measured = [&](const RVec& k, const RVec& l) {
    RVec s = add_k(k, l);
    return std::arg(coeff(prod(k, l), s) / coeff(prod(l, k), s));
  };
  const ModeTensor one = ModeTensor::unit(p.m, n);
  for (const auto& k : ks) {
    r.unitarity_residual =
        std::max(r.unitarity_residual, max_coeff_distance(deformed_product_cached(phase, A, u(k), torus_dagger(u(k))), one));
    for (const auto& l : ks) {
      ModeTensor kl = prod(k, l), lk = prod(l, k);
      r.modulus_residual = std::max(r.modulus_residual, std::abs(std::abs(coeff(kl, add_k(k, l))) - 1.0));
      double th = weyl_theta(p, k, l);
      r.relation_residual = std::max(r.relation_residual, max_coeff_distance(kl, std::polar(1.0, th) * lk));
      double mk = measured(k, l);
      r.theta_formula_residual = std::max(r.theta_formula_residual, std::abs(wrap(mk - th)));
      r.antisymmetry_residual = std::max(r.antisymmetry_residual, std::abs(wrap(mk + measured(l, k))));
      for (const auto& k2 : ks)
        r.bilinearity_residual = std::max(
            r.bilinearity_residual, std::abs(wrap(measured(add_k(k, k2), l) - mk - measured(k2, l))));
    }
  }
  return r;
}

ModeTensor tensor_of(const ModeTensor& a, const ModeTensor& b) {
  ModeTensor r(a.m, a.n, a.rank + b.rank);
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      Key k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      r.add(k, ca * cb);
    }
  return r;
}

ModeTensor mu0(const ModeTensor& ab) { return merge_factors(ab, 0); }

ModeTensor twist_apply(const DeformationParams& p, const GroupAction& A, const ModeTensor& ab) {
  check_dims(p, A);
  PhaseCache phase(p);
  return twist_cached(phase, A, ab);
}

ModeTensor twist_inverse_apply(const DeformationParams& p, const GroupAction& A, const ModeTensor& ab) {
  check_dims(p, A);
  PhaseCache phase(p);
  std::map<Key, cplx> diag;
  auto dinv = [&](const ModeTensor& t) {
    ModeTensor r(t.m, t.n, 2);
    for (const auto& [key, c] : t.terms) {
      auto it = diag.find(key);
      if (it == diag.end()) {
        ModeTensor img = twist_cached(phase, A, single(t.m, t.n, key, 1.0));
        auto f = img.terms.find(key);
        if (f == img.terms.end()) throw Error(Error::Kind::InvariantViolation, "twist has no diagonal phase");
        it = diag.emplace(key, f->second).first;
      }
      r.add(key, c / it->second);
    }
    return r;
  };
  auto diag_apply = [&](const ModeTensor& t) {
    ModeTensor r(t.m, t.n, 2);
    for (const auto& [key, c] : t.terms) r.add(key, c * diag.at(key));
    return r;
  };
  // F = D(1 + N) with N lowering the odd degree, so the iteration stops after at most 2n + 1 steps.
  ModeTensor y = dinv(ab);
  for (int it = 0; it < 2 * p.n + 2; ++it) {
    ModeTensor next = dinv(ab - (twist_cached(phase, A, y) - diag_apply(y)));
    if (max_coeff_distance(next, y) == 0.0) break;
    y = std::move(next);
  }
  return y;
}

double ComoduleReport::max() const {
  return std::max({coassociativity, counit, product_equivariance, deformed_equivariance});
}

ComoduleReport comodule_check(const DeformationParams& p, const GroupAction& A, const std::vector<ModeTensor>& span) {
  check_dims(p, A);
  PhaseCache phase(p);
  ComoduleReport r;
  const int n = A.n;
  auto D = [n](const Mode& mo) { return coproduct_mode(mo, n); };
  auto E = [n](const Mode& mo) { return counit_mode(mo, n); };
  for (const auto& a : span) {
    ModeTensor ca = coact(A, a);
    r.coassociativity = std::max(r.coassociativity,
                                 max_coeff_distance(apply_factor(ca, 0, A.coaction), apply_factor(ca, 1, D)));
    r.counit = std::max(r.counit, max_coeff_distance(apply_factor(ca, 1, E), a));
    for (const auto& b : span) {
      ModeTensor cb = coact(A, b);
      r.product_equivariance = std::max(r.product_equivariance,
                                        max_coeff_distance(coact(A, graded_product(a, b)), graded_product(ca, cb)));
      // χ(a)⋆χ(b) with ⋆_ρ on the algebra factor and the pointwise product on H.
      ModeTensor rhs(a.m, n, 2);
      for (const auto& [ka, xa] : ca.terms)
        for (const auto& [kb, xb] : cb.terms) {
          int s = merge_sign(ka[1].I, kb[1].I);
          if (!s) continue;
          double sg = (mask_parity(ka[1].I) && mask_parity(kb[0].I)) ? -1.0 : 1.0;
          ModeTensor prod = deformed_product_cached(phase, A, mode_tensor(ka[0], n), mode_tensor(kb[0], n));
          Mode h{add_k(ka[1].k, kb[1].k), ka[1].I | kb[1].I};
          for (const auto& [pk, pc] : prod.terms) rhs.add({pk[0], h}, sg * s * xa * xb * pc);
        }
      ModeTensor lhs = coact(A, deformed_product_cached(phase, A, a, b));
      r.deformed_equivariance = std::max(r.deformed_equivariance, max_coeff_distance(lhs, rhs));
    }
  }
  return r;
}

std::vector<Eigen::MatrixXcd> xi_blocks(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                                        const TruncatedBasis& b, const std::vector<RVec>& points) {
  check_dims(p, A);
  const int n = p.n;
  const Eigen::Index dq = static_cast<Eigen::Index>(b.dim()), de = Eigen::Index{1} << n;
  const auto grading = b.grading();
  Eigen::VectorXcd gamma(dq);
  for (Eigen::Index i = 0; i < dq; ++i) gamma(i) = grading[i] ? -1.0 : 1.0;

  std::map<Mode, Eigen::MatrixXcd> omega;
  std::vector<Eigen::MatrixXcd> blocks(points.size(), Eigen::MatrixXcd::Zero(dq * de, dq * de));
  for (const auto& [key, c] : coact(A, a).terms) {
    const Mode &am = key[0], &hm = key[1];
    auto it = omega.find(hm);
    if (it == omega.end()) {
      SuperFunction h = SuperFunction::monomial(PlaneWaveSum::wave(hm.k), n, hm.I);
      it = omega.emplace(hm, omega_map(p, h, b).op.mat).first;
    }
    const bool odd_a = mask_parity(am.I);
    const double koszul = (odd_a && mask_parity(hm.I)) ? -1.0 : 1.0;
    Eigen::MatrixXcd left = odd_a ? Eigen::MatrixXcd(it->second * gamma.asDiagonal()) : it->second;
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(de, de);
    for (Mask C = 0; C < static_cast<Mask>(de); ++C)
      if (int s = merge_sign(am.I, C)) L(static_cast<Eigen::Index>(am.I | C), static_cast<Eigen::Index>(C)) = s;
    for (std::size_t q = 0; q < points.size(); ++q) {
      double ph = 0.0;
      for (std::size_t i = 0; i < am.k.size(); ++i) ph += am.k[i] * points[q][i];
      const cplx w = koszul * c * std::polar(1.0, ph);
      for (Eigen::Index r = 0; r < de; ++r)
        for (Eigen::Index s = 0; s < de; ++s)
          if (L(r, s) != 0.0) {
            // Index = quantization index · 2^n + η mask.
            for (Eigen::Index i = 0; i < dq; ++i)
              for (Eigen::Index j = 0; j < dq; ++j) blocks[q](i * de + r, j * de + s) += w * L(r, s) * left(i, j);
          }
    }
  }
  return blocks;
}

NormEstimate deformed_norm_estimate(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                                    int levels, const std::vector<RVec>& points, double tol) {
  NormEstimate e;
  for (int L : {levels, 2 * levels}) {
    TruncatedBasis b = make_basis(p, L);
    double nm = 0.0;
    for (const auto& blk : xi_blocks(p, A, a, b, points))
      nm = std::max(nm, Eigen::BDCSVD<Eigen::MatrixXcd>(blk).singularValues()(0));
    e.levels.push_back(L);
    e.norms.push_back(nm);
  }
  e.value = e.norms.back();
  e.error = std::abs(e.norms[1] - e.norms[0]);
  e.converged = e.error <= tol * std::max(1.0, e.value);
  return e;
}

double xi_multiplicativity(const DeformationParams& p, const GroupAction& A, const ModeTensor& a,
                           const ModeTensor& b, int levels, const std::vector<RVec>& points) {
  TruncatedBasis basis = make_basis(p, levels);
  const std::size_t de = std::size_t{1} << p.n;
  std::vector<std::size_t> idx;
  for (std::size_t i : basis.low_indices(levels / 2))
    for (std::size_t r = 0; r < de; ++r) idx.push_back(i * de + r);
  auto xa = xi_blocks(p, A, a, basis, points), xb = xi_blocks(p, A, b, basis, points);
  auto xab = xi_blocks(p, A, deformed_product(p, A, a, b), basis, points);
  double res = 0.0, scale = 0.0;
  for (std::size_t q = 0; q < points.size(); ++q) {
    Eigen::MatrixXcd prod = xa[q] * xb[q];
    res = std::max(res, restricted_distance(xab[q], prod, idx));
    scale = std::max(scale, restricted_distance(prod, Eigen::MatrixXcd::Zero(prod.rows(), prod.cols()), idx));
  }
  return scale > 0.0 ? res / scale : res;
}

}  // namespace superstar
