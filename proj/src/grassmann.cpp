#include "superstar/grassmann.hpp"

#include <algorithm>
#include <cmath>

#include "superstar/error.hpp"

namespace superstar {

MultiIndex::MultiIndex(Mask b, int gens) : bits(b), n(gens) {
  if (gens < 0 || gens > 63 || (gens < 63 && (b >> gens) != 0))
    throw Error(Error::Kind::Precondition, "MultiIndex bits exceed generator count");
}

MultiIndex MultiIndex::full(int gens) { return MultiIndex((Mask{1} << gens) - 1, gens); }

MultiIndex MultiIndex::of(std::initializer_list<int> one_based, int gens) {
  Mask b = 0;
  for (int i : one_based) {
    if (i < 1 || i > gens) throw Error(Error::Kind::Precondition, "generator index out of range");
    b |= Mask{1} << (i - 1);
  }
  return MultiIndex(b, gens);
}

MultiIndex MultiIndex::complement() const { return MultiIndex(full(n).bits & ~bits, n); }

int sign_eps(const MultiIndex& I, const MultiIndex& J) {
  if (I.n != J.n) throw Error(Error::Kind::Precondition, "sign_eps: generator counts differ");
  return merge_sign(I.bits, J.bits);
}

Grassmann Grassmann::scalar(int generators, cplx c) {
  Grassmann g(generators);
  g.add_term(0, c);
  return g;
}

Grassmann Grassmann::generator(int generators, int i) {
  return monomial(generators, Mask{1} << i, 1.0);
}

Grassmann Grassmann::monomial(int generators, Mask m, cplx c) {
  Grassmann g(generators);
  g.add_term(m, c);
  return g;
}

cplx Grassmann::coeff(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? cplx{} : it->second;
}

void Grassmann::add_term(Mask m, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

int Grassmann::parity(double tol) const {
  int p = -2;
  for (const auto& [m, c] : terms_) {
    if (std::abs(c) <= tol) continue;
    int q = mask_parity(m);
    if (p == -2) p = q;
    else if (p != q) return -1;
  }
  return p == -2 ? 0 : p;
}

Grassmann& Grassmann::operator+=(const Grassmann& o) {
  gens_ = std::max(gens_, o.gens_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Grassmann& Grassmann::operator-=(const Grassmann& o) {
  gens_ = std::max(gens_, o.gens_);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Grassmann& Grassmann::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Grassmann Grassmann::conj() const {
  Grassmann r(gens_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, std::conj(c));
  return r;
}

Grassmann Grassmann::exp() const {
  cplx b = body();
  Grassmann nil = *this;
  nil.terms_.erase(0);
  Grassmann sum = scalar(gens_, 1.0);
  Grassmann power = sum;
  for (int k = 1; !nil.empty(); ++k) {
    power = power * nil;
    power *= 1.0 / k;
    if (power.empty()) break;
    sum += power;
  }
  sum *= std::exp(b);
  return sum;
}

Grassmann Grassmann::substitute(const std::vector<Grassmann>& images) const {
  int gens = 0;
  for (const auto& g : images) gens = std::max(gens, g.generators());
  Grassmann r(gens);
  for (const auto& [m, c] : terms_) {
    Grassmann t = scalar(gens, c);
    for (Mask rest = m; rest; rest &= rest - 1) {
      int i = std::countr_zero(rest);
      if (i >= static_cast<int>(images.size()))
        throw Error(Error::Kind::Precondition, "substitute: missing generator image");
      t = t * images[i];
    }
    r += t;
  }
  return r;
}

Grassmann Grassmann::berezin(Mask block, Side side) const {
  Grassmann r(gens_);
  for (const auto& [m, c] : terms_) {
    if ((m & block) != block) continue;
    Mask rest = m & ~block;
    int s = side == Side::Left ? merge_sign(block, rest) : merge_sign(rest, block);
    r.add_term(rest, static_cast<double>(s) * c);
  }
  return r;
}

Grassmann Grassmann::left_derivative(int i) const {
  Grassmann r(gens_);
  Mask bit = Mask{1} << i;
  for (const auto& [m, c] : terms_) {
    if (!(m & bit)) continue;
    int before = popcount(m & (bit - 1));
    r.add_term(m & ~bit, (before & 1) ? -c : c);
  }
  return r;
}

Grassmann Grassmann::restrict_to(Mask keep) const {
  Grassmann r(gens_);
  for (const auto& [m, c] : terms_)
    if ((m & ~keep) == 0) r.terms_.emplace(m, c);
  return r;
}

double Grassmann::max_abs() const {
  double v = 0.0;
  for (const auto& [m, c] : terms_) v = std::max(v, std::abs(c));
  return v;
}

void Grassmann::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

Grassmann operator+(Grassmann a, const Grassmann& b) { return a += b; }
Grassmann operator-(Grassmann a, const Grassmann& b) { return a -= b; }

Grassmann operator*(const Grassmann& a, const Grassmann& b) {
  Grassmann r(std::max(a.generators(), b.generators()));
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      int s = merge_sign(ma, mb);
      if (s == 0) continue;
      r.add_term(ma | mb, static_cast<double>(s) * ca * cb);
    }
  }
  return r;
}

Grassmann operator*(cplx s, Grassmann a) { return a *= s; }
Grassmann operator*(Grassmann a, cplx s) { return a *= s; }

double distance(const Grassmann& a, const Grassmann& b) { return (a - b).max_abs(); }

}  // namespace superstar
