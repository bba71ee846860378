#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace superstar {

using cplx = std::complex<double>;
using Mask = std::uint64_t;

inline int popcount(Mask m) { return std::popcount(m); }
inline int mask_parity(Mask m) { return std::popcount(m) & 1; }

/// Sign of ξ^a ξ^b relative to the ascending monomial ξ^{a∪b}, or 0 when a and b overlap.
inline int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

/// Ordered subset of {1..n} stored as a bitmask (bit i-1 for generator i).
struct MultiIndex {
  Mask bits = 0;
  int n = 0;

  MultiIndex() = default;
  MultiIndex(Mask b, int gens);
  static MultiIndex full(int gens);
  static MultiIndex of(std::initializer_list<int> one_based, int gens);

  int size() const { return popcount(bits); }
  int parity() const { return size() & 1; }
  MultiIndex complement() const;
  bool operator==(const MultiIndex&) const = default;
};

/// ε(I,J): signature of the permutation sorting the concatenation (I,J); 0 if I∩J ≠ ∅.
int sign_eps(const MultiIndex& I, const MultiIndex& J);

enum class Side { Left, Right };

/// Element of the complex Grassmann algebra on `generators` generators (the SuperNumber type).
class Grassmann {
 public:
  Grassmann() = default;
  explicit Grassmann(int generators) : gens_(generators) {}

  static Grassmann scalar(int generators, cplx c);
  static Grassmann generator(int generators, int i);
  static Grassmann monomial(int generators, Mask m, cplx c = 1.0);

  int generators() const { return gens_; }
  const std::map<Mask, cplx>& terms() const { return terms_; }
  cplx coeff(Mask m) const;
  cplx body() const { return coeff(0); }
  void add_term(Mask m, cplx c);
  bool empty() const { return terms_.empty(); }

  /// 0 or 1 for homogeneous elements (zero counts as even), -1 otherwise.
  int parity(double tol = 0.0) const;

  Grassmann& operator+=(const Grassmann& o);
  Grassmann& operator-=(const Grassmann& o);
  Grassmann& operator*=(cplx s);

  Grassmann conj() const;
  /// Nilpotent-exact exponential.
  Grassmann exp() const;
  /// Algebra homomorphism sending generator i to images[i]; images must have definite parity.
  Grassmann substitute(const std::vector<Grassmann>& images) const;
  /// Berezin integral over the generators in `block` (ascending product moved to `side`).
  Grassmann berezin(Mask block, Side side = Side::Left) const;
  /// Left derivative ∂/∂ξ^i.
  Grassmann left_derivative(int i) const;
  /// Components whose monomial lies entirely inside `keep`.
  Grassmann restrict_to(Mask keep) const;

  double max_abs() const;
  void prune(double tol);

 private:
  int gens_ = 0;
  std::map<Mask, cplx> terms_;
};

Grassmann operator+(Grassmann a, const Grassmann& b);
Grassmann operator-(Grassmann a, const Grassmann& b);
Grassmann operator*(const Grassmann& a, const Grassmann& b);
Grassmann operator*(cplx s, Grassmann a);
Grassmann operator*(Grassmann a, cplx s);
double distance(const Grassmann& a, const Grassmann& b);

}  // namespace superstar
