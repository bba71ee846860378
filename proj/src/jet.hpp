#pragma once

#include <vector>

#include "superstar/grassmann.hpp"

namespace superstar {

/// Truncated Taylor polynomial Σ_{i+j≤D} c_ij h_x^i h_w^j in two variables.
class Jet2 {
 public:
  explicit Jet2(int degree) : d_(degree), c_((degree + 1) * (degree + 2) / 2) {}

  int degree() const { return d_; }
  static int index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }
  cplx& operator()(int i, int j) { return c_[index(i, j)]; }
  cplx operator()(int i, int j) const { return c_[index(i, j)]; }
  cplx value() const { return c_[0]; }

  /// Product truncated at the smaller degree.
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r(std::min(a.d_, b.d_));
    for (int d1 = 0; d1 <= r.d_; ++d1)
      for (int j1 = 0; j1 <= d1; ++j1) {
        const cplx x = a(d1 - j1, j1);
        if (x == cplx{}) continue;
        for (int d2 = 0; d1 + d2 <= r.d_; ++d2)
          for (int j2 = 0; j2 <= d2; ++j2) r(d1 - j1 + d2 - j2, j1 + j2) += x * b(d2 - j2, j2);
      }
    return r;
  }

  /// (1 − Δ) applied to the jet; the degree drops by 2.
  Jet2 one_minus_laplacian() const {
    Jet2 r(d_ - 2);
    for (int d = 0; d <= r.d_; ++d)
      for (int j = 0; j <= d; ++j) {
        const int i = d - j;
        r(i, j) = (*this)(i, j) - double((i + 2) * (i + 1)) * (*this)(i + 2, j) -
                  double((j + 2) * (j + 1)) * (*this)(i, j + 2);
      }
    return r;
  }

  /// e^{q} for a jet q: g_x = q_x g solved degree by degree.
  static Jet2 exp(const Jet2& q) {
    Jet2 g(q.d_);
    g(0, 0) = std::exp(q(0, 0));
    for (int d = 1; d <= q.d_; ++d)
      for (int j = 0; j <= d; ++j) {
        const int i = d - j;
        cplx s{};
        if (i > 0) {
          for (int a = 1; a <= i; ++a)
            for (int b = 0; b <= j && a + b <= d; ++b) s += double(a) * q(a, b) * g(i - a, j - b);
          g(i, j) = s / double(i);
        } else {
          for (int b = 1; b <= j; ++b) s += double(b) * q(0, b) * g(0, j - b);
          g(i, j) = s / double(j);
        }
      }
    return g;
  }

  /// 1/p for a jet p with p(0,0) ≠ 0.
  static Jet2 reciprocal(const Jet2& p) {
    Jet2 r(p.d_);
    for (int d = 0; d <= p.d_; ++d)
      for (int j = 0; j <= d; ++j) {
        const int i = d - j;
        cplx s = d == 0 ? cplx(1.0) : cplx{};
        for (int a = 0; a <= i; ++a)
          for (int b = 0; b <= j; ++b)
            if (a + b > 0) s -= p(a, b) * r(i - a, j - b);
        r(i, j) = s / p(0, 0);
      }
    return r;
  }

 private:
  int d_;
  std::vector<cplx> c_;
};

}  // namespace superstar
