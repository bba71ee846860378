#include "superstar/params.hpp"

#include <cmath>
#include <numbers>

#include "superstar/error.hpp"

namespace superstar {

namespace {
constexpr double kPi = std::numbers::pi;
double tri_sign(int n) { return ((n * (n + 1) / 2) % 2) ? -1.0 : 1.0; }
cplx ipow(int n) {
  static const cplx table[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  return table[n % 4];
}
}  // namespace

DeformationParams::DeformationParams(double theta_, double alpha_, int m_, int n_)
    : theta(theta_), alpha(alpha_), m(m_), n(n_) {
  if (!(theta > 0.0)) throw Error(Error::Kind::Precondition, "theta must be positive");
  if (alpha == 0.0 || alpha == -1.0) throw Error(Error::Kind::Precondition, "alpha must avoid 0 and -1");
  if (m < 0 || m % 2 != 0) throw Error(Error::Kind::Precondition, "m must be a nonnegative even integer");
  if (n < 0 || n > 20) throw Error(Error::Kind::Precondition, "n out of range");
}

cplx DeformationParams::gamma_even() const { return std::pow(kPi * theta, -0.5 * m); }

cplx DeformationParams::gamma_odd() const {
  return tri_sign(n) * ipow(n) * std::pow(theta, n) / std::pow(1 + alpha, n);
}

cplx DeformationParams::r_even() const { return std::pow(kPi * theta, -1.0 * m); }

cplx DeformationParams::r_odd() const {
  double sgn = (n % 2) ? -1.0 : 1.0;
  return sgn * std::pow(alpha, n) / std::pow(1 + alpha, n) * gamma_odd();
}

cplx DeformationParams::kappa_even() const { return std::pow(kPi * theta, -1.0 * m); }

cplx DeformationParams::kappa_odd() const {
  return ipow(n) * std::pow(theta, n) * tri_sign(n) * std::pow(alpha, n) / std::pow(1 + alpha, 2 * n);
}

Eigen::MatrixXd DeformationParams::omega0() const {
  const int d = m / 2;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  w.topRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
  w.bottomLeftCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
  return w;
}

Eigen::MatrixXd DeformationParams::omega_tilde() const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m + n, m + n);
  w.topLeftCorner(m, m) = omega0();
  w.bottomRightCorner(n, n) = odd_scale() * Eigen::MatrixXd::Identity(n, n);
  return w;
}

double omega0(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t d = a.size() / 2;
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) s += a[j] * b[d + j] - a[d + j] * b[j];
  return s;
}

}  // namespace superstar
