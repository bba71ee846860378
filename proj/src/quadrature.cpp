#include "superstar/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

namespace superstar {

QuadRule gauss_legendre_panels(double a, double b, int panels) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  QuadRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = x[i] * h / 2;
      r.nodes.push_back(mid + s);
      r.weights.push_back(w[i] * h / 2);
      if (x[i] != 0.0) {
        r.nodes.push_back(mid - s);
        r.weights.push_back(w[i] * h / 2);
      }
    }
  }
  return r;
}

std::vector<double> hermite_functions(int nmax, double t) {
  std::vector<double> psi(nmax + 1);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-t * t / 2);
  if (nmax >= 1) psi[1] = std::sqrt(2.0) * t * psi[0];
  for (int k = 2; k <= nmax; ++k)
    psi[k] = std::sqrt(2.0 / k) * t * psi[k - 1] - std::sqrt((k - 1.0) / k) * psi[k - 2];
  return psi;
}

QuadRule gauss_hermite(int n) {
  // Golub–Welsch: Jacobi matrix of the physicists' Hermite recurrence
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  QuadRule r;
  for (int i = 0; i < n; ++i) {
    const double t = es.eigenvalues()(i);
    const double p = hermite_functions(n - 1, t)[n - 1];
    r.nodes.push_back(t);
    r.weights.push_back(1.0 / (n * p * p));
  }
  return r;
}

}  // namespace superstar
