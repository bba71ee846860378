#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "superstar/grassmann.hpp"

namespace superstar {

using RVec = std::vector<double>;

enum class Backend { PlaneWave, Gaussian, Grid };
const char* backend_name(Backend b);

struct PlaneWave {
  RVec k;
  cplx a;
};

/// Finite sum Σ a_j e^{i k_j·z}; terms are kept sorted with distinct k.
class PlaneWaveSum {
 public:
  explicit PlaneWaveSum(int m = 0) : m_(m) {}
  PlaneWaveSum(int m, std::vector<PlaneWave> terms);
  static PlaneWaveSum constant(int m, cplx c);
  static PlaneWaveSum wave(const RVec& k, cplx a = 1.0);

  int dim() const { return m_; }
  const std::vector<PlaneWave>& terms() const { return terms_; }
  cplx eval(const RVec& z) const;
  std::vector<cplx> gradient(const RVec& z) const;

 private:
  void normalize();
  int m_;
  std::vector<PlaneWave> terms_;
};

/// c · exp(−½ zᵀAz + bᵀz), A complex symmetric with Re A ≥ 0.
struct GaussianTerm {
  cplx c;
  Eigen::MatrixXcd A;
  Eigen::VectorXcd b;
};

class GaussianSum {
 public:
  explicit GaussianSum(int m = 0) : m_(m) {}
  GaussianSum(int m, std::vector<GaussianTerm> terms);
  /// amp · exp(−½(z−z0)ᵀP(z−z0) + i k·z) with P real symmetric positive definite.
  static GaussianSum gaussian(const Eigen::MatrixXd& P, const RVec& z0, const RVec& k, cplx amp = 1.0);
  static GaussianSum isotropic(int m, double sigma, const RVec& z0, cplx amp = 1.0);
  static GaussianSum plane_wave(const RVec& k, cplx a = 1.0);
  static GaussianSum from_plane_waves(const PlaneWaveSum& p);

  int dim() const { return m_; }
  const std::vector<GaussianTerm>& terms() const { return terms_; }
  cplx eval(const RVec& z) const;
  std::vector<cplx> gradient(const RVec& z) const;

 private:
  int m_;
  std::vector<GaussianTerm> terms_;
};

/// Samples on the periodic box [−L, L)^m with N nodes per axis, row-major (axis 0 slowest).
class GridFn {
 public:
  GridFn() = default;
  GridFn(int m, double L, int N);
  GridFn(int m, double L, int N, std::vector<cplx> samples);

  int dim() const { return m_; }
  double half_width() const { return L_; }
  int points_per_axis() const { return N_; }
  double spacing() const { return 2.0 * L_ / N_; }
  double node(int t) const { return -L_ + t * spacing(); }
  std::size_t size() const { return samples_.size(); }
  const std::vector<cplx>& samples() const { return samples_; }
  std::vector<cplx>& samples() { return samples_; }
  RVec point(std::size_t flat) const;
  bool same_grid(const GridFn& o) const;

  /// Trigonometric interpolant at arbitrary points.
  std::vector<cplx> interpolate(const std::vector<RVec>& pts) const;
  cplx eval(const RVec& z) const;
  /// Spectral derivative along `axis`.
  GridFn derivative(int axis) const;
  /// Normalized Fourier coefficients, f(node) = Σ ĉ_n e^{i k_n·node}, k_n = π n / L (signed n).
  std::vector<cplx> spectrum() const;
  /// Largest |ĉ| in the outer band |n| > (3/8)N relative to the largest |ĉ|.
  double spectral_tail() const;
  /// Largest |f| on the box faces relative to the largest |f|.
  double boundary_fraction() const;

 private:
  int m_ = 0;
  double L_ = 0.0;
  int N_ = 0;
  std::vector<cplx> samples_;
};

struct GridSpec {
  double L;
  int N;
};

class CoeffFn {
 public:
  CoeffFn() : v_(PlaneWaveSum(0)) {}
  CoeffFn(PlaneWaveSum p) : v_(std::move(p)) {}
  CoeffFn(GaussianSum g) : v_(std::move(g)) {}
  CoeffFn(GridFn g) : v_(std::move(g)) {}

  Backend backend() const { return static_cast<Backend>(v_.index()); }
  int dim() const;
  bool is_zero() const;

  const PlaneWaveSum& plane_waves() const { return std::get<PlaneWaveSum>(v_); }
  const GaussianSum& gaussians() const { return std::get<GaussianSum>(v_); }
  const GridFn& grid() const { return std::get<GridFn>(v_); }

  cplx eval(const RVec& z) const;
  std::vector<cplx> gradient(const RVec& z) const;

 private:
  std::variant<PlaneWaveSum, GaussianSum, GridFn> v_;
};

CoeffFn coeff_add(const CoeffFn& a, const CoeffFn& b);
CoeffFn coeff_scale(const CoeffFn& a, cplx s);
CoeffFn coeff_mul(const CoeffFn& a, const CoeffFn& b);
CoeffFn coeff_conj(const CoeffFn& a);
inline cplx coeff_eval(const CoeffFn& f, const RVec& z) { return f.eval(z); }
/// Samples an analytic coefficient on a grid. Throws Aliasing when |k| ≥ πN/(2L) for a plane wave,
/// or when a Gaussian's spectrum or box-face values exceed `tol` relative to the peak.
CoeffFn coeff_convert(const CoeffFn& f, GridSpec g, double tol = 1e-10);
/// ∫ f over R^m (Gaussians), over the periodic box (grids), or box-volume convention for plane waves.
cplx coeff_integral(const CoeffFn& f, std::optional<double> box_volume = std::nullopt);

/// Principal-branch square root of det(M) for M with eigenvalues in the closed right half-plane.
cplx sqrt_det_principal(const Eigen::MatrixXcd& M);

}  // namespace superstar
