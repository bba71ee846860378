#pragma once

#include <map>
#include "json.hpp"
#include <optional>

#include "superstar/coeff.hpp"
#include "superstar/grassmann.hpp"

namespace superstar {

/// f(x,ξ) = Σ_I f_I(x) ξ^I on R^{m|n}; every component shares one backend.
class SuperFunction {
 public:
  SuperFunction() = default;
  SuperFunction(int m, int n) : m_(m), n_(n) {}
  /// Even function f(x)·1.
  static SuperFunction even(const CoeffFn& f, int n);
  /// f(x)·ξ^I.
  static SuperFunction monomial(const CoeffFn& f, int n, Mask I);

  int m() const { return m_; }
  int n() const { return n_; }
  const std::map<Mask, CoeffFn>& comps() const { return comps_; }
  const CoeffFn* get(Mask I) const;
  void set(Mask I, CoeffFn f);
  void add_to(Mask I, const CoeffFn& f);
  std::optional<Backend> backend() const;

  /// 0/1 for homogeneous (zero counts as even), -1 for mixed parity.
  int parity() const;
  /// Value at an even point as a Grassmann number on n generators.
  Grassmann eval(const RVec& z) const;

 private:
  int m_ = 0;
  int n_ = 0;
  std::map<Mask, CoeffFn> comps_;
};

SuperFunction super_add(const SuperFunction& f, const SuperFunction& g);
SuperFunction super_sub(const SuperFunction& f, const SuperFunction& g);
SuperFunction super_scale(const SuperFunction& f, cplx s);
/// (fg)_K = Σ_{I⊔J=K} ε(I,J) f_I g_J.
SuperFunction super_mul(const SuperFunction& f, const SuperFunction& g);
SuperFunction super_conj(const SuperFunction& f);
/// Component of homogeneous parity p (0 or 1).
SuperFunction parity_part(const SuperFunction& f, int p);
/// Converts every component to a grid.
SuperFunction to_grid(const SuperFunction& f, GridSpec g, double tol = 1e-10);
/// Converts plane-wave components to Gaussian terms with A = 0.
SuperFunction to_gaussian(const SuperFunction& f);

/// max over points and components of |f_I(z) − g_I(z)|.
double max_distance(const SuperFunction& f, const SuperFunction& g, const std::vector<RVec>& pts);

nlohmann::json to_json(const SuperFunction& f);
SuperFunction superfunction_from_json(const nlohmann::json& j);

}  // namespace superstar
