#include "superstar/superfunction.hpp"

#include "superstar/error.hpp"

namespace superstar {

using nlohmann::json;

SuperFunction SuperFunction::even(const CoeffFn& f, int n) { return monomial(f, n, 0); }

SuperFunction SuperFunction::monomial(const CoeffFn& f, int n, Mask I) {
  SuperFunction s(f.dim(), n);
  s.set(I, f);
  return s;
}

const CoeffFn* SuperFunction::get(Mask I) const {
  auto it = comps_.find(I);
  return it == comps_.end() ? nullptr : &it->second;
}

void SuperFunction::set(Mask I, CoeffFn f) {
  if (n_ < 64 && (I >> n_) != 0) throw Error(Error::Kind::Precondition, "component index exceeds n");
  if (f.dim() != m_) throw Error(Error::Kind::Precondition, "component has wrong even dimension");
  if (auto b = backend(); b && *b != f.backend() && !(comps_.size() == 1 && comps_.count(I)))
    throw Error(Error::Kind::BackendMismatch, "components must share one backend");
  if (f.is_zero()) {
    comps_.erase(I);
    return;
  }
  comps_.insert_or_assign(I, std::move(f));
}

void SuperFunction::add_to(Mask I, const CoeffFn& f) {
  auto it = comps_.find(I);
  if (it == comps_.end()) set(I, f);
  else set(I, coeff_add(it->second, f));
}

std::optional<Backend> SuperFunction::backend() const {
  if (comps_.empty()) return std::nullopt;
  return comps_.begin()->second.backend();
}

int SuperFunction::parity() const {
  int p = -2;
  for (const auto& [I, f] : comps_) {
    int q = mask_parity(I);
    if (p == -2) p = q;
    else if (p != q) return -1;
  }
  return p == -2 ? 0 : p;
}

Grassmann SuperFunction::eval(const RVec& z) const {
  Grassmann g(n_);
  for (const auto& [I, f] : comps_) g.add_term(I, f.eval(z));
  return g;
}

namespace {

void check_compatible(const SuperFunction& f, const SuperFunction& g) {
  if (f.m() != g.m() || f.n() != g.n())
    throw Error(Error::Kind::BackendMismatch, "superfunctions live on different R^{m|n}");
  auto a = f.backend(), b = g.backend();
  if (a && b && *a != *b)
    throw Error(Error::Kind::BackendMismatch, std::string("backend mismatch: ") + backend_name(*a) + " vs " +
                                                  backend_name(*b));
}

}  // namespace

SuperFunction super_add(const SuperFunction& f, const SuperFunction& g) {
  check_compatible(f, g);
  SuperFunction r = f;
  for (const auto& [I, c] : g.comps()) r.add_to(I, c);
  return r;
}

SuperFunction super_sub(const SuperFunction& f, const SuperFunction& g) {
  return super_add(f, super_scale(g, -1.0));
}

SuperFunction super_scale(const SuperFunction& f, cplx s) {
  SuperFunction r(f.m(), f.n());
  for (const auto& [I, c] : f.comps()) r.set(I, coeff_scale(c, s));
  return r;
}

SuperFunction super_mul(const SuperFunction& f, const SuperFunction& g) {
  check_compatible(f, g);
  SuperFunction r(f.m(), f.n());
  for (const auto& [I, a] : f.comps()) {
    for (const auto& [J, b] : g.comps()) {
      int s = merge_sign(I, J);
      if (s == 0) continue;
      r.add_to(I | J, coeff_scale(coeff_mul(a, b), static_cast<double>(s)));
    }
  }
  return r;
}

SuperFunction super_conj(const SuperFunction& f) {
  SuperFunction r(f.m(), f.n());
  for (const auto& [I, c] : f.comps()) r.set(I, coeff_conj(c));
  return r;
}

SuperFunction parity_part(const SuperFunction& f, int p) {
  SuperFunction r(f.m(), f.n());
  for (const auto& [I, c] : f.comps())
    if (mask_parity(I) == p) r.set(I, c);
  return r;
}

SuperFunction to_grid(const SuperFunction& f, GridSpec g, double tol) {
  SuperFunction r(f.m(), f.n());
  for (const auto& [I, c] : f.comps()) r.set(I, coeff_convert(c, g, tol));
  return r;
}

SuperFunction to_gaussian(const SuperFunction& f) {
  SuperFunction r(f.m(), f.n());
  for (const auto& [I, c] : f.comps()) {
    if (c.backend() == Backend::PlaneWave) r.set(I, GaussianSum::from_plane_waves(c.plane_waves()));
    else if (c.backend() == Backend::Gaussian) r.set(I, c);
    else throw Error(Error::Kind::BackendMismatch, "grid components cannot become Gaussians");
  }
  return r;
}

double max_distance(const SuperFunction& f, const SuperFunction& g, const std::vector<RVec>& pts) {
  double d = 0.0;
  for (const auto& z : pts) d = std::max(d, distance(f.eval(z), g.eval(z)));
  return d;
}

namespace {

json cplx_json(cplx c) { return json::array({c.real(), c.imag()}); }
cplx json_cplx(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json payload(const CoeffFn& f) {
  json p;
  switch (f.backend()) {
    case Backend::PlaneWave:
      p["terms"] = json::array();
      for (const auto& t : f.plane_waves().terms()) p["terms"].push_back({{"k", t.k}, {"a", cplx_json(t.a)}});
      break;
    case Backend::Gaussian:
      p["terms"] = json::array();
      for (const auto& t : f.gaussians().terms()) {
        json A = json::array(), b = json::array();
        for (int i = 0; i < t.A.rows(); ++i)
          for (int j = 0; j < t.A.cols(); ++j) A.push_back(cplx_json(t.A(i, j)));
        for (int i = 0; i < t.b.size(); ++i) b.push_back(cplx_json(t.b[i]));
        p["terms"].push_back({{"c", cplx_json(t.c)}, {"A", A}, {"b", b}});
      }
      break;
    case Backend::Grid: {
      const auto& g = f.grid();
      p["L"] = g.half_width();
      p["N"] = g.points_per_axis();
      json s = json::array();
      for (cplx v : g.samples()) {
        s.push_back(v.real());
        s.push_back(v.imag());
      }
      p["samples"] = std::move(s);
      break;
    }
  }
  return p;
}

CoeffFn from_payload(Backend b, int m, const json& p) {
  switch (b) {
    case Backend::PlaneWave: {
      std::vector<PlaneWave> t;
      for (const auto& x : p.at("terms")) t.push_back({x.at("k").get<RVec>(), json_cplx(x.at("a"))});
      return PlaneWaveSum(m, std::move(t));
    }
    case Backend::Gaussian: {
      std::vector<GaussianTerm> t;
      for (const auto& x : p.at("terms")) {
        GaussianTerm g{json_cplx(x.at("c")), Eigen::MatrixXcd(m, m), Eigen::VectorXcd(m)};
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) g.A(i, j) = json_cplx(x.at("A").at(i * m + j));
          g.b[i] = json_cplx(x.at("b").at(i));
        }
        t.push_back(std::move(g));
      }
      return GaussianSum(m, std::move(t));
    }
    case Backend::Grid: {
      const auto& s = p.at("samples");
      std::vector<cplx> v(s.size() / 2);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = {s.at(2 * i).get<double>(), s.at(2 * i + 1).get<double>()};
      return GridFn(m, p.at("L").get<double>(), p.at("N").get<int>(), std::move(v));
    }
  }
  throw Error(Error::Kind::Io, "unknown backend");
}

Backend parse_backend(const std::string& s) {
  if (s == "plane_wave") return Backend::PlaneWave;
  if (s == "gaussian") return Backend::Gaussian;
  if (s == "grid") return Backend::Grid;
  throw Error(Error::Kind::Io, "unknown backend '" + s + "'");
}

}  // namespace

json to_json(const SuperFunction& f) {
  json j;
  j["n"] = f.n();
  j["m"] = f.m();
  j["backend"] = f.backend() ? backend_name(*f.backend()) : "plane_wave";
  j["comps"] = json::array();
  for (const auto& [I, c] : f.comps()) j["comps"].push_back({{"index_bits", I}, {"payload", payload(c)}});
  return j;
}

SuperFunction superfunction_from_json(const json& j) {
  try {
    SuperFunction f(j.at("m").get<int>(), j.at("n").get<int>());
    Backend b = parse_backend(j.at("backend").get<std::string>());
    for (const auto& c : j.at("comps")) f.set(c.at("index_bits").get<Mask>(), from_payload(b, f.m(), c.at("payload")));
    return f;
  } catch (const json::exception& e) {
    throw Error(Error::Kind::Io, std::string("malformed superfunction JSON: ") + e.what());
  }
}

}  // namespace superstar
