#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "superstar/error.hpp"
#include "superstar/parallel.hpp"
#include "superstar/qft.hpp"
#include "superstar/quantization.hpp"
#include "superstar/starprod.hpp"
#include "superstar/suites.hpp"
#include "superstar/udf_hopf.hpp"

using namespace superstar;
using json = nlohmann::json;

namespace {

struct Global {
  std::uint64_t seed = 20110411;
  std::string profile = "default";
  std::string out_dir = ".";
};

std::filesystem::path in_out_dir(const Global& g, const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_absolute() || g.out_dir == ".") return p;
  std::filesystem::create_directories(g.out_dir);
  return std::filesystem::path(g.out_dir) / p;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Error::Kind::Io, path + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json report_header(const Global& g, const std::string& command) {
  return {{"schema_version", kReportSchemaVersion}, {"command", command}, {"seed", g.seed},
          {"tolerance_profile", g.profile}, {"threads", thread_count()}};
}

std::vector<RVec> sample_points(std::uint64_t seed, int m, int count = 8) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<RVec> pts(count, RVec(m));
  for (auto& z : pts)
    for (auto& v : z) v = u(rng);
  return pts;
}

/// "1,0;0,1;-1,2" -> {{1,0},{0,1},{-1,2}}
std::vector<RVec> parse_k_list(const std::string& s, int m) {
  std::vector<RVec> ks;
  std::stringstream outer(s);
  std::string item;
  while (std::getline(outer, item, ';')) {
    if (item.empty()) continue;
    RVec k;
    std::stringstream inner(item);
    std::string v;
    while (std::getline(inner, v, ',')) k.push_back(std::stod(v));
    if (static_cast<int>(k.size()) != m)
      throw Error(Error::Kind::Precondition, "generator '" + item + "' does not have " + std::to_string(m) + " entries");
    ks.push_back(k);
  }
  if (ks.empty()) throw Error(Error::Kind::Precondition, "empty generator list");
  return ks;
}

// SSOP layout (little endian): "SSOP", u32 version = 1, u64 rows, u64 cols, u32 element bytes = 16,
// u32 reserved = 0, then rows*cols complex128 (re, im) in row-major order.
void write_ssop(const std::filesystem::path& path, const Eigen::MatrixXcd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  const std::uint32_t version = 1, elem = 16, reserved = 0;
  const std::uint64_t rows = m.rows(), cols = m.cols();
  out.write("SSOP", 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  out.write(reinterpret_cast<const char*>(&elem), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v[2] = {m(i, j).real(), m(i, j).imag()};
      out.write(reinterpret_cast<const char*>(v), sizeof v);
    }
}

int cmd_star(const Global& g, double theta, double alpha, int m, int n, const std::string& backend,
             const std::vector<std::string>& in, const std::string& out, const std::string& report) {
  DeformationParams p(theta, alpha, m, n);
  SuperFunction f1 = superfunction_from_json(read_json(in.at(0))), f2 = superfunction_from_json(read_json(in.at(1)));
  for (const auto* f : {&f1, &f2})
    if (f->m() != m || f->n() != n)
      throw Error(Error::Kind::Precondition, "input dimension differs from --m/--n");
  json rep = report_header(g, "star");
  rep["params"] = {{"theta", theta}, {"alpha", alpha}, {"m", m}, {"n", n}, {"backend", backend}};
  SuperFunction result;
  if (backend == "fast") {
    result = star_fast(p, f1, f2);
  } else {
    DirectResult d = star_direct(p, f1, f2);
    rep["direct_extrapolation_estimate"] = d.residual_estimate;
    result = d.value;
    if (backend == "both") {
      SuperFunction fast = star_fast(p, f1, f2);
      auto pts = sample_points(g.seed, m);
      double diff = max_distance(fast.backend() == Backend::PlaneWave ? to_gaussian(fast) : fast, d.value, pts);
      rep["fast_vs_direct"] = diff;
      result = fast;
    }
  }
  // Plane waves have no finite trace.
  if (f1.backend() != Backend::PlaneWave && f2.backend() != Backend::PlaneWave) {
    auto tr = tracial_check(p, f1, f2, sample_points(g.seed + 1, m));
    rep["trace_residual"] = tr.trace_residual;
    rep["conj_residual"] = tr.conj_residual;
  }
  rep["derived_constants"] = derived_constants(p);
  write_json(in_out_dir(g, out), to_json(result));
  if (!report.empty()) write_json(in_out_dir(g, report), rep);
  std::cout << rep.dump(2) << "\n";
  return 0;
}

int cmd_quantize(const Global& g, double theta, double alpha, int levels, const std::string& fin, const std::string& out,
                 std::string report) {
  SuperFunction f = superfunction_from_json(read_json(fin));
  DeformationParams p(theta, alpha, f.m(), f.n());
  auto b = make_basis(p, levels);
  OmegaResult o = omega_map(p, f, b);
  write_ssop(in_out_dir(g, out), o.op.mat);
  json rep = report_header(g, "quantize");
  rep["params"] = {{"theta", theta}, {"alpha", alpha}, {"m", f.m()}, {"n", f.n()}, {"levels", levels}};
  rep["dimension"] = b.dim();
  rep["grading"] = b.grading();
  rep["parity"] = o.op.parity;
  rep["quadrature_error"] = o.quadrature_error;
  rep["matrix_file"] = out;
  rep["matrix_layout"] = "SSOP v1: magic, u32 version, u64 rows, u64 cols, u32 elem_bytes=16, u32 0, complex128 row-major";
  rep["derived_constants"] = derived_constants(p);
  if (report.empty()) report = out + ".json";
  write_json(in_out_dir(g, report), rep);
  std::cout << rep.dump(2) << "\n";
  return 0;
}

int cmd_deform(const Global& g, double theta, double alpha, int m, int n, const std::string& action,
               const std::string& generators, const std::string& check, int levels, const std::string& out) {
  DeformationParams p(theta, alpha, m, n);
  GroupAction A = action == "torus" ? torus_translation(m, n) : throw Error(Error::Kind::Unsupported, action);
  auto ks = parse_k_list(generators, m);
  json rep = report_header(g, "deform");
  rep["params"] = {{"theta", theta}, {"alpha", alpha}, {"m", m}, {"n", n}, {"action", action}, {"check", check}};
  rep["generators"] = ks;
  std::vector<ModeTensor> span;
  for (const auto& k : ks)
    for (Mask I = 0; I < (Mask{1} << n); ++I) span.push_back(ModeTensor::basis(k, I, n));
  bool ok = true;
  const double tol = 1e-12;
  if (check == "weyl") {
    WeylReport w = weyl_check(p, A, ks);
    rep["result"] = {{"modulus", w.modulus_residual}, {"relation", w.relation_residual},
                     {"antisymmetry", w.antisymmetry_residual}, {"bilinearity", w.bilinearity_residual},
                     {"unitarity", w.unitarity_residual}, {"theta_formula", w.theta_formula_residual}};
    ok = std::max({w.relation_residual, w.antisymmetry_residual, w.bilinearity_residual}) < tol;
  } else if (check == "hopf") {
    HopfReport h = hopf_check(span);
    rep["result"] = {{"associativity", h.associativity}, {"unit", h.unit}, {"coassociativity", h.coassociativity},
                     {"counit", h.counit}, {"coproduct_morphism", h.coproduct_morphism},
                     {"counit_morphism", h.counit_morphism}, {"antipode", h.antipode}};
    ok = h.max() < tol;
  } else if (check == "comodule") {
    ComoduleReport c = comodule_check(p, A, span);
    rep["result"] = {{"coassociativity", c.coassociativity}, {"counit", c.counit},
                     {"product_equivariance", c.product_equivariance},
                     {"deformed_equivariance", c.deformed_equivariance}};
    ok = c.max() < tol;
  } else {
    const std::vector<RVec> pts = {RVec(m, 0.0), RVec(m, 1.0), sample_points(g.seed, m, 1)[0]};
    json norms = json::array();
    for (const auto& k : ks) {
      NormEstimate e = deformed_norm_estimate(p, A, ModeTensor::basis(k, 0, n), levels, pts);
      norms.push_back({{"k", k}, {"levels", e.levels}, {"norms", e.norms}, {"value", e.value}, {"error", e.error},
                       {"converged", e.converged}});
      ok = ok && e.converged;
    }
    rep["result"] = norms;
  }
  rep["pass"] = ok;
  rep["derived_constants"] = derived_constants(p);
  write_json(in_out_dir(g, out), rep);
  std::cout << rep.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_qft(const Global& g, double theta, double alpha, double b, double nu, double Lambda, int N, double L,
            const std::string& out) {
  QftParams q(theta, alpha, b, nu, Lambda);
  // Default test field: a unit Gaussian bump off the origin.
  FieldConfig f = make_field(GaussianSum::isotropic(2, 1.0, {0.5, -0.3}), {L, N});
  QftComparison c = qft_compare(q, f);
  json rep = report_header(g, "qft-check");
  rep["params"] = {{"theta", theta}, {"alpha", alpha}, {"b", b}, {"nu", nu}, {"Lambda", Lambda}, {"grid", N},
                   {"box", L}};
  rep["harmonic"] = {{"kinetic", c.harmonic.kinetic}, {"harmonic", c.harmonic.harmonic}, {"mass", c.harmonic.mass},
                     {"quartic", c.harmonic.quartic}, {"total", c.harmonic.total()}};
  rep["superfield"] = {{"kinetic", c.superfield.kinetic}, {"mass", c.superfield.mass},
                       {"quartic", c.superfield.quartic}, {"total", c.superfield.total()},
                       {"imaginary_part", c.superfield.imag_residual}};
  rep["residuals"] = {{"kinetic", c.kinetic_residual}, {"mass", c.mass_residual}, {"quartic", c.quartic_residual},
                      {"total", c.total_residual}};
  rep["star_reading_residuals"] = {{"kinetic", c.kinetic_residual_star}, {"mass", c.mass_residual_star},
                                   {"quartic", c.quartic_residual_star}, {"total", c.total_residual_star}};
  rep["omega"] = {{"predicted", c.omega_pred}, {"measured", c.omega_fit}};
  rep["lambda"] = {{"predicted", c.lambda_pred}, {"measured", c.lambda_fit}};
  rep["quadrature"] = {{"field_boundary_fraction", f.phi.boundary_fraction()}, {"spectral_tail", f.phi.spectral_tail()}};
  rep["pass"] = c.max_residual() < 1e-6;
  rep["derived_constants"] = derived_constants(q.super_params());
  write_json(in_out_dir(g, out), rep);
  std::cout << rep.dump(2) << "\n";
  return c.max_residual() < 1e-6 ? 0 : 1;
}

int cmd_suite(const Global& g, const std::string& name, const SuiteConfig& cfg) {
  SuiteReport r = run_suite(name, cfg);
  auto files = write_suite_outputs(r, cfg, g.out_dir);
  std::cout << summary_text(r);
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
  if (!r.passed())
    for (const auto& c : r.criteria)
      if (!c.passed()) {
        std::cerr << "first failure: criterion " << c.id << ": " << c.first_failure() << "\n";
        break;
      }
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded star-products, quantization and deformation checks"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "seed for randomized samples");
  app.add_option("--tolerance-profile", g.profile, "strict enlarges randomized samples")
      ->check(CLI::IsMember({"strict", "default"}));
  app.add_option("--out-dir", g.out_dir, "directory for reports");
  app.fallthrough();

  double theta = 1.0, alpha = 0.3, b = 0.7, nu = 1.0, Lambda = 1.0, box = 10.0;
  int m = 2, n = 1, levels = 32, grid = 128;
  std::string backend = "fast", out, report, fin, action = "torus", generators = "1,0;0,1", check = "weyl";
  std::vector<std::string> in;

  auto* star = app.add_subcommand("star", "graded star product of two superfunctions");
  star->add_option("--theta", theta)->required();
  star->add_option("--alpha", alpha)->required();
  star->add_option("--m", m);
  star->add_option("--n", n);
  star->add_option("--backend", backend)->check(CLI::IsMember({"direct", "fast", "both"}));
  star->add_option("--in", in, "f1.json f2.json")->expected(2)->required();
  star->add_option("--out", out)->required();
  star->add_option("--report", report);

  auto* quant = app.add_subcommand("quantize", "matrix of the quantization map on a truncated Hermite basis");
  quant->add_option("--theta", theta)->required();
  quant->add_option("--alpha", alpha)->required();
  quant->add_option("--levels", levels);
  quant->add_option("--f", fin)->required();
  quant->add_option("--out", out)->required();
  quant->add_option("--report", report);

  auto* deform = app.add_subcommand("deform", "super-torus deformation checks");
  deform->add_option("--theta", theta);
  deform->add_option("--alpha", alpha);
  deform->add_option("--m", m);
  deform->add_option("--n", n);
  deform->add_option("--action", action)->check(CLI::IsMember({"torus"}));
  deform->add_option("--generators", generators, "k-list, e.g. \"1,0;0,1\"");
  deform->add_option("--check", check)->check(CLI::IsMember({"weyl", "hopf", "comodule", "norm"}));
  deform->add_option("--levels", levels, "basis size for --check norm");
  deform->add_option("--out", out)->required();

  auto* qft = app.add_subcommand("qft-check", "superfield action vs the harmonic action");
  qft->add_option("--theta", theta);
  qft->add_option("--alpha", alpha);
  qft->add_option("--b", b);
  qft->add_option("--nu", nu);
  qft->add_option("--Lambda", Lambda);
  qft->add_option("--grid", grid);
  qft->add_option("--box", box);
  qft->add_option("--out", out)->required();

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "run an acceptance suite");
  suite->add_option("name", suite_name)->required()->check(CLI::IsMember(suite_names()));
  auto* s_theta = suite->add_option("--theta", theta, "extra qft point");
  auto* s_alpha = suite->add_option("--alpha", alpha, "extra qft point");
  auto* s_b = suite->add_option("--b", b, "extra qft point");

  CLI11_PARSE(app, argc, argv);
  if (deform->parsed()) levels = deform->get_option("--levels")->count() ? levels : 16;

  try {
    if (star->parsed()) return cmd_star(g, theta, alpha, m, n, backend, in, out, report);
    if (quant->parsed()) return cmd_quantize(g, theta, alpha, levels, fin, out, report);
    if (deform->parsed()) return cmd_deform(g, theta, alpha, m, n, action, generators, check, levels, out);
    if (qft->parsed()) return cmd_qft(g, theta, alpha, b, nu, Lambda, grid, box, out);
    SuiteConfig cfg;
    cfg.seed = g.seed;
    cfg.strict = g.profile == "strict";
    if (s_theta->count() || s_alpha->count() || s_b->count()) cfg.qft_point = std::array<double, 3>{theta, alpha, b};
    return cmd_suite(g, suite_name, cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
