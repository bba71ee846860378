#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "superstar/params.hpp"

namespace superstar {

inline constexpr int kReportSchemaVersion = 1;

struct SuiteConfig {
  std::uint64_t seed = 20110411;
  /// strict multiplies the randomized sample counts; tolerances are the same in both profiles.
  bool strict = false;
  /// Extra (θ, α, b) point checked by the qft criterion in addition to the fixed sweep.
  std::optional<std::array<double, 3>> qft_point;
};

/// value compared against bound; `upper` means value < bound passes, otherwise value > bound.
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;
  bool pass() const { return upper ? value < bound : value > bound; }
};

struct CriterionReport {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: no runtime bound
  nlohmann::json data;      // sweeps, fitted constants and other measured values
  bool passed() const;
  /// First failing check, or empty.
  std::string first_failure() const;
};

inline constexpr int kCriterionCount = 11;
CriterionReport run_criterion(int id, const SuiteConfig& cfg);

struct SuiteReport {
  std::string name;
  std::vector<CriterionReport> criteria;
  nlohmann::json constants;
  bool passed() const;
};

const std::vector<std::string>& suite_names();
/// Criteria covered by a suite ("all" covers every criterion).
std::vector<int> suite_criteria(const std::string& name);
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

/// Phase sign, Clifford scalar, Θ convention and normalization constants for p.
nlohmann::json derived_constants(const DeformationParams& p);

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const CriterionReport& r);
nlohmann::json to_json(const SuiteReport& r, const SuiteConfig& cfg);
std::string summary_text(const SuiteReport& r);
std::string pass_line(const CriterionReport& r);

struct Series {
  std::string label;
  std::vector<double> x, y;
};
/// Static line plot; log axes when requested (non-positive values are dropped).
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series, bool logx, bool logy);

/// Writes <name>.json, <name>.txt and the SVG plots of the suite's sweeps into dir.
std::vector<std::string> write_suite_outputs(const SuiteReport& r, const SuiteConfig& cfg, const std::string& dir);

}  // namespace superstar
