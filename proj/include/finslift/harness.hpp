#pragma once

// Scenario files, batch evaluation over seeded sample points, and reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finslift/compare.hpp"

namespace finslift {

inline constexpr std::uint64_t kDefaultSeed = 0xF1A5;
inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kEngineVersion = "finslift 0.1.0";

struct Box {
  std::vector<double> lo, hi;
};

struct Scenario {
  std::string name;

  std::string metric_kind;  // euclidean | sphere-chart | randers
  int n = 0;
  double p = 1.0;
  std::map<std::string, std::vector<double>> metric_params;
  Box metric_box;

  std::string immersion_kind;  // plane | linear | sphere | cylinder | graph
  int m = 0;
  std::map<std::string, std::vector<double>> immersion_params;
  Box immersion_box;

  int points = 10;
  std::uint64_t seed = kDefaultSeed;
  std::map<std::string, double> tol;
  // nullopt runs everything; an empty list runs nothing.
  std::optional<std::vector<std::string>> checks;
};

// Throws ConfigError carrying the offending line.
Scenario parse_scenario(std::string_view text, std::string name = "scenario");
// `ref` is a path or the name of a shipped scenario.
Scenario load_scenario(const std::string& ref);
std::string scenario_dir();
std::vector<std::string> shipped_scenarios();

MetricModel build_metric(const Scenario& s);
Immersion build_immersion(const Scenario& s);

struct CheckInfo {
  std::string name;
  std::string tag;
  double tolerance;
  bool informational;
  std::string description;
};
const std::vector<CheckInfo>& check_catalog();

struct ReportRow {
  int point = 0;
  std::string identity;
  std::string tag;
  double abs_residual = 0;
  double residual = 0;
  double tolerance = 0;
  bool informational = false;
  bool pass = true;
  std::string note;
  std::vector<double> lhs, rhs;  // kept for informational rows only
};

struct IdentitySummary {
  std::string identity;
  std::string tag;
  int rows = 0;
  double max_residual = 0;
  double tolerance = 0;
  bool informational = false;
  bool pass = true;
};

struct RunReport {
  Scenario scenario;
  std::vector<std::vector<double>> ambient_points;  // x then y
  std::vector<std::vector<double>> sub_points;      // u then v
  std::vector<ReportRow> rows;
  std::vector<IdentitySummary> summary;
  bool pass = true;
  double wall_time = 0;
};

RunReport run_scenario(const Scenario& s);

enum class Format { Human, Machine };
std::string emit_report(const RunReport& r, Format f);

// 0 when every asserted identity passes, 1 otherwise.
int exit_code(const RunReport& r);

}  // namespace finslift
