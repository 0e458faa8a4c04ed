#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ofrac/frac_operator.hpp"
#include "ofrac/io.hpp"
#include "ofrac/young.hpp"

namespace ofrac {

/// Schema version accepted in the scenario "version" field.
inline constexpr int kScenarioSchemaVersion = 1;

const char* library_version() noexcept;

/// A parsed scenario file. Function specs stay as JSON and are built on
/// use, so solutions saved by earlier operations can be referenced by name.
struct Scenario {
  int version = kScenarioSchemaVersion;
  std::string name;
  YoungSpec young;
  double s = 0.5;
  int n = 1;
  std::uint64_t seed = 1;
  QuadratureConfig config;
  std::map<std::string, nlohmann::json> functions;
  std::vector<nlohmann::json> operations;
};

/// Validates the top-level schema; SchemaError on any violation, including
/// s outside (0, 1), n other than 1, and unknown operation names.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// Operation names understood by the runner, alphabetical.
const std::vector<std::string>& operation_names();

struct RunOptions {
  std::filesystem::path out_dir = "ofrac-out";
  /// Overrides every check tolerance of the scenario.
  std::optional<double> tol;
  /// 0 means: ORLICZ_FRAC_THREADS if set, else 1.
  int threads = 0;
  bool verbose = false;
  /// Run only these operations (all when empty).
  std::vector<std::string> only;
};

struct ScenarioOutcome {
  io::Json report;
  bool passed = true;
};

/// Executes the operations in order, writing report.json and CSV tables to
/// options.out_dir. Library errors propagate.
ScenarioOutcome execute_scenario(const Scenario& scenario, const RunOptions& options);

/// Exit code: 0 if every check passed, 2 if a check failed, 1 on errors
/// (message on stderr).
int run_scenario(const std::filesystem::path& path, const RunOptions& options);

/// Thread count from options, then ORLICZ_FRAC_THREADS, then 1.
int resolve_threads(int requested);

}  // namespace ofrac
