#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/inequalities.hpp"

namespace carnot {

enum class Suite { Identities, Hardy, Rellich, Uncertainty, Ckn, Remainder, Sharpness, All };

std::string to_string(Suite s);
Suite suite_from_string(const std::string& s);

/// Raised for anything wrong with a manifest; the CLI maps it to exit code 2.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunManifest {
  GroupSpec group = GroupSpec::heisenberg(1);
  Suite suite = Suite::Identities;
  std::uint64_t seed = 1;
  /// Unset grids fall back to per-suite defaults; a present but empty grid is an error.
  std::optional<std::vector<double>> alpha, gamma, s, q, eps, beta;
  IntegrationConfig integration;
  int battery_size = 20;
  int identity_points = 1000;
  std::filesystem::path output_dir = "carnot-out";
};

/// "group" is either an inline group object or a path to one, resolved against base_dir.
RunManifest manifest_from_json(const nlohmann::json& in, const std::filesystem::path& base_dir = ".");
RunManifest load_manifest(const std::filesystem::path& path);
void to_json(nlohmann::json& out, const RunManifest& m);

struct ReportRow {
  std::string group;
  std::string inequality;
  std::optional<double> alpha;
  std::string param;
  double quotient = 0.0;
  double sigma = 0.0;
  std::optional<double> sharp_constant;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
  nlohmann::json data;
};

struct SuiteResult {
  std::vector<ReportRow> rows;
  /// Checks not run because the group or parameter is outside their range.
  std::vector<std::string> skipped;
  int count(Verdict v) const;
};

SuiteResult run_checks(const RunManifest& m);

inline constexpr const char* kCsvHeader = "group,inequality,alpha,param,quotient,sigma,sharp_constant,verdict,detail";
std::string to_csv(const SuiteResult& r);
nlohmann::json summary_json(const SuiteResult& r);

/// Exit status: 0 all rows hold or are inconclusive, 1 some row is violated.
int exit_code(const SuiteResult& r);

/// Runs the manifest and writes report.csv, report.json and summary.json into
/// output_dir. Files are written to temporaries and renamed only once all are complete.
SuiteResult run_and_write(const RunManifest& m, std::ostream& log);

}  // namespace carnot
