// Command-line front end: runs a verification suite and writes report.csv,
// report.json and summary.json. Exit codes: 0 ok, 1 a check is violated,
// 2 invalid manifest or arguments, 3 computation failure.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "carnot/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// "abelian:3", "heisenberg:1", "htype:4x3" or a path to a group JSON file.
json group_arg(const std::string& s) {
  static const std::regex named(R"((abelian|heisenberg):(\d+))");
  static const std::regex htype(R"(htype:(\d+)x(\d+))");
  std::smatch mt;
  if (std::regex_match(s, mt, named)) return {{"kind", mt[1].str()}, {"n", std::stoi(mt[2].str())}};
  if (std::regex_match(s, mt, htype)) return {{"kind", "htype"}, {"m", std::stoi(mt[1].str())}, {"k", std::stoi(mt[2].str())}};
  return fs::absolute(s).string();
}

json grid_arg(const std::string& name, const std::string& s) {
  json out = json::array();
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t next = s.find(',', pos);
    const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw carnot::ManifestError("--" + name + ": cannot parse '" + tok + "'");
    out.push_back(v);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Hardy-type inequalities on Carnot groups"};
  std::string manifest_path, group, suite, out, method;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int shells = 0, battery = 0, points = 0, threads = -1;
  std::map<std::string, std::string> grids;
  app.add_option("--manifest", manifest_path, "JSON run manifest; other flags override its fields")->check(CLI::ExistingFile);
  app.add_option("--group", group, "abelian:N, heisenberg:N, htype:MxK or a group JSON file");
  app.add_option("--suite", suite, "identities|hardy|rellich|uncertainty|ckn|remainder|sharpness|all");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--samples", samples, "Monte Carlo samples per shell");
  app.add_option("--shells", shells, "number of radial shells");
  app.add_option("--method", method, "stratified-mc or tensor-grid");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--battery", battery, "random test functions per check");
  app.add_option("--points", points, "sample points per pointwise identity");
  app.add_option("--out", out, "output directory");
  for (const char* g : {"alpha", "gamma", "s", "q", "eps", "beta"})
    app.add_option(std::string("--") + g, grids[g], std::string("comma-separated ") + g + " grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  carnot::RunManifest manifest;
  try {
    json j = json::object();
    fs::path base = ".";
    if (!manifest_path.empty()) {
      std::ifstream f(manifest_path);
      try {
        j = json::parse(f);
      } catch (const std::exception& e) {
        throw carnot::ManifestError(std::string("manifest is not valid JSON: ") + e.what());
      }
      if (!j.is_object()) throw carnot::ManifestError("manifest must be a JSON object");
      base = fs::path(manifest_path).parent_path();
      if (base.empty()) base = ".";
    }
    if (!group.empty()) j["group"] = group_arg(group);
    if (!suite.empty()) j["suite"] = suite;
    if (*seed_opt) j["seed"] = seed;
    if (!out.empty()) j["output_dir"] = fs::absolute(out).string();
    if (battery) j["battery_size"] = battery;
    if (points) j["identity_points"] = points;
    for (const auto& [name, value] : grids) {
      if (app.count("--" + name)) j["grids"][name] = grid_arg(name, value);
    }
    if (samples || shells || !method.empty() || threads >= 0) {
      json& ij = j["integration"];
      if (ij.is_null()) ij = json::object();
      if (samples) ij["samples_per_shell"] = samples;
      if (shells) ij["shells"] = shells;
      if (!method.empty()) ij["method"] = method;
      if (threads >= 0) ij["threads"] = threads;
    }
    manifest = carnot::manifest_from_json(j, base);
  } catch (const carnot::ManifestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const carnot::SuiteResult r = carnot::run_and_write(manifest, std::cout);
    for (const auto& row : r.rows) {
      if (row.verdict == carnot::Verdict::Violated)
        std::cerr << "violated: " << row.inequality << " " << row.param << " " << row.detail << '\n';
    }
    return carnot::exit_code(r);
  } catch (const carnot::ManifestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << '\n';
    return 3;
  }
}
