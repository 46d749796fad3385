#pragma once

// Report bundle: summary.json (checks + suite data), one CSV per table,
// config.echo, and timing.json. Everything except timing.json is a pure
// function of (config, seed).

#include <json.hpp>

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace dalorenz::lab {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct CheckResult {
  std::string name;
  std::string anchor;
  std::string statement;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct SuiteReport {
  std::string name;
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  Json data = Json::object();
  std::vector<std::string> errors;  // per-item numerical failures
  double wall_seconds = 0.0;

  bool passed() const;
  const CheckResult* find(const std::string& check) const;
  void check(std::string name, std::string anchor, std::string statement, bool pass, double measured,
             double threshold);
};

struct ReportBundle {
  std::vector<SuiteReport> suites;
  std::string config_echo;
};

Json summary_json(const ReportBundle& bundle);

/// CSV text: header row, LF line ends, reals with 17 significant digits.
std::string to_csv(const Table& table);

/// Writes the bundle into dir (created if needed); each file is written to a
/// temporary name and renamed. Returns the written paths.
std::vector<std::filesystem::path> emit(const ReportBundle& bundle, const std::filesystem::path& dir);

void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dalorenz::lab
