#include "dalorenz/lab/report.hpp"

#include "dalorenz/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace dalorenz::lab {

bool SuiteReport::passed() const {
  if (!errors.empty()) return false;
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const CheckResult* SuiteReport::find(const std::string& check) const {
  for (const auto& c : checks) {
    if (c.name == check) return &c;
  }
  return nullptr;
}

void SuiteReport::check(std::string n, std::string anchor, std::string statement, bool pass, double measured,
                        double threshold) {
  checks.push_back({std::move(n), std::move(anchor), std::move(statement), pass, measured, threshold});
}

namespace {

Json number(double v) {
  // JSON has no inf/nan
  if (!std::isfinite(v)) return Json(nullptr);
  return Json(v);
}

std::string csv_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return fmt::format("{:.17g}", *d);
  if (const long long* i = std::get_if<long long>(&c)) return fmt::format("{}", *i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

Json summary_json(const ReportBundle& bundle) {
  Json root = Json::object();
  bool all = true;
  Json suites = Json::array();
  Json tables = Json::object();
  for (const auto& s : bundle.suites) {
    Json js = Json::object();
    js["name"] = s.name;
    js["pass"] = s.passed();
    Json checks = Json::array();
    for (const auto& c : s.checks) {
      Json jc = Json::object();
      jc["name"] = c.name;
      jc["anchor"] = c.anchor;
      jc["statement"] = c.statement;
      jc["pass"] = c.pass;
      jc["measured"] = number(c.measured);
      jc["threshold"] = number(c.threshold);
      checks.push_back(jc);
    }
    js["checks"] = checks;
    js["data"] = s.data;
    js["errors"] = s.errors;
    suites.push_back(js);
    for (const auto& t : s.tables) tables[t.name] = t.name + ".csv";
    all = all && s.passed();
  }
  root["pass"] = all;
  root["suites"] = suites;
  root["tables"] = tables;
  return root;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::vector<std::filesystem::path> emit(const ReportBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    write_atomic(path, content);
    written.push_back(path);
  };
  put("summary.json", summary_json(bundle).dump(2) + "\n");
  for (const auto& s : bundle.suites) {
    for (const auto& t : s.tables) put(t.name + ".csv", to_csv(t));
  }
  put("config.echo", bundle.config_echo);
  Json timing = Json::object();
  for (const auto& s : bundle.suites) timing[s.name] = s.wall_seconds;
  put("timing.json", timing.dump(2) + "\n");
  return written;
}

}  // namespace dalorenz::lab
