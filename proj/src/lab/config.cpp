#include "dalorenz/lab/config.hpp"

#include "dalorenz/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace dalorenz::lab {

namespace {

struct Entry {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw Error(ErrorKind::Config, fmt::format("config key '{}': cannot parse '{}' as {}", key, value, what));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

template <class Acc>
Entry real(std::string key, Acc acc) {
  return {key, [acc, key](ExperimentConfig& c, const std::string& v) { acc(c) = to_double(key, v); },
          [acc](const ExperimentConfig& c) { return fmt_double(acc(c)); }};
}

template <class Acc>
Entry integer(std::string key, Acc acc) {
  return {key,
          [acc, key](ExperimentConfig& c, const std::string& v) {
            acc(c) = static_cast<std::remove_reference_t<decltype(acc(c))>>(to_int(key, v));
          },
          [acc](const ExperimentConfig& c) { return fmt::format("{}", acc(c)); }};
}

template <class Acc>
Entry boolean(std::string key, Acc acc) {
  return {key, [acc, key](ExperimentConfig& c, const std::string& v) { acc(c) = to_bool(key, v); },
          [acc](const ExperimentConfig& c) { return std::string(acc(c) ? "true" : "false"); }};
}

#define FIELD(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back(real("lorenz.lambda_s", FIELD(lorenz.lambda_s)));
    e.push_back(real("lorenz.lambda_c", FIELD(lorenz.lambda_c)));
    e.push_back(real("lorenz.lambda_u", FIELD(lorenz.lambda_u)));
    e.push_back(real("lorenz.ear_B", FIELD(lorenz.ear_B)));
    e.push_back(real("lorenz.ear_offset", FIELD(lorenz.ear_offset)));
    e.push_back(real("lorenz.ear_c", FIELD(lorenz.ear_c)));
    e.push_back(real("lorenz.ear_d", FIELD(lorenz.ear_d)));
    e.push_back(real("lorenz.tau_E", FIELD(lorenz.tau_E)));
    e.push_back(real("lorenz.gamma", FIELD(lorenz.gamma)));
    e.push_back(real("classical.sigma", FIELD(classical.sigma)));
    e.push_back(real("classical.rho", FIELD(classical.rho)));
    e.push_back(real("classical.beta", FIELD(classical.beta)));
    e.push_back(real("skew.theta", FIELD(skew.theta)));
    e.push_back(real("skew.tube_radius", FIELD(skew.tube_radius)));
    e.push_back(real("skew.s_plateau", FIELD(skew.s_plateau)));
    e.push_back(real("skew.s_max", FIELD(skew.s_max)));
    e.push_back(real("skew.kappa", FIELD(skew.kappa)));
    e.push_back(real("skew.delta", FIELD(skew.delta)));
    e.push_back({"skew.mode", [](ExperimentConfig& c, const std::string& v) { c.skew.mode = skew4d::parse_mode(v); },
                 [](const ExperimentConfig& c) { return skew4d::to_string(c.skew.mode); }});
    e.push_back(real("integrator.rel_tol", FIELD(integrator.rel_tol)));
    e.push_back(real("integrator.abs_tol", FIELD(integrator.abs_tol)));
    e.push_back(real("integrator.max_step", FIELD(integrator.max_step)));
    e.push_back(real("integrator.event_refine_tol", FIELD(integrator.event_refine_tol)));
    e.push_back(real("section.on_leaf_tol", FIELD(on_leaf_tol)));
    e.push_back(integer("return_map.grid_x1", FIELD(grid_x1)));
    e.push_back(integer("return_map.grid_x2", FIELD(grid_x2)));
    e.push_back(integer("return_map.grid_s", FIELD(grid_s)));
    e.push_back(integer("return_map.hist_bins", FIELD(hist_bins)));
    e.push_back(integer("cones.grid", FIELD(cones_grid)));
    e.push_back(integer("cones.near_l_points", FIELD(cones_near_l)));
    e.push_back(real("cones.near_l_width", FIELD(cones_near_l_width)));
    e.push_back(integer("curves.count", FIELD(curves_count)));
    e.push_back(real("curves.length", FIELD(curves_length)));
    e.push_back(real("curves.eps0", FIELD(curves_eps0)));
    e.push_back(integer("curves.k_max", FIELD(curves_k_max)));
    e.push_back(real("curves.alpha", FIELD(curves_alpha)));
    e.push_back(boolean("curves.continue_to_crossing", FIELD(curves_continue_to_crossing)));
    e.push_back(integer("exponents.orbits", FIELD(exponents_orbits)));
    e.push_back(integer("exponents.returns", FIELD(exponents_returns)));
    e.push_back(integer("exponents.warmup", FIELD(exponents_warmup)));
    e.push_back(real("exponents.burn_in", FIELD(exponents_burn_in)));
    e.push_back(real("exponents.window", FIELD(exponents_window)));
    e.push_back(integer("sectional.orbits", FIELD(sectional_orbits)));
    e.push_back(real("sectional.horizon", FIELD(sectional_horizon)));
    e.push_back(real("sectional.window", FIELD(sectional_window)));
    e.push_back(real("sectional.burn_in", FIELD(sectional_burn_in)));
    e.push_back({"surgery.deltas",
                 [](ExperimentConfig& c, const std::string& v) {
                   std::vector<double> out;
                   std::stringstream ss(v);
                   std::string item;
                   while (std::getline(ss, item, ',')) {
                     item = trim(item);
                     if (!item.empty()) out.push_back(to_double("surgery.deltas", item));
                   }
                   c.surgery_deltas = out;
                 },
                 [](const ExperimentConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.surgery_deltas.size(); ++i) {
                     if (i) s += ", ";
                     s += fmt_double(c.surgery_deltas[i]);
                   }
                   return s;
                 }});
    e.push_back(integer("surgery.periods", FIELD(periodic_periods)));
    e.push_back(real("classical.horizon", FIELD(classical_horizon)));
    e.push_back(real("classical.transient", FIELD(classical_transient)));
    e.push_back(real("classical.renorm_dt", FIELD(classical_renorm_dt)));
    e.push_back(real("classical.alt_rel_tol", FIELD(classical_alt_rel_tol)));
    e.push_back(integer("seed", FIELD(seed)));
    e.push_back(integer("jobs", FIELD(jobs)));
    return e;
  }();
  return entries;
}

#undef FIELD

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& e : registry()) keys.push_back(e.key);
  return keys;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& e : registry()) {
    if (e.key == key) {
      e.set(cfg, trim(value));
      return;
    }
  }
  throw Error(ErrorKind::Config, fmt::format("unknown config key '{}'", key));
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, fmt::format("config line {}: expected 'key = value'", lineno));
    }
    set_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Io, fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

namespace {

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw Error(ErrorKind::Config, fmt::format("config key '{}': {}", key, what));
}

}  // namespace

void check_config(const ExperimentConfig& c) {
  require(c.integrator.rel_tol > 0.0, "integrator.rel_tol", "must be positive");
  require(c.integrator.abs_tol > 0.0, "integrator.abs_tol", "must be positive");
  require(c.integrator.max_step > 0.0, "integrator.max_step", "must be positive");
  require(c.integrator.event_refine_tol > 0.0 && c.integrator.event_refine_tol <= c.integrator.abs_tol,
          "integrator.event_refine_tol", "must be positive and at most integrator.abs_tol");
  require(c.on_leaf_tol > 0.0, "section.on_leaf_tol", "must be positive");
  require(c.grid_x1 > 0, "return_map.grid_x1", "must be positive");
  require(c.grid_x2 > 0 && c.grid_x2 % 2 == 0, "return_map.grid_x2", "must be positive and even (cell centres avoid L)");
  require(c.grid_s > 0, "return_map.grid_s", "must be positive");
  require(c.hist_bins > 0, "return_map.hist_bins", "must be positive");
  require(c.cones_grid > 0 && c.cones_grid % 2 == 0, "cones.grid", "must be positive and even");
  require(c.cones_near_l >= 0, "cones.near_l_points", "must be non-negative");
  require(c.cones_near_l_width > 0.0 && c.cones_near_l_width < 1.0, "cones.near_l_width", "must lie in (0, 1)");
  require(c.curves_count >= 0, "curves.count", "must be non-negative");
  require(c.curves_length > 0.0 && c.curves_length < 0.5, "curves.length", "must lie in (0, 0.5)");
  require(c.curves_eps0 > 0.0, "curves.eps0", "must be positive");
  require(c.curves_k_max > 0, "curves.k_max", "must be positive");
  require(c.curves_alpha > 0.0, "curves.alpha", "must be positive");
  require(c.exponents_orbits >= 0, "exponents.orbits", "must be non-negative");
  require(c.exponents_returns > 0, "exponents.returns", "must be positive");
  require(c.exponents_warmup >= 0, "exponents.warmup", "must be non-negative");
  require(c.exponents_burn_in >= 0.0, "exponents.burn_in", "must be non-negative");
  require(c.exponents_window > 0.0, "exponents.window", "must be positive");
  require(c.sectional_orbits >= 0, "sectional.orbits", "must be non-negative");
  require(c.sectional_horizon > 0.0, "sectional.horizon", "must be positive");
  require(c.sectional_window > 0.0, "sectional.window", "must be positive");
  require(c.sectional_burn_in >= 0.0, "sectional.burn_in", "must be non-negative");
  require(!c.surgery_deltas.empty(), "surgery.deltas", "must list at least one value");
  for (double d : c.surgery_deltas) require(d >= 0.0, "surgery.deltas", "values must be non-negative");
  require(c.periodic_periods >= 4, "surgery.periods", "must be at least 4");
  require(c.classical_horizon > 0.0, "classical.horizon", "must be positive");
  require(c.classical_transient >= 0.0, "classical.transient", "must be non-negative");
  require(c.classical_renorm_dt > 0.0, "classical.renorm_dt", "must be positive");
  require(c.classical_alt_rel_tol > 0.0, "classical.alt_rel_tol", "must be positive");
  require(c.jobs > 0, "jobs", "must be positive");
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& e : registry()) out += e.key + " = " + e.get(cfg) + "\n";
  return out;
}

}  // namespace dalorenz::lab
