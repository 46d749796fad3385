// dalorenz: run experiment suites and write the report bundle.
//
//   dalorenz <suite> [--config FILE] [--out DIR] [--seed N] [--jobs N] [--set key=value ...]
//
// Exit status: 0 all checks pass, 1 some check failed, 2 bad configuration,
// 3 I/O or other fatal error.

#include "dalorenz/error.hpp"
#include "dalorenz/lab/config.hpp"
#include "dalorenz/lab/report.hpp"
#include "dalorenz/lab/suites.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <optional>

using namespace dalorenz;

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on a geometric Lorenz attractor and its 4D skew extensions"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--set", overrides, "override one key, key=value (repeatable)");
  app.add_flag_function("--list-keys", [](std::int64_t) {
    for (const auto& k : lab::config_keys()) std::puts(k.c_str());
    std::exit(0);
  }, "print the configuration keys and exit");

  std::vector<std::string> names = lab::suite_names();
  names.push_back("all");
  for (const auto& n : names) app.add_subcommand(n, "run the " + n + " suite")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string suite = app.get_subcommands().front()->get_name();

  lab::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = lab::load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::Config, fmt::format("--set expects key=value, got '{}'", kv));
      lab::set_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    lab::check_config(cfg);
  } catch (const Error& e) {
    fmt::print(stderr, "dalorenz: {}\n", e.what());
    return e.kind() == ErrorKind::Config ? 2 : 3;
  }

  try {
    const auto bundle = lab::run_experiment(cfg, suite);
    const auto paths = lab::emit(bundle, out_dir);
    bool pass = true;
    for (const auto& s : bundle.suites) {
      for (const auto& c : s.checks) {
        fmt::print("{:<17} {:<4} {:<32} {:<10} measured={:.6g} threshold={:.6g}\n", s.name, c.pass ? "ok" : "FAIL",
                   c.name, c.anchor, c.measured, c.threshold);
      }
      for (const auto& e : s.errors) fmt::print("{:<17} error {}\n", s.name, e);
      fmt::print("{:<17} {} ({:.2f} s)\n", s.name, s.passed() ? "PASS" : "FAIL", s.wall_seconds);
      pass = pass && s.passed();
    }
    fmt::print("wrote {} files to {}\n", paths.size(), out_dir);
    return pass ? 0 : 1;
  } catch (const Error& e) {
    fmt::print(stderr, "dalorenz: {}\n", e.what());
    return e.kind() == ErrorKind::Config ? 2 : 3;
  } catch (const std::exception& e) {
    fmt::print(stderr, "dalorenz: {}\n", e.what());
    return 3;
  }
}
