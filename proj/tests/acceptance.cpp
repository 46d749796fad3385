// Acceptance run: ten criteria on the default configuration, one line each.
// A criterion passes when its checks pass, no item failed numerically, and
// the part finished within its time budget. Exit status 1 if any fails.

#include "dalorenz/lab/suites.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace dalorenz::lab;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget;  // seconds
  std::function<SuiteReport(const ExperimentConfig&)> run;
  std::vector<std::string> checks;  // empty: every check of the part
};

std::string summarize(const SuiteReport& r, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& c : r.checks) {
    if (!names.empty() && std::find(names.begin(), names.end(), c.name) == names.end()) continue;
    if (!c.pass || !names.empty()) {
      out += fmt::format(" {}{}={:.6g}", c.pass ? "" : "!", c.name, c.measured);
    }
  }
  return out;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const ExperimentConfig cfg;  // defaults, single worker

  const std::vector<Criterion> criteria{
      {1, "parameter gate", 1.0, validate_suite, {}},
      {2, "integrator oracles", 10.0, integrator_oracles,
       {"linear_flow", "linear_frames", "frames_vs_finite_differences", "cocycle"}},
      {3, "return-time bound", 30.0, return_map_suite, {}},
      {4, "cone contraction and expansion", 60.0, cones_suite, {}},
      {5, "cu-curve growth", 120.0, curves_suite, {}},
      {6, "exponent ordering", 300.0, attractor_exponents,
       {"orbits_complete", "eta_ss<-theta+0.1", "-theta+0.1<eta_I", "eta_I<=1e-3", "0.01<=eta_2", "eta_ss<=lambda_s0",
        "lambda_s0<-theta", "-theta<=eta_I", "eta_I<=0", "0<eta_2"}},
      {7, "sectional expansion", 180.0, sectional_suite, {}},
      {8, "non-domination on P", 10.0, non_domination, {}},
      {9, "surgery index structure", 60.0, surgery_suite, {}},
      {10, "classical cross-check", 120.0, classical_lyapunov, {}},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const SuiteReport r = c.run(cfg);
    bool pass = r.errors.empty() && r.wall_seconds < c.budget;
    std::size_t seen = 0;
    for (const auto& ch : r.checks) {
      if (!c.checks.empty() && std::find(c.checks.begin(), c.checks.end(), ch.name) == c.checks.end()) continue;
      ++seen;
      pass = pass && ch.pass;
    }
    pass = pass && seen > 0 && (c.checks.empty() || seen == c.checks.size());
    if (c.id == 4) {
      const auto* pts = r.find("points_complete");
      pass = pass && pts != nullptr && pts->measured >= 1e4;
    }
    failed += pass ? 0 : 1;
    fmt::print("criterion {:>2} {} {} ({:.2f} s of {:.0f} s){}{}\n", c.id, pass ? "PASS" : "FAIL", c.title,
               r.wall_seconds, c.budget, summarize(r, c.checks),
               r.errors.empty() ? "" : fmt::format(" errors={}", r.errors.size()));
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
