#pragma once

// Experiment suites. Each returns a SuiteReport whose checks carry the anchor
// string of the inequality they test. Sampling is keyed by (seed, suite,
// index) so results do not depend on `jobs`.

#include "dalorenz/lab/config.hpp"
#include "dalorenz/lab/report.hpp"

#include <string>
#include <vector>

namespace dalorenz::lab {

/// Suite names in run order (without "all").
const std::vector<std::string>& suite_names();

/// Runs one suite by name. Numerical failures of single items are recorded in
/// `errors`; a failure of the whole suite becomes a failed "completed" check.
SuiteReport run_suite(const std::string& name, const ExperimentConfig& cfg);

/// `which` is a suite name or "all".
ReportBundle run_experiment(const ExperimentConfig& cfg, const std::string& which);

// Parts, exposed so callers can time them separately.
SuiteReport validate_suite(const ExperimentConfig& cfg);
SuiteReport return_map_suite(const ExperimentConfig& cfg);
SuiteReport cones_suite(const ExperimentConfig& cfg);
SuiteReport curves_suite(const ExperimentConfig& cfg);
SuiteReport attractor_exponents(const ExperimentConfig& cfg);
SuiteReport non_domination(const ExperimentConfig& cfg);  // always in saddle-node mode
SuiteReport exponents_suite(const ExperimentConfig& cfg);
SuiteReport sectional_suite(const ExperimentConfig& cfg);
SuiteReport surgery_suite(const ExperimentConfig& cfg);
SuiteReport integrator_oracles(const ExperimentConfig& cfg);
SuiteReport classical_lyapunov(const ExperimentConfig& cfg);
SuiteReport classical_xcheck_suite(const ExperimentConfig& cfg);

}  // namespace dalorenz::lab
