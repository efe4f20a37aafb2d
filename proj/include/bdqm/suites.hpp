#ifndef BDQM_SUITES_HPP
#define BDQM_SUITES_HPP

#include <string>
#include <vector>

#include "bdqm/config.hpp"
#include "bdqm/spaces.hpp"

namespace bdqm {

// Named invariant suites, one per library layer.  Check names are stable
// identifiers ("layer/property"); the verify command and the acceptance
// runner both consume them.
std::vector<CheckResult> matfun_suite(const ExperimentConfig& cfg);
std::vector<CheckResult> stage_suite(const ExperimentConfig& cfg);
std::vector<CheckResult> metric_suite(const ExperimentConfig& cfg);
std::vector<CheckResult> tunnel_suite(const ExperimentConfig& cfg);
std::vector<CheckResult> thread_suite(const ExperimentConfig& cfg);

std::vector<CheckResult> run_all_suites(const ExperimentConfig& cfg);

Json report_to_json(const ExperimentConfig& cfg, const std::vector<CheckResult>& checks);

}  // namespace bdqm

#endif
