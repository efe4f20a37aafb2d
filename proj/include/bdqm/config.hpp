#ifndef BDQM_CONFIG_HPP
#define BDQM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdqm/kantorovich.hpp"
#include "bdqm/matfun.hpp"
#include "bdqm/spaces.hpp"

namespace bdqm {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::vector<int> sigma = {2, 3};
    int max_stage = 2;
    int cutoff = 2;
    GridParams grid;
    SolverParams solver;
    NetParams net;
    std::uint64_t seed = 1234;
    int samples = 100;
    int bridge_samples = 200;
    int oracle_pairs = 50;
    bool use_uncorrected_lip_bound = false;
    std::vector<std::vector<int>> sigmas = {{2, 3}, {2, 2, 2}};
    std::vector<std::pair<std::vector<int>, std::vector<int>>> baire_pairs = {
        {{2, 2, 2}, {2, 2, 3}}, {{2, 3}, {3, 2}}, {{2, 2, 2, 2}, {2, 2, 2, 3}}};
    std::string format = "csv";
};

// Parses, validates, and fills defaults; unknown keys are rejected so that
// configs stay byte-reproducible documents of what actually ran.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

// Fully materialized round trip (all defaults made explicit).
Json config_to_json(const ExperimentConfig& c);

// 12 significant digits, shortest otherwise; the one formatter used by every
// CSV/JSON emitter so outputs diff cleanly.
std::string format_number(double v);

std::string csv_line(const std::vector<std::string>& cells);

}  // namespace bdqm

#endif
