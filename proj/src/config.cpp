#include "bdqm/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace bdqm {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

std::vector<int> sigma_from(const Json& j, const std::string& where) {
    std::vector<int> out;
    if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a nonempty array");
    for (const auto& e : j) {
        if (!e.is_number_integer() || int(e) < 2)
            throw ConfigError(where + " entries must be integers >= 2");
        out.push_back(int(e));
    }
    return out;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    require_keys(j, {"sigma", "max_stage", "cutoff", "grid", "solver", "net", "seed", "samples",
                     "bridge_samples", "oracle_pairs", "use_uncorrected_lip_bound", "sigmas",
                     "baire_pairs", "format"},
                 "config");
    if (j.contains("sigma")) c.sigma = sigma_from(j.at("sigma"), "sigma");
    if (j.contains("max_stage")) c.max_stage = j.at("max_stage").get<int>();
    if (j.contains("cutoff")) c.cutoff = j.at("cutoff").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("bridge_samples")) c.bridge_samples = j.at("bridge_samples").get<int>();
    if (j.contains("oracle_pairs")) c.oracle_pairs = j.at("oracle_pairs").get<int>();
    if (j.contains("use_uncorrected_lip_bound"))
        c.use_uncorrected_lip_bound = j.at("use_uncorrected_lip_bound").get<bool>();
    if (j.contains("format")) {
        c.format = j.at("format").get<std::string>();
        if (c.format != "csv" && c.format != "json")
            throw ConfigError("format must be csv or json");
    }
    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        require_keys(g, {"oversample", "prune_floor", "tol", "min_grid", "refine"}, "grid");
        if (g.contains("oversample")) c.grid.oversample = g.at("oversample").get<int>();
        if (g.contains("prune_floor")) c.grid.prune_floor = g.at("prune_floor").get<double>();
        if (g.contains("tol")) c.grid.tol = g.at("tol").get<double>();
        if (g.contains("min_grid")) c.grid.min_grid = g.at("min_grid").get<int>();
        if (g.contains("refine")) c.grid.refine = g.at("refine").get<bool>();
    }
    if (j.contains("solver")) {
        const Json& s = j.at("solver");
        require_keys(s, {"restarts", "iterations", "step_decay", "initial_step", "tolerance"},
                     "solver");
        if (s.contains("restarts")) c.solver.restarts = s.at("restarts").get<int>();
        if (s.contains("iterations")) c.solver.iterations = s.at("iterations").get<int>();
        if (s.contains("step_decay")) c.solver.step_decay = s.at("step_decay").get<double>();
        if (s.contains("initial_step")) c.solver.initial_step = s.at("initial_step").get<double>();
        if (s.contains("tolerance")) c.solver.tolerance = s.at("tolerance").get<double>();
    }
    if (j.contains("net")) {
        const Json& nj = j.at("net");
        require_keys(nj, {"grid_points", "random_states"}, "net");
        if (nj.contains("grid_points")) c.net.grid_points = nj.at("grid_points").get<int>();
        if (nj.contains("random_states")) c.net.random_states = nj.at("random_states").get<int>();
    }
    if (j.contains("sigmas")) {
        c.sigmas.clear();
        for (const auto& e : j.at("sigmas")) c.sigmas.push_back(sigma_from(e, "sigmas entry"));
    }
    if (j.contains("baire_pairs")) {
        c.baire_pairs.clear();
        for (const auto& e : j.at("baire_pairs")) {
            if (!e.is_array() || e.size() != 2)
                throw ConfigError("baire_pairs entries must be pairs of sequences");
            c.baire_pairs.emplace_back(sigma_from(e[0], "baire pair"),
                                       sigma_from(e[1], "baire pair"));
        }
    }

    if (c.grid.oversample < 2) throw ConfigError("grid.oversample must be >= 2");
    if (c.grid.prune_floor < 0 || c.grid.tol < 0)
        throw ConfigError("grid floors must be nonnegative");
    if (c.max_stage < 0 || c.max_stage > int(c.sigma.size()))
        throw ConfigError("max_stage must lie within the sigma prefix");
    if (c.cutoff < 0) throw ConfigError("cutoff must be nonnegative");
    if (c.samples < 1 || c.bridge_samples < 1 || c.oracle_pairs < 1)
        throw ConfigError("sample counts must be positive");
    if (c.solver.restarts < 1 || c.solver.iterations < 1)
        throw ConfigError("solver needs at least one restart and one iteration");
    c.solver.seed = c.seed;
    c.net.seed = c.seed;
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["sigma"] = c.sigma;
    j["max_stage"] = c.max_stage;
    j["cutoff"] = c.cutoff;
    j["grid"] = {{"oversample", c.grid.oversample},
                 {"prune_floor", c.grid.prune_floor},
                 {"tol", c.grid.tol},
                 {"min_grid", c.grid.min_grid},
                 {"refine", c.grid.refine}};
    j["solver"] = {{"restarts", c.solver.restarts},
                   {"iterations", c.solver.iterations},
                   {"step_decay", c.solver.step_decay},
                   {"initial_step", c.solver.initial_step},
                   {"tolerance", c.solver.tolerance}};
    j["net"] = {{"grid_points", c.net.grid_points}, {"random_states", c.net.random_states}};
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["bridge_samples"] = c.bridge_samples;
    j["oracle_pairs"] = c.oracle_pairs;
    j["use_uncorrected_lip_bound"] = c.use_uncorrected_lip_bound;
    j["sigmas"] = c.sigmas;
    Json pairs = Json::array();
    for (const auto& [x, y] : c.baire_pairs) pairs.push_back(Json::array({x, y}));
    j["baire_pairs"] = pairs;
    j["format"] = c.format;
    return j;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
    return os.str();
}

}  // namespace bdqm
