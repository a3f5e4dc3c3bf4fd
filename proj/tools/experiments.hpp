#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "walklab/params.hpp"

namespace walklab {

struct LangevinSettings {
    double h = 0.01;
    std::int64_t burn_in = 100000;
    int chains = 64;
    std::int64_t retained = 2000;
    std::int64_t thin = 250;
    std::string integrator = "splitting";
};

struct SpeedupSettings {
    int chains = 8192;
    std::int64_t check_every = 20;
    std::int64_t max_steps = 6000;
    double start_sigma = 6.0;
    double threshold = 0.1;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
};

struct ExperimentConfig {
    std::vector<std::string> experiments;
    WalkParams params;
    std::vector<std::int64_t> t_list;
    std::vector<double> eta_list;
    std::vector<double> epsilon_list;
    LangevinSettings langevin;
    SpeedupSettings speedup;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "out";
    int threads = 1;
};

const std::vector<std::pair<std::string, std::string>>& known_experiments();

// Throws ConfigError (or the params errors) on invalid input.
ExperimentConfig parse_config(const nlohmann::json& raw);

// Semantic content only: excludes out_dir and threads, so reruns elsewhere
// fingerprint identically.
nlohmann::ordered_json canonical_config(const ExperimentConfig& c);
std::string config_fingerprint(const ExperimentConfig& c);

// Dry run: field-level errors, cap warnings, and a cost estimate.
nlohmann::ordered_json validate_config(const nlohmann::json& raw);

// Runs every configured experiment; returns the paths written.
std::vector<std::filesystem::path> run_experiments(const ExperimentConfig& c);

}  // namespace walklab
