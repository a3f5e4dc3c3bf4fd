#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "json.hpp"
#include "walklab/errors.hpp"

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw walklab::ConfigError("cannot open config: " + path);
    nlohmann::json j;
    f >> j;
    return j;
}

void print_error(const char* kind, const std::string& message) {
    nlohmann::ordered_json err;
    err["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << err.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"walklab: coined quantum walk / underdamped Langevin laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;

    CLI::App* run = app.add_subcommand("run", "run the experiments in a config");
    run->add_option("config", config_path, "JSON experiment config")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--threads", threads, "worker threads for chain-parallel work");

    CLI::App* validate = app.add_subcommand("validate", "dry-run validation and cost estimate");
    validate->add_option("config", config_path, "JSON experiment config")->required();

    CLI::App* list = app.add_subcommand("list-experiments", "list experiment names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& [name, desc] : walklab::known_experiments()) {
                std::printf("%-16s %s\n", name.c_str(), desc.c_str());
            }
            return 0;
        }
        if (validate->parsed()) {
            const auto report = walklab::validate_config(load_json(config_path));
            std::cout << report.dump(2) << "\n";
            return report["ok"].get<bool>() ? 0 : 2;
        }
        // run
        walklab::ExperimentConfig cfg;
        try {
            cfg = walklab::parse_config(load_json(config_path));
        } catch (const walklab::Error& e) {
            print_error("ValidationError", e.what());
            return 2;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;
        cfg.threads = threads;
        const auto files = walklab::run_experiments(cfg);
        nlohmann::ordered_json done;
        done["fingerprint"] = walklab::config_fingerprint(cfg);
        done["files"] = nlohmann::ordered_json::array();
        for (const auto& f : files) done["files"].push_back(f.string());
        std::cout << done.dump(2) << "\n";
        return 0;
    } catch (const walklab::NonFinite& e) {
        print_error("NonFinite", e.what());
        return 3;
    } catch (const walklab::ConvergenceError& e) {
        print_error("ConvergenceError", e.what());
        return 3;
    } catch (const walklab::Error& e) {
        print_error("Error", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("Unexpected", e.what());
        return 3;
    }
}
