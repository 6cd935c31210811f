#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "actnet/experiments.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw actnet::ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Representative action-subset selection experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<unsigned> workers;
    std::string profile = "paper";

    for (const char* name : {"iid", "tabular", "cartpole", "properties"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--out", out, "output path (overrides the config)");
        sub->add_option("--workers", workers, "worker threads (0 = all cores)");
        sub->add_option("--profile", profile, "built-in defaults")->check(CLI::IsMember({"paper", "ci"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string experiment = app.get_subcommands().front()->get_name();
    try {
        actnet::ExperimentConfig config = actnet::profile_config(profile, experiment);
        if (!config_path.empty()) config = actnet::apply_config_json(config, read_file(config_path));
        if (config.experiment != experiment)
            throw actnet::ConfigError("config is for experiment '" + config.experiment + "', not '" + experiment + "'");
        if (seed) config.seed = *seed;
        if (!out.empty()) config.output_path = out;
        if (workers) config.workers = *workers;
        return actnet::run_experiment(config, std::cout);
    } catch (const actnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
