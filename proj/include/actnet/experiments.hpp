#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actnet/cartpole.hpp"
#include "actnet/properties.hpp"

namespace actnet {

/// Invalid or unknown configuration; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IidConfig {
    std::size_t n = 10;
    std::size_t k_min = 1;
    std::size_t k_max = 50;
    std::vector<std::size_t> ms{2, 5, 10};
    std::size_t mc_samples = 100'000;
    /// Adds sim_regret/sim_stderr columns from direct simulation.
    bool simulate = false;
    std::size_t sim_episodes = 100'000;
};

struct TabularConfig {
    std::vector<double> rhos;  // default 0.01, 0.02, ..., 0.99
    std::size_t k_min = 1;
    std::size_t k_max = 20;
    /// Adds mc_loss/mc_stderr columns for rho values listed in mc_rhos.
    bool monte_carlo = false;
    std::vector<double> mc_rhos{0.1, 0.3, 0.5, 0.7, 0.9};
    std::size_t replications = 100;
    std::size_t samples_per_replication = 100'000;
};

struct CartpoleConfig {
    std::string difficulty = "easy";
    std::optional<double> variation;
    std::vector<std::size_t> ks{3, 5, 8, 10, 12, 15, 20};
    std::size_t repetitions = 30;
    std::size_t episodes = 10'000;
    double discount = 0.99;
    double learning_rate = 0.1;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_decay_fraction = 0.5;
    double td_threshold = 1e-3;
    std::size_t td_patience = 5;
};

struct PropertiesConfig {
    std::size_t fixtures = 20;
    std::size_t samples = 100'000;
    std::size_t max_cloud = 20;
};

struct ExperimentConfig {
    std::string experiment;  // iid, tabular, cartpole, properties
    std::uint64_t seed = 20240601;
    std::string output_path;
    unsigned workers = 0;  // 0 = hardware concurrency
    IidConfig iid;
    TabularConfig tabular;
    CartpoleConfig cartpole;
    PropertiesConfig properties;

    /// Throws ConfigError on empty ranges or out-of-range values.
    void validate() const;
};

/// Built-in defaults: "paper" (full-scale runs) or "ci" (desk-scale cart-pole).
ExperimentConfig profile_config(const std::string& profile, const std::string& experiment);

/// Overlays a JSON document onto `base`; unknown keys are rejected.
ExperimentConfig apply_config_json(ExperimentConfig base, const std::string& json_text);

/// Canonical JSON of every field that influences results (not workers or
/// output_path), and its 64-bit FNV-1a hash in hex.
std::string config_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws std::out_of_range
};

/// 15 significant digits, locale-independent.
std::string format_number(double value);

/// "# config_hash=<hex> seed=<n>" line, header row, then data rows.
void write_csv(std::ostream& out, const CsvTable& table, const ExperimentConfig& config);
CsvTable read_csv(std::istream& in);

/// Columns K, exact_regret, exact_stderr, bound_m<m>... (+ sim_regret, sim_stderr).
CsvTable run_iid(const ExperimentConfig& config);
/// Long format K, m, exact_regret, exact_stderr, bound_m.
CsvTable run_iid_long(const ExperimentConfig& config);

/// Columns K, rho, exact_loss, bound_over_1mgamma (+ mc_loss, mc_stderr, mc_replications).
CsvTable run_tabular(const ExperimentConfig& config);

/// (14/3) (rho^K (1 - rho) + (1 - rho)^K rho)
double tabular_exact_loss(double rho, std::size_t draws);
/// Cluster-coverage bound for the two-MDP family divided by (1 - gamma).
double tabular_bound_over_1mgamma(double rho, std::size_t draws);

struct CartpoleTables {
    CsvTable rows;     // K, repetition, mode, subset_size, train_seconds, total_reward, seed
    CsvTable summary;  // K, mode, runs, train_seconds_mean/std, total_reward_mean/std
};
CartpoleTables run_cartpole(const ExperimentConfig& config);
cartpole::ExperimentSettings cartpole_settings(const ExperimentConfig& config);

PropertyReport run_properties(const ExperimentConfig& config);

/// Runs config.experiment and writes its outputs. Returns the process exit
/// status: 0 on success, 1 when a property check fails.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

/// Path with "_<suffix>" inserted before the extension.
std::string companion_path(const std::string& path, const std::string& suffix);

}  // namespace actnet
