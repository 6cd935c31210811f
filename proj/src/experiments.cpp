#include "actnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "actnet/bounds.hpp"
#include "actnet/families.hpp"
#include "actnet/parallel.hpp"
#include "actnet/subset.hpp"
#include "actnet/width.hpp"

namespace actnet {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kExperiments{"iid", "tabular", "cartpole", "properties"};

std::vector<double> default_rho_grid() {
    std::vector<double> rhos;
    for (int i = 1; i <= 99; ++i) rhos.push_back(i / 100.0);
    return rhos;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown configuration key '" + where + "." + key + "'");
}

std::string path_of(const std::string& where, const std::string& key) { return where + "." + key; }

void read_size(const json& j, const std::string& key, std::size_t& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(path_of(where, key) + " must be a nonnegative integer");
    out = v.get<std::size_t>();
}

void read_double(const json& j, const std::string& key, double& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path_of(where, key) + " must be a number");
    out = v.get<double>();
}

void read_bool(const json& j, const std::string& key, bool& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(path_of(where, key) + " must be true or false");
    out = v.get<bool>();
}

void read_string(const json& j, const std::string& key, std::string& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(path_of(where, key) + " must be a string");
    out = v.get<std::string>();
}

void read_sizes(const json& j, const std::string& key, std::vector<std::size_t>& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array()) throw ConfigError(path_of(where, key) + " must be an array of integers");
    out.clear();
    for (const auto& e : v) {
        if (!e.is_number_unsigned()) throw ConfigError(path_of(where, key) + " must hold nonnegative integers");
        out.push_back(e.get<std::size_t>());
    }
}

void read_doubles(const json& j, const std::string& key, std::vector<double>& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array()) throw ConfigError(path_of(where, key) + " must be an array of numbers");
    out.clear();
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(path_of(where, key) + " must hold numbers");
        out.push_back(e.get<double>());
    }
}

json iid_json(const IidConfig& c) {
    return {{"n", c.n},           {"k_min", c.k_min},       {"k_max", c.k_max},
            {"ms", c.ms},         {"mc_samples", c.mc_samples}, {"simulate", c.simulate},
            {"sim_episodes", c.sim_episodes}};
}

json tabular_json(const TabularConfig& c) {
    return {{"rhos", c.rhos},
            {"k_min", c.k_min},
            {"k_max", c.k_max},
            {"monte_carlo", c.monte_carlo},
            {"mc_rhos", c.mc_rhos},
            {"replications", c.replications},
            {"samples_per_replication", c.samples_per_replication}};
}

json cartpole_json(const CartpoleConfig& c) {
    json j{{"difficulty", c.difficulty}};
    j["variation"] = c.variation ? json(*c.variation) : json(nullptr);
    j["ks"] = c.ks;
    j["repetitions"] = c.repetitions;
    j["episodes"] = c.episodes;
    j["discount"] = c.discount;
    j["learning_rate"] = c.learning_rate;
    j["epsilon_start"] = c.epsilon_start;
    j["epsilon_end"] = c.epsilon_end;
    j["epsilon_decay_fraction"] = c.epsilon_decay_fraction;
    j["td_threshold"] = c.td_threshold;
    j["td_patience"] = c.td_patience;
    return j;
}

json properties_json(const PropertiesConfig& c) {
    return {{"fixtures", c.fixtures}, {"samples", c.samples}, {"max_cloud", c.max_cloud}};
}

Estimate summary_of(const std::vector<double>& values) { return summarize(values).estimate(); }

double sample_std(const std::vector<double>& values) {
    return std::sqrt(summarize(values).variance());
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!kExperiments.count(experiment))
        throw ConfigError("experiment must be one of iid, tabular, cartpole, properties (got '" + experiment + "')");
    if (experiment == "iid") {
        if (iid.n < 1) throw ConfigError("iid.n must be >= 1");
        if (iid.k_min < 1 || iid.k_max < iid.k_min) throw ConfigError("iid K range is empty");
        if (iid.ms.empty()) throw ConfigError("iid.ms is empty");
        for (std::size_t m : iid.ms)
            if (m < 1 || iid.n % m != 0)
                throw ConfigError("iid.ms entry " + std::to_string(m) + " does not divide n = " + std::to_string(iid.n));
        if (iid.mc_samples < 1000) throw ConfigError("iid.mc_samples must be >= 1000");
        if (iid.simulate && iid.sim_episodes < 1) throw ConfigError("iid.sim_episodes must be >= 1");
    } else if (experiment == "tabular") {
        if (tabular.rhos.empty()) throw ConfigError("tabular.rhos is empty");
        for (double r : tabular.rhos)
            if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("tabular.rhos must lie in [0, 1]");
        if (tabular.k_min < 1 || tabular.k_max < tabular.k_min) throw ConfigError("tabular K range is empty");
        if (tabular.monte_carlo) {
            if (tabular.replications < 1 || tabular.samples_per_replication < 1)
                throw ConfigError("tabular Monte-Carlo replications and samples must be >= 1");
            for (double r : tabular.mc_rhos)
                if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("tabular.mc_rhos must lie in [0, 1]");
        }
    } else if (experiment == "cartpole") {
        try {
            cartpole::parse_difficulty(cartpole.difficulty);
            cartpole_settings(*this).learning.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("cartpole: ") + e.what());
        }
        if (cartpole.variation && !(*cartpole.variation >= 0.0 && *cartpole.variation < 1.0))
            throw ConfigError("cartpole.variation must be in [0, 1)");
        if (cartpole.ks.empty()) throw ConfigError("cartpole.ks is empty");
        for (std::size_t k : cartpole.ks)
            if (k < 1) throw ConfigError("cartpole.ks entries must be >= 1");
        if (cartpole.repetitions < 1) throw ConfigError("cartpole.repetitions must be >= 1");
    } else {
        if (properties.fixtures < 1 || properties.samples < 1000)
            throw ConfigError("properties needs >= 1 fixture and >= 1000 samples");
        if (properties.max_cloud < 2) throw ConfigError("properties.max_cloud must be >= 2");
    }
}

ExperimentConfig profile_config(const std::string& profile, const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    c.tabular.rhos = default_rho_grid();
    if (profile == "paper") return c;
    if (profile == "ci") {
        c.cartpole.repetitions = 5;
        c.cartpole.episodes = 2000;
        c.cartpole.ks = {3, 10, 20};
        return c;
    }
    throw ConfigError("unknown profile '" + profile + "' (expected paper or ci)");
}

ExperimentConfig apply_config_json(ExperimentConfig c, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    reject_unknown(j, {"experiment", "seed", "output_path", "workers", "iid", "tabular", "cartpole", "properties"},
                   "config");
    read_string(j, "experiment", c.experiment, "config");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("config.seed must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    read_string(j, "output_path", c.output_path, "config");
    if (j.contains("workers")) {
        std::size_t w = 0;
        read_size(j, "workers", w, "config");
        c.workers = static_cast<unsigned>(w);
    }
    if (j.contains("iid")) {
        const auto& s = j["iid"];
        reject_unknown(s, {"n", "k_min", "k_max", "ms", "mc_samples", "simulate", "sim_episodes"}, "iid");
        read_size(s, "n", c.iid.n, "iid");
        read_size(s, "k_min", c.iid.k_min, "iid");
        read_size(s, "k_max", c.iid.k_max, "iid");
        read_sizes(s, "ms", c.iid.ms, "iid");
        read_size(s, "mc_samples", c.iid.mc_samples, "iid");
        read_bool(s, "simulate", c.iid.simulate, "iid");
        read_size(s, "sim_episodes", c.iid.sim_episodes, "iid");
    }
    if (j.contains("tabular")) {
        const auto& s = j["tabular"];
        reject_unknown(s, {"rhos", "k_min", "k_max", "monte_carlo", "mc_rhos", "replications",
                           "samples_per_replication"},
                       "tabular");
        read_doubles(s, "rhos", c.tabular.rhos, "tabular");
        read_size(s, "k_min", c.tabular.k_min, "tabular");
        read_size(s, "k_max", c.tabular.k_max, "tabular");
        read_bool(s, "monte_carlo", c.tabular.monte_carlo, "tabular");
        read_doubles(s, "mc_rhos", c.tabular.mc_rhos, "tabular");
        read_size(s, "replications", c.tabular.replications, "tabular");
        read_size(s, "samples_per_replication", c.tabular.samples_per_replication, "tabular");
    }
    if (j.contains("cartpole")) {
        const auto& s = j["cartpole"];
        reject_unknown(s, {"difficulty", "variation", "ks", "repetitions", "episodes", "discount", "learning_rate",
                           "epsilon_start", "epsilon_end", "epsilon_decay_fraction", "td_threshold", "td_patience"},
                       "cartpole");
        read_string(s, "difficulty", c.cartpole.difficulty, "cartpole");
        if (s.contains("variation")) {
            if (s["variation"].is_null()) {
                c.cartpole.variation.reset();
            } else {
                double v = 0.0;
                read_double(s, "variation", v, "cartpole");
                c.cartpole.variation = v;
            }
        }
        read_sizes(s, "ks", c.cartpole.ks, "cartpole");
        read_size(s, "repetitions", c.cartpole.repetitions, "cartpole");
        read_size(s, "episodes", c.cartpole.episodes, "cartpole");
        read_double(s, "discount", c.cartpole.discount, "cartpole");
        read_double(s, "learning_rate", c.cartpole.learning_rate, "cartpole");
        read_double(s, "epsilon_start", c.cartpole.epsilon_start, "cartpole");
        read_double(s, "epsilon_end", c.cartpole.epsilon_end, "cartpole");
        read_double(s, "epsilon_decay_fraction", c.cartpole.epsilon_decay_fraction, "cartpole");
        read_double(s, "td_threshold", c.cartpole.td_threshold, "cartpole");
        read_size(s, "td_patience", c.cartpole.td_patience, "cartpole");
    }
    if (j.contains("properties")) {
        const auto& s = j["properties"];
        reject_unknown(s, {"fixtures", "samples", "max_cloud"}, "properties");
        read_size(s, "fixtures", c.properties.fixtures, "properties");
        read_size(s, "samples", c.properties.samples, "properties");
        read_size(s, "max_cloud", c.properties.max_cloud, "properties");
    }
    return c;
}

std::string config_json(const ExperimentConfig& c) {
    json j{{"experiment", c.experiment}, {"seed", c.seed}};
    if (c.experiment == "iid") j["iid"] = iid_json(c.iid);
    if (c.experiment == "tabular") j["tabular"] = tabular_json(c.tabular);
    if (c.experiment == "cartpole") j["cartpole"] = cartpole_json(c.cartpole);
    if (c.experiment == "properties") j["properties"] = properties_json(c.properties);
    return j.dump();
}

std::string config_hash(const ExperimentConfig& c) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config_json(c));
    return os.str();
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("no CSV column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::string format_number(double value) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(15) << value;
    return os.str();
}

void write_csv(std::ostream& out, const CsvTable& table, const ExperimentConfig& config) {
    out << "# config_hash=" << config_hash(config) << " seed=" << config.seed << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

CsvTable run_iid(const ExperimentConfig& config) {
    const auto& c = config.iid;
    const auto table = GaussianMaxTable::shared(c.n, c.mc_samples, RngSeed(config.seed).labelled("iid-max"));
    CsvTable out;
    out.header = {"K", "exact_regret", "exact_stderr"};
    for (std::size_t m : c.ms) out.header.push_back("bound_m" + std::to_string(m));
    for (std::size_t m : c.ms) out.header.push_back("bound_m" + std::to_string(m) + "_stderr");
    if (c.simulate) {
        out.header.push_back("sim_regret");
        out.header.push_back("sim_stderr");
    }
    const std::size_t count = c.k_max - c.k_min + 1;
    out.rows.resize(count);
    const RngSeed sim_seed = RngSeed(config.seed).labelled("iid-sim");
    parallel_for(count, [&](std::size_t i) {
        const std::size_t k = c.k_min + i;
        const Estimate exact = iid_exact_regret(*table, k);
        auto& row = out.rows[i];
        row = {std::to_string(k), format_number(exact.mean), format_number(exact.std_error)};
        std::vector<Estimate> bounds;
        for (std::size_t m : c.ms) bounds.push_back(iid_upper_bound(*table, m, k));
        for (const auto& b : bounds) row.push_back(format_number(b.mean));
        for (const auto& b : bounds) row.push_back(format_number(b.std_error));
        if (c.simulate) {
            const Estimate sim = iid_simulated_regret(c.n, k, c.sim_episodes, sim_seed.child(k));
            row.push_back(format_number(sim.mean));
            row.push_back(format_number(sim.std_error));
        }
    });
    return out;
}

CsvTable run_iid_long(const ExperimentConfig& config) {
    const auto& c = config.iid;
    const auto table = GaussianMaxTable::shared(c.n, c.mc_samples, RngSeed(config.seed).labelled("iid-max"));
    CsvTable out;
    out.header = {"K", "m", "exact_regret", "exact_stderr", "bound_m"};
    for (const auto& r : iid_bound_sweep(*table, c.ms, c.k_max))
        if (r.draws >= c.k_min)
            out.rows.push_back({std::to_string(r.draws), std::to_string(r.m), format_number(r.exact.mean),
                                format_number(r.exact.std_error), format_number(r.bound.mean)});
    return out;
}

double tabular_exact_loss(double rho, std::size_t draws) {
    const double k = static_cast<double>(draws);
    return 14.0 / 3.0 * (std::pow(rho, k) * (1.0 - rho) + std::pow(1.0 - rho, k) * rho);
}

double tabular_bound_over_1mgamma(double rho, std::size_t draws) {
    const double gamma = first_two_state_mdp().discount;
    // z = (a - a') over unit features: E[(max Q over Z)^2] = 9 for this pair
    return theorem3_bound({rho, 1.0 - rho}, draws, 9.0, 0.0) / (1.0 - gamma);
}

CsvTable run_tabular(const ExperimentConfig& config) {
    const auto& c = config.tabular;
    CsvTable out;
    out.header = {"K", "rho", "exact_loss", "bound_over_1mgamma"};
    if (c.monte_carlo) {
        out.header.push_back("mc_loss");
        out.header.push_back("mc_stderr");
        out.header.push_back("mc_replications");
    }
    struct Item {
        std::size_t k;
        std::size_t rho_index;
        bool mc;
        std::size_t mc_index;
    };
    std::vector<Item> items;
    for (std::size_t k = c.k_min; k <= c.k_max; ++k)
        for (std::size_t r = 0; r < c.rhos.size(); ++r) {
            Item item{k, r, false, 0};
            if (c.monte_carlo)
                for (std::size_t m = 0; m < c.mc_rhos.size(); ++m)
                    if (std::abs(c.mc_rhos[m] - c.rhos[r]) < 1e-12) {
                        item.mc = true;
                        item.mc_index = m;
                    }
            items.push_back(item);
        }
    out.rows.resize(items.size());
    const RngSeed mc_seed = RngSeed(config.seed).labelled("tabular-mc");
    parallel_for(items.size(), [&](std::size_t i) {
        const Item& item = items[i];
        const double rho = c.rhos[item.rho_index];
        auto& row = out.rows[i];
        row = {std::to_string(item.k), format_number(rho), format_number(tabular_exact_loss(rho, item.k)),
               format_number(tabular_bound_over_1mgamma(rho, item.k))};
        if (!c.monte_carlo) return;
        if (!item.mc) {
            row.insert(row.end(), {"", "", ""});
            return;
        }
        const auto loss = expected_performance_loss(two_mdp_family(rho), item.k,
                                                    mc_seed.child(item.mc_index).child(item.k), c.replications,
                                                    c.samples_per_replication);
        row.push_back(format_number(loss.mean));
        row.push_back(format_number(loss.std_error));
        row.push_back(std::to_string(loss.replications));
    });
    return out;
}

cartpole::ExperimentSettings cartpole_settings(const ExperimentConfig& config) {
    const auto& c = config.cartpole;
    cartpole::ExperimentSettings s;
    s.difficulty = cartpole::parse_difficulty(c.difficulty);
    s.variation = c.variation;
    s.ks = c.ks;
    s.repetitions = c.repetitions;
    s.learning.episodes = c.episodes;
    s.learning.discount = c.discount;
    s.learning.learning_rate = c.learning_rate;
    s.learning.epsilon_start = c.epsilon_start;
    s.learning.epsilon_end = c.epsilon_end;
    s.learning.epsilon_decay_fraction = c.epsilon_decay_fraction;
    s.learning.td_threshold = c.td_threshold;
    s.learning.td_patience = c.td_patience;
    return s;
}

CartpoleTables run_cartpole(const ExperimentConfig& config) {
    const auto rows = cartpole::run_cartpole_experiment(cartpole_settings(config), RngSeed(config.seed).labelled("cartpole"));
    CartpoleTables out;
    out.rows.header = {"K", "repetition", "mode", "subset_size", "train_seconds", "total_reward", "seed"};
    for (const auto& r : rows)
        out.rows.rows.push_back({std::to_string(r.k), std::to_string(r.repetition), r.mode,
                                 std::to_string(r.subset_size), format_number(r.train_seconds),
                                 format_number(r.total_reward), std::to_string(r.seed)});

    // The full-space baseline does not depend on K; it is repeated for every K.
    std::vector<double> full_time, full_reward;
    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> subset;
    for (const auto& r : rows) {
        if (r.mode == "full") {
            full_time.push_back(r.train_seconds);
            full_reward.push_back(r.total_reward);
        } else {
            subset[r.k].first.push_back(r.train_seconds);
            subset[r.k].second.push_back(r.total_reward);
        }
    }
    out.summary.header = {"K", "mode", "runs", "train_seconds_mean", "train_seconds_std", "total_reward_mean",
                          "total_reward_std"};
    auto add = [&](std::size_t k, const std::string& mode, const std::vector<double>& t, const std::vector<double>& w) {
        out.summary.rows.push_back({std::to_string(k), mode, std::to_string(t.size()),
                                    format_number(summary_of(t).mean), format_number(sample_std(t)),
                                    format_number(summary_of(w).mean), format_number(sample_std(w))});
    };
    for (std::size_t k : config.cartpole.ks) {
        add(k, "full", full_time, full_reward);
        add(k, "subset", subset[k].first, subset[k].second);
    }
    return out;
}

PropertyReport run_properties(const ExperimentConfig& config) {
    PropertySuiteSettings s;
    s.fixtures = config.properties.fixtures;
    s.samples = config.properties.samples;
    s.max_cloud = config.properties.max_cloud;
    return run_property_suite(RngSeed(config.seed).labelled("properties"), s);
}

std::string companion_path(const std::string& path, const std::string& suffix) {
    const std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + suffix + p.extension().string())).string();
}

namespace {

std::ofstream open_output(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    if (config.workers > 0) set_worker_count(config.workers);
    const std::string& e = config.experiment;
    std::string path = config.output_path;
    if (path.empty()) path = e == "properties" ? "properties.json" : e + ".csv";

    if (e == "iid") {
        auto out = open_output(path);
        write_csv(out, run_iid(config), config);
        const std::string long_path = companion_path(path, "long");
        auto long_out = open_output(long_path);
        write_csv(long_out, run_iid_long(config), config);
        log << "wrote " << path << " and " << long_path << '\n';
    } else if (e == "tabular") {
        auto out = open_output(path);
        write_csv(out, run_tabular(config), config);
        log << "wrote " << path << '\n';
    } else if (e == "cartpole") {
        const CartpoleTables tables = run_cartpole(config);
        auto out = open_output(path);
        write_csv(out, tables.rows, config);
        const std::string summary_path = companion_path(path, "summary");
        auto summary_out = open_output(summary_path);
        write_csv(summary_out, tables.summary, config);
        log << "wrote " << path << " and " << summary_path << '\n';
    } else {
        const PropertyReport report = run_properties(config);
        auto out = open_output(path);
        out << report.to_json() << '\n';
        log << "wrote " << path << ": " << report.checks.size() - report.failures() << "/" << report.checks.size()
            << " checks passed\n";
        for (const auto& c : report.checks)
            if (!c.passed) log << "FAILED " << c.name << " (fixture " << c.fixture << "): " << c.detail << '\n';
        return report.passed() ? 0 : 1;
    }
    return 0;
}

}  // namespace actnet
