#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "actnet/experiments.hpp"
#include "actnet/parallel.hpp"

using namespace actnet;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_iid() {
    auto c = profile_config("paper", "iid");
    c.iid.mc_samples = 20000;
    return c;
}

CsvTable round_trip(const CsvTable& table, const ExperimentConfig& config) {
    std::stringstream buffer;
    write_csv(buffer, table, config);
    return read_csv(buffer);
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("actnet_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ACTNET_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream(path) << text;
}

}  // namespace

TEST(Config, ProfilesAndValidation) {
    const auto full = profile_config("paper", "cartpole");
    EXPECT_EQ(full.cartpole.repetitions, 30u);
    EXPECT_EQ(full.cartpole.episodes, 10000u);
    const auto ci = profile_config("ci", "cartpole");
    EXPECT_EQ(ci.cartpole.repetitions, 5u);
    EXPECT_EQ(ci.cartpole.episodes, 2000u);
    EXPECT_EQ(ci.cartpole.ks, (std::vector<std::size_t>{3, 10, 20}));
    EXPECT_THROW(profile_config("huge", "iid"), ConfigError);
    EXPECT_EQ(full.tabular.rhos.size(), 99u);
    EXPECT_NO_THROW(full.validate());

    auto bad = small_iid();
    bad.iid.ms = {3};
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = small_iid();
    bad.iid.k_max = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = small_iid();
    bad.experiment = "atari";
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Config, JsonOverlay) {
    const auto base = profile_config("paper", "iid");
    const auto c = apply_config_json(base, R"({"seed": 7, "iid": {"n": 6, "ms": [2, 3], "k_max": 4}})");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.iid.n, 6u);
    EXPECT_EQ(c.iid.ms, (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(c.iid.k_max, 4u);
    EXPECT_EQ(c.iid.mc_samples, base.iid.mc_samples);
    EXPECT_THROW(apply_config_json(base, R"({"sede": 7})"), ConfigError);
    EXPECT_THROW(apply_config_json(base, R"({"iid": {"m": [2]}})"), ConfigError);
    EXPECT_THROW(apply_config_json(base, R"({"iid": {"n": -3}})"), ConfigError);
    EXPECT_THROW(apply_config_json(base, "{not json"), ConfigError);
    const auto cp = apply_config_json(profile_config("paper", "cartpole"), R"({"cartpole": {"variation": 0.2}})");
    ASSERT_TRUE(cp.cartpole.variation.has_value());
    EXPECT_DOUBLE_EQ(*cp.cartpole.variation, 0.2);
}

TEST(Config, HashIgnoresWorkersAndOutput) {
    auto a = small_iid();
    auto b = a;
    b.workers = 3;
    b.output_path = "elsewhere.csv";
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    b.seed += 1;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_json(a), config_json(a));
}

TEST(Csv, MetadataAndRoundTrip) {
    const auto config = small_iid();
    CsvTable t;
    t.header = {"K", "value"};
    t.rows = {{"1", format_number(0.1)}, {"2", format_number(1.0 / 3.0)}};
    std::stringstream buffer;
    write_csv(buffer, t, config);
    std::string first;
    std::getline(buffer, first);
    EXPECT_EQ(first, "# config_hash=" + config_hash(config) + " seed=" + std::to_string(config.seed));
    buffer.seekg(0);
    const auto back = read_csv(buffer);
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
    EXPECT_EQ(back.column("value"), 1u);
    EXPECT_THROW(back.column("missing"), std::out_of_range);
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333333");
    EXPECT_EQ(companion_path("out/iid.csv", "long"), "out/iid_long.csv");
}

TEST(Iid, FiftyRowsWithBoundColumns) {
    const auto table = round_trip(run_iid(small_iid()), small_iid());
    EXPECT_EQ(table.header, (std::vector<std::string>{"K", "exact_regret", "exact_stderr", "bound_m2", "bound_m5",
                                                      "bound_m10", "bound_m2_stderr", "bound_m5_stderr",
                                                      "bound_m10_stderr"}));
    ASSERT_EQ(table.rows.size(), 50u);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_EQ(table.rows[i][0], std::to_string(i + 1));
        const double exact = std::stod(table.rows[i][1]);
        for (std::size_t c = 3; c <= 5; ++c) EXPECT_LT(exact, std::stod(table.rows[i][c]));
    }
    const auto long_table = run_iid_long(small_iid());
    EXPECT_EQ(long_table.header, (std::vector<std::string>{"K", "m", "exact_regret", "exact_stderr", "bound_m"}));
    EXPECT_EQ(long_table.rows.size(), 150u);
}

TEST(Iid, SingleArmHasNoRegret) {
    auto c = small_iid();
    c.iid.n = 1;
    c.iid.ms = {1};
    c.iid.k_max = 5;
    for (const auto& row : run_iid(c).rows) {
        EXPECT_EQ(std::stod(row[1]), 0.0);
        EXPECT_EQ(std::stod(row[2]), 0.0);
    }
}

TEST(Iid, SimulationColumnsAgree) {
    auto c = small_iid();
    c.iid.k_max = 6;
    c.iid.simulate = true;
    c.iid.sim_episodes = 40000;
    const auto t = run_iid(c);
    const std::size_t sim = t.column("sim_regret"), sim_se = t.column("sim_stderr");
    for (const auto& row : t.rows) {
        const double se = std::hypot(std::stod(row[2]), std::stod(row[sim_se]));
        EXPECT_NEAR(std::stod(row[sim]), std::stod(row[1]), 4.0 * se) << "K=" << row[0];
    }
}

TEST(Tabular, ClosedFormAndBound) {
    EXPECT_NEAR(tabular_exact_loss(0.5, 1), 7.0 / 3.0, 1e-15);
    EXPECT_EQ(tabular_exact_loss(1.0, 3), 0.0);
    EXPECT_EQ(tabular_exact_loss(0.0, 3), 0.0);
    EXPECT_NEAR(tabular_bound_over_1mgamma(0.5, 1), 3.0, 1e-14);
    const auto c = profile_config("paper", "tabular");
    const auto t = run_tabular(c);
    EXPECT_EQ(t.header, (std::vector<std::string>{"K", "rho", "exact_loss", "bound_over_1mgamma"}));
    ASSERT_EQ(t.rows.size(), 20u * 99u);
    for (const auto& row : t.rows) EXPECT_LE(std::stod(row[2]), std::stod(row[3]) + 1e-12) << row[0] << "," << row[1];
}

TEST(Tabular, MonteCarloColumns) {
    auto c = profile_config("paper", "tabular");
    c.tabular.rhos = {0.2, 0.5};
    c.tabular.mc_rhos = {0.5};
    c.tabular.k_max = 2;
    c.tabular.monte_carlo = true;
    c.tabular.replications = 50;
    c.tabular.samples_per_replication = 200;
    const auto t = run_tabular(c);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_EQ(t.header.size(), 7u);
    EXPECT_EQ(t.rows[0][4], "");
    EXPECT_EQ(t.rows[1][6], "50");
    const double mc = std::stod(t.rows[1][4]), se = std::stod(t.rows[1][5]);
    EXPECT_NEAR(mc, 7.0 / 3.0, 4.0 * se);
}

TEST(Determinism, WorkerCountDoesNotChangeResults) {
    auto c = small_iid();
    c.iid.k_max = 10;
    c.iid.simulate = true;
    c.iid.sim_episodes = 20000;
    set_worker_count(1);
    const auto one = run_iid(c);
    set_worker_count(4);
    const auto four = run_iid(c);
    set_worker_count(0);
    EXPECT_EQ(one.rows, four.rows);
}

TEST(Cartpole, TablesAndSummary) {
    auto c = profile_config("ci", "cartpole");
    c.cartpole.ks = {2, 5};
    c.cartpole.repetitions = 2;
    c.cartpole.episodes = 40;
    const auto tables = run_cartpole(c);
    EXPECT_EQ(tables.rows.header, (std::vector<std::string>{"K", "repetition", "mode", "subset_size",
                                                            "train_seconds", "total_reward", "seed"}));
    EXPECT_EQ(tables.rows.rows.size(), 6u);
    EXPECT_EQ(tables.summary.header,
              (std::vector<std::string>{"K", "mode", "runs", "train_seconds_mean", "train_seconds_std",
                                        "total_reward_mean", "total_reward_std"}));
    ASSERT_EQ(tables.summary.rows.size(), 4u);  // full and subset for each K
    for (const auto& row : tables.summary.rows) EXPECT_EQ(row[2], "2");
}

TEST(RunExperiment, WritesOutputs) {
    const auto dir = scratch_dir("run");
    auto c = small_iid();
    c.iid.k_max = 3;
    c.output_path = (dir / "iid.csv").string();
    std::ostringstream log;
    EXPECT_EQ(run_experiment(c, log), 0);
    EXPECT_TRUE(fs::exists(dir / "iid.csv"));
    EXPECT_TRUE(fs::exists(dir / "iid_long.csv"));

    auto p = profile_config("paper", "properties");
    p.properties.fixtures = 2;
    p.properties.samples = 5000;
    p.properties.max_cloud = 6;
    p.seed = 1;
    p.output_path = (dir / "props.json").string();
    EXPECT_EQ(run_experiment(p, log), 0);
    EXPECT_TRUE(fs::exists(dir / "props.json"));
    fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch_dir("cli");
    write_text(dir / "ok.json", R"({"experiment": "iid", "iid": {"k_max": 2, "mc_samples": 5000}})");
    write_text(dir / "typo.json", R"({"experiment": "iid", "iid": {"kmax": 2}})");
    write_text(dir / "tabular.json", R"({"experiment": "tabular"})");
    const std::string ok = "--config " + (dir / "ok.json").string();

    EXPECT_EQ(run_cli("iid " + ok + " --out " + (dir / "a.csv").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "a.csv"));
    EXPECT_EQ(run_cli("iid --bogus-flag"), 2);
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("iid --profile huge"), 2);
    EXPECT_EQ(run_cli("iid --config " + (dir / "typo.json").string()), 2);
    EXPECT_EQ(run_cli("iid --config " + (dir / "missing.json").string()), 2);
    EXPECT_EQ(run_cli("iid --config " + (dir / "tabular.json").string()), 2);
    EXPECT_EQ(run_cli("iid " + ok + " --out /proc/actnet/a.csv"), 3);
    fs::remove_all(dir);
}
