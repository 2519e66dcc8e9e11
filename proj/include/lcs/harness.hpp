#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcs/envs.hpp"
#include "lcs/theory.hpp"
#include "lcs/ucs.hpp"
#include "lcs/xcs.hpp"
#include "lcs/xcsc.hpp"
#include "lcs/xcsf.hpp"
#include "lcs/zcs.hpp"

namespace lcs {

// One learning-curve row, emitted per exploit trial (or exploit episode).
struct MetricsRecord {
    std::size_t trial = 0;       // exploit trial index, 1-based
    double performance = 0.0;    // moving fraction correct / mean steps / mean |error|
    double system_error = 0.0;   // moving mean |prediction - reward| where defined
    std::size_t pop_size = 0;
    double mean_specificity = 0.0;
};

// Mean of the last min(W, |history|) entries.
double moving_performance(const std::deque<double>& history, std::size_t window);

// Sliding accumulator for the metrics columns.
class MovingWindow {
public:
    explicit MovingWindow(std::size_t window) : window_(window) {}
    void push(double value);
    double mean() const;
    bool empty() const { return values_.empty(); }
    bool full() const { return values_.size() >= window_; }

private:
    std::size_t window_;
    std::deque<double> values_;
};

// --- run protocols -----------------------------------------------------------
// Explore trials learn, exploit trials measure; strict alternation by
// default, a 0.5-probability split behind the coin_flip flag. Only explore
// trials mutate engine state (covering included).

struct ProtocolOptions {
    std::size_t trials = 20000; // total trials (explore + exploit), or episodes for mazes
    std::size_t window = 50;
    bool coin_flip = false;
    std::size_t episode_cap = 100; // maze steps before a no-reward reset
    double reward_correct = 1000.0;
    // Classification runners stop once the full-window moving performance
    // reaches this value (negative: run the whole budget).
    double stop_at_performance = -1.0;
};

std::vector<MetricsRecord> run_xcs_on_mux(Xcs& engine, const MultiplexerTask& task,
                                          const ProtocolOptions& opt, RandomStream& rng);
std::vector<MetricsRecord> run_ucs_on_mux(Ucs& engine, const MultiplexerTask& task,
                                          const ProtocolOptions& opt, RandomStream& rng);
std::vector<MetricsRecord> run_zcs_on_mux(Zcs& engine, const MultiplexerTask& task,
                                          const ProtocolOptions& opt, RandomStream& rng);
std::vector<MetricsRecord> run_zcs_on_maze(Zcs& engine, MazeWorld& world,
                                           const ProtocolOptions& opt, RandomStream& rng);
std::vector<MetricsRecord> run_xcs_on_maze(Xcs& engine, MazeWorld& world,
                                           const ProtocolOptions& opt, RandomStream& rng);
// Supervised runner over a labeled dataset (binary attribute rows + label).
std::vector<MetricsRecord> run_ucs_on_dataset(Ucs& engine,
                                              const std::vector<BitInput>& inputs,
                                              const std::vector<int>& labels,
                                              const ProtocolOptions& opt, RandomStream& rng);
// Clustering has no per-trial metric; every trial learns.
void run_xcsc_on_points(Xcsc& engine, const std::vector<std::vector<double>>& points,
                        std::size_t trials, RandomStream& rng);
std::vector<MetricsRecord> run_xcsf_on_function(Xcsf& engine, const FunctionTask& task,
                                                const ProtocolOptions& opt, RandomStream& rng);

// --- experiment configuration ------------------------------------------------

// Flat key = value description of a seeded run. Unknown keys are rejected;
// values are range-checked when the engine parameters are materialized.
struct ExperimentConfig {
    std::string engine = "xcs"; // zcs | xcs | ucs | xcsc | xcsf
    std::string env = "mux6";   // mux<k> | maze:<path> | data:<path> | sine | rms
    std::uint64_t seed = 1;
    std::size_t trials = 20000;
    std::size_t window = 50;
    std::string out = "metrics.csv";
    std::string pop_out; // defaults to out + ".pop"
    bool coin_flip = false;
    std::size_t episode_cap = 100;
    double reward = 1000.0;

    std::map<std::string, std::string> overrides; // engine/env parameter keys

    static ExperimentConfig from_file(const std::string& path);
    void apply(const std::string& key, const std::string& value);
};

struct ExperimentResult {
    std::vector<MetricsRecord> rows;
    std::string metrics_path;
    std::string population_path;
};

// Builds engine + environment + random stream from the config, runs the
// protocol, writes the metrics CSV and final population file. Deterministic
// given (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_metrics_csv(const std::vector<MetricsRecord>& rows, const std::string& path);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

// Materialize engine parameter structs from config overrides (shared with
// the CLI subcommands). Throws ConfigError on unknown keys.
ZcsParams make_zcs_params(const std::map<std::string, std::string>& kv, std::size_t n_actions);
XcsParams make_xcs_params(const std::map<std::string, std::string>& kv, std::size_t n_actions);
UcsParams make_ucs_params(const std::map<std::string, std::string>& kv, std::size_t n_labels);
XcscParams make_xcsc_params(const std::map<std::string, std::string>& kv, std::size_t dims);
XcsfParams make_xcsf_params(const std::map<std::string, std::string>& kv, std::size_t dims,
                            int grid_n);

} // namespace lcs
