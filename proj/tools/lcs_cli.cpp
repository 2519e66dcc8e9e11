// Command-line workbench binding the classifier-system engines to the
// benchmark environments. See README.md for usage examples.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcs/harness.hpp"
#include "lcs/population_io.hpp"
#include "lcs/theory.hpp"

namespace {

void apply_sets(lcs::ExperimentConfig& config, const std::vector<std::string>& sets) {
    for (const auto& item : sets) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw lcs::ConfigError("--set expects key=value, got '" + item + "'");
        config.apply(item.substr(0, eq), item.substr(eq + 1));
    }
}

int cmd_run(const std::string& config_path, const std::string& engine, const std::string& env,
            std::size_t trials, std::uint64_t seed, const std::string& out,
            const std::string& pop_out, std::size_t window, bool coin_flip,
            const std::vector<std::string>& sets, bool engine_set, bool env_set, bool trials_set,
            bool seed_set, bool out_set, bool window_set) {
    lcs::ExperimentConfig config;
    if (!config_path.empty())
        config = lcs::ExperimentConfig::from_file(config_path);
    // Flags override file values.
    if (engine_set)
        config.engine = engine;
    if (env_set)
        config.env = env;
    if (trials_set)
        config.trials = trials;
    if (seed_set)
        config.seed = seed;
    if (out_set)
        config.out = out;
    if (!pop_out.empty())
        config.pop_out = pop_out;
    if (window_set)
        config.window = window;
    if (coin_flip)
        config.coin_flip = true;
    apply_sets(config, sets);

    const auto result = lcs::run_experiment(config);
    std::printf("wrote %zu metric rows to %s\n", result.rows.size(),
                result.metrics_path.c_str());
    std::printf("wrote population to %s\n", result.population_path.c_str());
    if (!result.rows.empty())
        std::printf("final performance %.4f (pop %zu)\n", result.rows.back().performance,
                    result.rows.back().pop_size);
    return 0;
}

int cmd_cluster(const std::string& data, std::size_t trials, std::uint64_t seed,
                const std::string& out, const std::string& pop_out, std::uint64_t min_exp,
                const std::vector<std::string>& sets) {
    lcs::ExperimentConfig config;
    apply_sets(config, sets);
    const auto points = lcs::load_points_csv(data);
    if (points.empty())
        throw lcs::ConfigError("dataset '" + data + "' is empty");
    lcs::Xcsc engine(lcs::make_xcsc_params(config.overrides, points.front().size()));
    lcs::RandomStream rng(seed);
    lcs::run_xcsc_on_points(engine, points, trials, rng);

    const auto clusters = engine.extract_clusters(min_exp);
    std::ofstream csv(out);
    if (!csv)
        throw lcs::ConfigError("cannot write '" + out + "'");
    const std::size_t d = points.front().size();
    for (std::size_t i = 0; i < d; ++i)
        csv << "centre_" << i << ',';
    for (std::size_t i = 0; i < d; ++i)
        csv << "lower_" << i << ",upper_" << i << ',';
    csv << "support\n";
    char buf[64];
    for (const auto& cluster : clusters) {
        for (std::size_t i = 0; i < d; ++i) {
            std::snprintf(buf, sizeof(buf), "%.10g,", cluster.centre[i]);
            csv << buf;
        }
        for (std::size_t i = 0; i < d; ++i) {
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,", cluster.lower[i], cluster.upper[i]);
            csv << buf;
        }
        csv << cluster.support << '\n';
    }
    if (!pop_out.empty())
        lcs::save_population(engine.population(), d, pop_out);
    std::printf("found %zu clusters from %zu rules; wrote %s\n", clusters.size(),
                engine.population().size(), out.c_str());
    return 0;
}

int cmd_approx(const std::string& func, std::size_t grid, std::size_t dims, std::size_t trials,
               std::uint64_t seed, const std::string& out, const std::string& pop_out,
               std::size_t window, const std::vector<std::string>& sets) {
    lcs::ExperimentConfig config;
    config.engine = "xcsf";
    config.env = func;
    config.trials = trials;
    config.seed = seed;
    config.out = out;
    config.pop_out = pop_out;
    config.window = window;
    config.overrides["grid"] = std::to_string(grid);
    config.overrides["d"] = std::to_string(dims);
    apply_sets(config, sets);
    const auto result = lcs::run_experiment(config);
    std::printf("wrote %zu metric rows to %s\n", result.rows.size(),
                result.metrics_path.c_str());
    if (!result.rows.empty())
        std::printf("final moving |error| %.5f\n", result.rows.back().performance);
    return 0;
}

int cmd_theory(double mu, std::size_t n, std::size_t len, std::size_t trials, std::uint64_t seed,
               double init_spec, double f_ga, std::size_t transient, const std::string& out) {
    lcs::TrajectoryConfig config;
    config.condition_length = len;
    config.initial_specificity = init_spec;
    config.trials = trials;
    config.seed = seed;
    config.ga_frequency = f_ga;
    config.xcs.population_size = n;
    config.xcs.ga.mu = mu;
    const auto result = lcs::specificity_trajectory_compare(config, transient);

    std::ofstream csv(out);
    if (!csv)
        throw lcs::ConfigError("cannot write '" + out + "'");
    csv << "trial,predicted,measured\n";
    char buf[96];
    for (std::size_t t = 0; t < result.predicted.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\n", t + 1, result.predicted[t],
                      result.measured[t]);
        csv << buf;
    }
    std::printf("max |measured - predicted| after trial %zu: %.5f\n", transient,
                result.max_deviation_after_transient);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int cmd_inspect(const std::string& path) {
    const auto summary = lcs::inspect_population(path);
    std::printf("engine: %s\n", summary.engine.c_str());
    std::printf("dims: %zu\n", summary.dims);
    std::printf("rules: %zu\n", summary.rule_count);
    std::printf("mean specificity: %.6f\n", summary.mean_specificity);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning classifier system workbench (ZCS / XCS / UCS / XCSC / XCSF)"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run an engine on a benchmark environment");
    std::string run_config;
    std::string run_engine = "xcs";
    std::string run_env = "mux6";
    std::size_t run_trials = 20000;
    std::uint64_t run_seed = 1;
    std::string run_out = "metrics.csv";
    std::string run_pop_out;
    std::size_t run_window = 50;
    bool run_coin_flip = false;
    std::vector<std::string> run_sets;
    auto* f_config = run->add_option("--config", run_config, "Flat key = value config file");
    auto* f_engine = run->add_option("--engine", run_engine, "zcs | xcs | ucs | xcsc | xcsf");
    auto* f_env = run->add_option("--env", run_env, "mux6 | mux11 | maze:<map> | data:<csv> | sine | rms");
    auto* f_trials = run->add_option("--trials", run_trials, "Total trials (or episodes)");
    auto* f_seed = run->add_option("--seed", run_seed, "Random seed");
    auto* f_out = run->add_option("--out", run_out, "Metrics CSV path");
    run->add_option("--pop-out", run_pop_out, "Population file path (default <out>.pop)");
    auto* f_window = run->add_option("--window", run_window, "Moving metrics window");
    run->add_flag("--coin-flip", run_coin_flip, "Coin-flip explore/exploit split instead of strict alternation");
    run->add_option("--set", run_sets, "Extra engine/env parameter key=value")->take_all();

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Run XCSC over a data CSV and extract clusters");
    std::string cl_data;
    std::size_t cl_trials = 20000;
    std::uint64_t cl_seed = 1;
    std::string cl_out = "clusters.csv";
    std::string cl_pop_out;
    std::uint64_t cl_min_exp = 20;
    std::vector<std::string> cl_sets;
    cluster->add_option("--data", cl_data, "Headerless CSV of points in [0,1]^d")->required();
    cluster->add_option("--trials", cl_trials, "Learning trials");
    cluster->add_option("--seed", cl_seed, "Random seed");
    cluster->add_option("--out", cl_out, "Cluster descriptor CSV path");
    cluster->add_option("--pop-out", cl_pop_out, "Population file path");
    cluster->add_option("--min-exp", cl_min_exp, "Extraction experience threshold");
    cluster->add_option("--set", cl_sets, "Extra parameter key=value")->take_all();

    // approx
    auto* approx = app.add_subcommand("approx", "Run XCSF on a function task");
    std::string ap_func = "sine";
    std::size_t ap_grid = 1000;
    std::size_t ap_dims = 1;
    std::size_t ap_trials = 200000;
    std::uint64_t ap_seed = 1;
    std::string ap_out = "approx.csv";
    std::string ap_pop_out;
    std::size_t ap_window = 50;
    std::vector<std::string> ap_sets;
    approx->add_option("--func", ap_func, "sine | rms")
        ->check(CLI::IsMember({"sine", "rms"}));
    approx->add_option("--grid", ap_grid, "Grid points per dimension");
    approx->add_option("--d", ap_dims, "Input dimensions (rms only)");
    approx->add_option("--trials", ap_trials, "Total trials (half are learning updates)");
    approx->add_option("--seed", ap_seed, "Random seed");
    approx->add_option("--out", ap_out, "Metrics CSV path");
    approx->add_option("--pop-out", ap_pop_out, "Population file path");
    approx->add_option("--window", ap_window, "Moving metrics window");
    approx->add_option("--set", ap_sets, "Extra parameter key=value")->take_all();

    // theory
    auto* theory = app.add_subcommand("theory", "Compare measured vs predicted specificity dynamics");
    double th_mu = 0.04;
    std::size_t th_n = 400;
    std::size_t th_len = 20;
    std::size_t th_trials = 5000;
    std::uint64_t th_seed = 1;
    double th_init = 0.25;
    double th_fga = 1.0;
    std::size_t th_transient = 2000;
    std::string th_out = "theory.csv";
    theory->add_option("--mu", th_mu, "Per-allele mutation rate");
    theory->add_option("--n", th_n, "Population size N");
    theory->add_option("--len", th_len, "Condition length");
    theory->add_option("--trials", th_trials, "Explore trials");
    theory->add_option("--seed", th_seed, "Random seed");
    theory->add_option("--init-spec", th_init, "Initial population specificity");
    theory->add_option("--f-ga", th_fga, "GA invocations per cycle");
    theory->add_option("--transient", th_transient, "Trials ignored before the deviation check");
    theory->add_option("--out", th_out, "Two-series CSV path");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "Summarize a saved population file");
    std::string in_path;
    inspect->add_option("file", in_path, "Population file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_config, run_engine, run_env, run_trials, run_seed, run_out,
                           run_pop_out, run_window, run_coin_flip, run_sets,
                           f_engine->count() > 0, f_env->count() > 0, f_trials->count() > 0,
                           f_seed->count() > 0, f_out->count() > 0, f_window->count() > 0);
        if (cluster->parsed())
            return cmd_cluster(cl_data, cl_trials, cl_seed, cl_out, cl_pop_out, cl_min_exp,
                               cl_sets);
        if (approx->parsed())
            return cmd_approx(ap_func, ap_grid, ap_dims, ap_trials, ap_seed, ap_out, ap_pop_out,
                              ap_window, ap_sets);
        if (theory->parsed())
            return cmd_theory(th_mu, th_n, th_len, th_trials, th_seed, th_init, th_fga,
                              th_transient, th_out);
        if (inspect->parsed())
            return cmd_inspect(in_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    (void)f_config;
    return 0;
}
