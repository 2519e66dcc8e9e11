#include "lcs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lcs/errors.hpp"
#include "lcs/population_io.hpp"

namespace lcs {

double moving_performance(const std::deque<double>& history, std::size_t window) {
    if (window == 0)
        throw ConfigError("window must be >= 1");
    if (history.empty())
        throw InputError("moving performance of an empty history is undefined");
    const std::size_t n = std::min(window, history.size());
    double total = 0.0;
    for (std::size_t i = history.size() - n; i < history.size(); ++i)
        total += history[i];
    return total / static_cast<double>(n);
}

void MovingWindow::push(double value) {
    values_.push_back(value);
    if (values_.size() > window_)
        values_.pop_front();
}

double MovingWindow::mean() const {
    if (values_.empty())
        return 0.0;
    double total = 0.0;
    for (double v : values_)
        total += v;
    return total / static_cast<double>(values_.size());
}

namespace {

bool explore_turn(std::size_t t, bool coin_flip, RandomStream& rng) {
    if (coin_flip)
        return rng.bernoulli(0.5);
    return (t % 2) == 1; // learn on odd trials, measure on even
}

double mean_spec(const std::vector<StrengthRule>& pop) {
    if (pop.empty())
        return 0.0;
    double total = 0.0;
    for (const auto& r : pop)
        total += specificity(r.cond);
    return total / static_cast<double>(pop.size());
}

double mean_spec(const std::vector<AccuracyRule>& pop) {
    if (pop.empty())
        return 0.0;
    double total = 0.0;
    for (const auto& r : pop)
        total += specificity(r.cond);
    return total / static_cast<double>(pop.size());
}

double mean_spec(const std::vector<SupervisedRule>& pop) {
    if (pop.empty())
        return 0.0;
    double total = 0.0;
    for (const auto& r : pop)
        total += specificity(r.cond);
    return total / static_cast<double>(pop.size());
}

double mean_spec(const std::vector<FunctionRule>& pop, int grid_n) {
    if (pop.empty())
        return 0.0;
    double total = 0.0;
    for (const auto& r : pop) {
        double width = 0.0;
        for (std::size_t i = 0; i < r.cond.dims(); ++i)
            width += static_cast<double>(r.cond.upper[i] - r.cond.lower[i] + 1) /
                     static_cast<double>(grid_n);
        total += 1.0 - width / static_cast<double>(r.cond.dims());
    }
    return total / static_cast<double>(pop.size());
}

} // namespace

// --- multiplexer protocols ---------------------------------------------------

std::vector<MetricsRecord> run_xcs_on_mux(Xcs& engine, const MultiplexerTask& task,
                                          const ProtocolOptions& opt, RandomStream& rng) {
    std::vector<MetricsRecord> rows;
    MovingWindow perf(opt.window);
    MovingWindow err(opt.window);
    std::uint64_t ga_time = 0;
    std::size_t exploit_count = 0;
    for (std::size_t t = 1; t <= opt.trials; ++t) {
        const BitInput input = task.sample(rng);
        const int truth = mux_eval(task, input) ? 1 : 0;
        if (explore_turn(t, opt.coin_flip, rng)) {
            ++ga_time;
            const auto match_set = engine.form_match_set(input, ga_time, rng);
            const auto pa = engine.prediction_array(match_set);
            const int action = engine.select_action(pa, Xcs::SelectMode::Explore, rng);
            const double reward = (action == truth) ? opt.reward_correct : 0.0;
            const auto action_set = engine.action_set(match_set, action);
            engine.update_set(action_set, reward);
            engine.run_ga(engine.params().ga_in_match_set ? match_set : action_set, ga_time,
                          input, rng);
        } else {
            const auto match_set = engine.match_only(input);
            int action;
            if (match_set.empty()) {
                action = static_cast<int>(rng.index(engine.params().n_actions));
            } else {
                const auto pa = engine.prediction_array(match_set);
                action = engine.select_action(pa, Xcs::SelectMode::Exploit, rng);
                const double reward = (action == truth) ? opt.reward_correct : 0.0;
                err.push(std::abs(pa.at(action) - reward));
            }
            perf.push(action == truth ? 1.0 : 0.0);
            ++exploit_count;
            rows.push_back({exploit_count, perf.mean(), err.mean(), engine.population().size(),
                            mean_spec(engine.population())});
            if (opt.stop_at_performance >= 0.0 && perf.full() &&
                perf.mean() >= opt.stop_at_performance)
                break;
        }
    }
    return rows;
}

std::vector<MetricsRecord> run_ucs_on_mux(Ucs& engine, const MultiplexerTask& task,
                                          const ProtocolOptions& opt, RandomStream& rng) {
    std::vector<MetricsRecord> rows;
    MovingWindow perf(opt.window);
    std::uint64_t ga_time = 0;
    std::size_t exploit_count = 0;
    for (std::size_t t = 1; t <= opt.trials; ++t) {
        const BitInput input = task.sample(rng);
        const int label = mux_eval(task, input) ? 1 : 0;
        if (explore_turn(t, opt.coin_flip, rng)) {
            ++ga_time;
            engine.cover(input, label, ga_time, rng);
            const auto match_set = engine.match_only(input);
            const auto sets = engine.update(match_set, label);
            engine.run_ga(sets.correct_set, ga_time, input, rng);
        } else {
            const auto prediction = engine.classify(input);
            perf.push(prediction && *prediction == label ? 1.0 : 0.0);
            ++exploit_count;
            rows.push_back({exploit_count, perf.mean(), 0.0, engine.population().size(),
                            mean_spec(engine.population())});
            if (opt.stop_at_performance >= 0.0 && perf.full() &&
                perf.mean() >= opt.stop_at_performance)
                break;
        }
    }
    return rows;
}

std::vector<MetricsRecord> run_ucs_on_dataset(Ucs& engine, const std::vector<BitInput>& inputs,
                                              const std::vector<int>& labels,
                                              const ProtocolOptions& opt, RandomStream& rng) {
    if (inputs.empty() || inputs.size() != labels.size())
        throw ConfigError("dataset must be non-empty with one label per row");
    std::vector<MetricsRecord> rows;
    MovingWindow perf(opt.window);
    std::uint64_t ga_time = 0;
    std::size_t exploit_count = 0;
    for (std::size_t t = 1; t <= opt.trials; ++t) {
        const std::size_t row = rng.index(inputs.size());
        const BitInput& input = inputs[row];
        const int label = labels[row];
        if (explore_turn(t, opt.coin_flip, rng)) {
            ++ga_time;
            engine.cover(input, label, ga_time, rng);
            const auto match_set = engine.match_only(input);
            const auto sets = engine.update(match_set, label);
            engine.run_ga(sets.correct_set, ga_time, input, rng);
        } else {
            const auto prediction = engine.classify(input);
            perf.push(prediction && *prediction == label ? 1.0 : 0.0);
            ++exploit_count;
            rows.push_back({exploit_count, perf.mean(), 0.0, engine.population().size(),
                            mean_spec(engine.population())});
            if (opt.stop_at_performance >= 0.0 && perf.full() &&
                perf.mean() >= opt.stop_at_performance)
                break;
        }
    }
    return rows;
}

std::vector<MetricsRecord> run_zcs_on_mux(Zcs& engine, const MultiplexerTask& task,
                                          const ProtocolOptions& opt, RandomStream& rng) {
    std::vector<MetricsRecord> rows;
    MovingWindow perf(opt.window);
    std::size_t exploit_count = 0;
    const std::vector<std::uint64_t> no_predecessor;
    for (std::size_t t = 1; t <= opt.trials; ++t) {
        const BitInput input = task.sample(rng);
        const int truth = mux_eval(task, input) ? 1 : 0;
        if (explore_turn(t, opt.coin_flip, rng)) {
            const auto match_set = engine.form_match_set(input, rng);
            const auto choice = engine.select_action(match_set, rng);
            const double reward = (choice.action == truth) ? opt.reward_correct : 0.0;
            engine.credit(match_set, choice.action_set, no_predecessor, reward);
            engine.run_ga(rng);
        } else {
            const auto match_set = engine.match_only(input);
            int action;
            if (match_set.empty())
                action = static_cast<int>(rng.index(engine.params().n_actions));
            else
                action = engine.select_action_greedy(match_set).action;
            perf.push(action == truth ? 1.0 : 0.0);
            ++exploit_count;
            rows.push_back({exploit_count, perf.mean(), 0.0, engine.population().size(),
                            mean_spec(engine.population())});
            if (opt.stop_at_performance >= 0.0 && perf.full() &&
                perf.mean() >= opt.stop_at_performance)
                break;
        }
    }
    return rows;
}

// --- maze protocols ---------------------------------------------------------

std::vector<MetricsRecord> run_zcs_on_maze(Zcs& engine, MazeWorld& world,
                                           const ProtocolOptions& opt, RandomStream& rng) {
    std::vector<MetricsRecord> rows;
    MovingWindow perf(opt.window);
    std::size_t exploit_count = 0;
    for (std::size_t episode = 1; episode <= opt.trials; ++episode) {
        world.reset(rng);
        if (explore_turn(episode, opt.coin_flip, rng)) {
            std::vector<std::uint64_t> prev_ids;
            for (std::size_t step = 0; step < opt.episode_cap; ++step) {
                const BitInput input = world.sense();
                const auto match_set = engine.form_match_set(input, rng);
                const auto choice = engine.select_action(match_set, rng);
                const auto result = world.step(choice.action);
                engine.credit(match_set, choice.action_set, prev_ids, result.reward);
                prev_ids = engine.ids_of(choice.action_set);
                engine.run_ga(rng);
                if (result.done)
                    break;
            }
            // Episode boundary: the pending bucket chain ends here.
        } else {
            // Measured episodes run the system's own roulette selection
            // (ZCS has no separate greedy mode) without any updates.
            std::size_t steps = 0;
            for (; steps < opt.episode_cap;) {
                const BitInput input = world.sense();
                const auto match_set = engine.match_only(input);
                int action;
                if (match_set.empty())
                    action = static_cast<int>(rng.index(8));
                else
                    action = engine.select_action(match_set, rng).action;
                const auto result = world.step(action);
                ++steps;
                if (result.done)
                    break;
            }
            perf.push(static_cast<double>(steps));
            ++exploit_count;
            rows.push_back({exploit_count, perf.mean(), 0.0, engine.population().size(),
                            mean_spec(engine.population())});
        }
    }
    return rows;
}

std::vector<MetricsRecord> run_xcs_on_maze(Xcs& engine, MazeWorld& world,
                                           const ProtocolOptions& opt, RandomStream& rng) {
    std::vector<MetricsRecord> rows;
    MovingWindow perf(opt.window);
    MovingWindow err(opt.window);
    std::uint64_t ga_time = 0;
    std::size_t exploit_count = 0;
    const double gamma = engine.params().gamma;
    for (std::size_t episode = 1; episode <= opt.trials; ++episode) {
        world.reset(rng);
        if (explore_turn(episode, opt.coin_flip, rng)) {
            std::vector<std::uint64_t> prev_ids;
            double prev_reward = 0.0;
            BitInput prev_input;
            for (std::size_t step = 0; step < opt.episode_cap; ++step) {
                ++ga_time;
                const BitInput input = world.sense();
                const auto match_set = engine.form_match_set(input, ga_time, rng);
                const auto pa = engine.prediction_array(match_set);
                const int action = engine.select_action(pa, Xcs::SelectMode::Explore, rng);
                const auto action_ids = engine.ids_of(engine.action_set(match_set, action));
                // Q-learning backup for the previous step's set.
                if (!prev_ids.empty()) {
                    double max_pa = pa.begin()->second;
                    for (const auto& [a, v] : pa)
                        max_pa = std::max(max_pa, v);
                    const auto prev_set = engine.resolve_ids(prev_ids);
                    engine.update_set(prev_set, prev_reward + gamma * max_pa);
                    engine.run_ga(prev_set, ga_time, prev_input, rng);
                }
                const auto result = world.step(action);
                if (result.done) {
                    const auto final_set = engine.resolve_ids(action_ids);
                    engine.update_set(final_set, result.reward);
                    engine.run_ga(final_set, ga_time, input, rng);
                    break;
                }
                prev_ids = action_ids;
                prev_reward = result.reward;
                prev_input = input;
            }
        } else {
            std::size_t steps = 0;
            for (; steps < opt.episode_cap;) {
                const BitInput input = world.sense();
                const auto match_set = engine.match_only(input);
                int action;
                if (match_set.empty()) {
                    action = static_cast<int>(rng.index(8));
                } else {
                    const auto pa = engine.prediction_array(match_set);
                    action = engine.select_action(pa, Xcs::SelectMode::Exploit, rng);
                }
                const auto result = world.step(action);
                ++steps;
                if (result.done)
                    break;
            }
            perf.push(static_cast<double>(steps));
            ++exploit_count;
            rows.push_back({exploit_count, perf.mean(), err.mean(), engine.population().size(),
                            mean_spec(engine.population())});
        }
    }
    return rows;
}

// --- clustering / function protocols ----------------------------------------

void run_xcsc_on_points(Xcsc& engine, const std::vector<std::vector<double>>& points,
                        std::size_t trials, RandomStream& rng) {
    if (points.empty())
        throw ConfigError("clustering requires a non-empty dataset");
    for (std::size_t t = 1; t <= trials; ++t) {
        const auto& point = points[rng.index(points.size())];
        const auto match_set = engine.form_match_set(point, t, rng);
        engine.update_set(match_set, point);
        engine.run_ga(match_set, t, rng);
    }
}

std::vector<MetricsRecord> run_xcsf_on_function(Xcsf& engine, const FunctionTask& task,
                                                const ProtocolOptions& opt, RandomStream& rng) {
    std::vector<MetricsRecord> rows;
    MovingWindow perf(opt.window);
    std::uint64_t ga_time = 0;
    std::size_t exploit_count = 0;
    for (std::size_t t = 1; t <= opt.trials; ++t) {
        const std::vector<int> x = task.sample_point(rng);
        const double target = func_eval(task, x);
        if (explore_turn(t, opt.coin_flip, rng)) {
            ++ga_time;
            const auto match_set = engine.form_match_set(x, ga_time, rng);
            engine.update_set(match_set, x, target);
            engine.run_ga(match_set, ga_time, rng);
        } else {
            const auto match_set = engine.match_only(x);
            const double output = match_set.empty() ? 0.0 : engine.system_output(match_set, x);
            const double abs_err = std::abs(output - target);
            perf.push(abs_err);
            ++exploit_count;
            rows.push_back({exploit_count, perf.mean(), abs_err, engine.population().size(),
                            mean_spec(engine.population(), engine.params().grid_n)});
        }
    }
    return rows;
}

// --- configuration -------------------------------------------------------------

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' needs a numeric value, got '" + value + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' needs an integer value, got '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "off")
        return false;
    throw ConfigError("config key '" + key + "' needs a boolean value, got '" + value + "'");
}

using KvMap = std::map<std::string, std::string>;

bool take(KvMap& kv, const std::string& key, std::string& out) {
    auto it = kv.find(key);
    if (it == kv.end())
        return false;
    out = it->second;
    kv.erase(it);
    return true;
}

void take_double(KvMap& kv, const std::string& key, double& field) {
    std::string raw;
    if (take(kv, key, raw))
        field = to_double(key, raw);
}

void take_size(KvMap& kv, const std::string& key, std::size_t& field) {
    std::string raw;
    if (take(kv, key, raw))
        field = static_cast<std::size_t>(to_u64(key, raw));
}

void take_int(KvMap& kv, const std::string& key, int& field) {
    std::string raw;
    if (take(kv, key, raw))
        field = static_cast<int>(to_double(key, raw));
}

void take_bool(KvMap& kv, const std::string& key, bool& field) {
    std::string raw;
    if (take(kv, key, raw))
        field = to_bool(key, raw);
}

void reject_leftovers(const KvMap& kv) {
    if (!kv.empty())
        throw ConfigError("unknown config key '" + kv.begin()->first + "'");
}

void take_ga(KvMap& kv, GaOperatorParams& ga) {
    take_double(kv, "chi", ga.chi);
    take_double(kv, "mu", ga.mu);
    take_double(kv, "p_wild", ga.p_wild);
}

} // namespace

ZcsParams make_zcs_params(const KvMap& overrides, std::size_t n_actions) {
    KvMap kv = overrides;
    ZcsParams p;
    p.n_actions = n_actions;
    take_size(kv, "n", p.population_size);
    take_double(kv, "beta", p.beta);
    take_double(kv, "gamma", p.gamma);
    take_double(kv, "tax", p.tax);
    take_double(kv, "ga_rate", p.ga_rate);
    take_double(kv, "cover_fraction", p.cover_fraction);
    take_double(kv, "s_init", p.initial_strength);
    take_ga(kv, p.ga);
    reject_leftovers(kv);
    p.validate();
    return p;
}

XcsParams make_xcs_params(const KvMap& overrides, std::size_t n_actions) {
    KvMap kv = overrides;
    XcsParams p;
    p.n_actions = n_actions;
    take_size(kv, "n", p.population_size);
    take_double(kv, "beta", p.beta);
    take_double(kv, "alpha", p.alpha);
    take_double(kv, "eps0", p.eps0);
    take_double(kv, "nu", p.nu);
    take_double(kv, "gamma", p.gamma);
    take_double(kv, "theta_ga", p.theta_ga);
    take_double(kv, "p_explore", p.p_explore);
    take_double(kv, "init_p", p.init_p);
    take_double(kv, "init_eps", p.init_eps);
    take_double(kv, "init_f", p.init_fitness);
    take_double(kv, "offspring_discount", p.offspring_fitness_discount);
    take_bool(kv, "mam_on_p_eps", p.mam_on_p_eps);
    take_bool(kv, "cover_per_action", p.cover_per_action);
    take_bool(kv, "ga_in_match_set", p.ga_in_match_set);
    take_bool(kv, "niche_mutation", p.niche_mutation);
    take_bool(kv, "delete_fitness_penalty", p.delete_fitness_penalty);
    take_ga(kv, p.ga);
    reject_leftovers(kv);
    p.validate();
    return p;
}

UcsParams make_ucs_params(const KvMap& overrides, std::size_t n_labels) {
    KvMap kv = overrides;
    UcsParams p;
    p.n_labels = n_labels;
    take_size(kv, "n", p.population_size);
    take_double(kv, "beta", p.beta);
    take_double(kv, "v", p.v);
    take_double(kv, "theta_ga", p.theta_ga);
    take_bool(kv, "fitness_sharing", p.fitness_sharing);
    take_ga(kv, p.ga);
    reject_leftovers(kv);
    p.validate();
    return p;
}

XcscParams make_xcsc_params(const KvMap& overrides, std::size_t dims) {
    KvMap kv = overrides;
    XcscParams p;
    p.dims = dims;
    take_size(kv, "n", p.population_size);
    take_double(kv, "beta", p.beta);
    take_double(kv, "alpha", p.alpha);
    take_double(kv, "nu", p.nu);
    take_double(kv, "tau", p.tau);
    take_double(kv, "s0", p.s0);
    take_double(kv, "mut_span", p.mut_span);
    take_double(kv, "theta_ga", p.theta_ga);
    take_double(kv, "chi", p.chi);
    take_double(kv, "mu", p.mu);
    take_double(kv, "init_f", p.init_fitness);
    take_double(kv, "offspring_discount", p.offspring_fitness_discount);
    reject_leftovers(kv);
    p.validate();
    return p;
}

XcsfParams make_xcsf_params(const KvMap& overrides, std::size_t dims, int grid_n) {
    KvMap kv = overrides;
    XcsfParams p;
    p.dims = dims;
    p.grid_n = grid_n;
    p.cover_width = std::max(1, grid_n / 10);
    p.mutation_range = std::max(1, grid_n / 20);
    take_size(kv, "n", p.population_size);
    take_double(kv, "beta", p.beta);
    take_double(kv, "alpha", p.alpha);
    take_double(kv, "eps0", p.eps0);
    take_double(kv, "nu", p.nu);
    take_double(kv, "eta", p.eta);
    take_double(kv, "x0", p.x0);
    take_int(kv, "cover_width", p.cover_width);
    take_int(kv, "mutation_range", p.mutation_range);
    take_double(kv, "theta_ga", p.theta_ga);
    take_double(kv, "chi", p.chi);
    take_double(kv, "mu", p.mu);
    take_double(kv, "init_f", p.init_fitness);
    take_double(kv, "offspring_discount", p.offspring_fitness_discount);
    reject_leftovers(kv);
    p.validate();
    return p;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    if (key == "engine")
        engine = value;
    else if (key == "env")
        env = value;
    else if (key == "seed")
        seed = to_u64(key, value);
    else if (key == "trials")
        trials = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "window") {
        window = static_cast<std::size_t>(to_u64(key, value));
        if (window == 0)
            throw ConfigError("window must be >= 1");
    } else if (key == "out")
        out = value;
    else if (key == "pop_out")
        pop_out = value;
    else if (key == "coin_flip")
        coin_flip = to_bool(key, value);
    else if (key == "episode_cap") {
        episode_cap = static_cast<std::size_t>(to_u64(key, value));
        if (episode_cap == 0)
            throw ConfigError("episode_cap must be >= 1");
    } else if (key == "reward")
        reward = to_double(key, value);
    else
        overrides[key] = value;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        // Trim.
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not 'key = value': '" + line + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + " has an empty key or value");
        config.apply(key, value);
    }
    return config;
}

// --- metrics CSV ---------------------------------------------------------------

void write_metrics_csv(const std::vector<MetricsRecord>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write metrics file '" + path + "'");
    out << "trial,performance,system_error,pop_size,mean_specificity\n";
    char buf[160];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%zu,%.10g\n", row.trial,
                      row.performance, row.system_error, row.pop_size, row.mean_specificity);
        out << buf;
    }
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw LoadError("cannot open metrics file '" + path + "'", 0);
    std::vector<MetricsRecord> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "trial,performance,system_error,pop_size,mean_specificity")
                throw LoadError("unexpected metrics header", line_no);
            continue;
        }
        if (line.empty())
            continue;
        MetricsRecord row;
        std::istringstream fields(line);
        std::string field;
        std::vector<std::string> parts;
        while (std::getline(fields, field, ','))
            parts.push_back(field);
        if (parts.size() != 5)
            throw LoadError("metrics row must have 5 fields", line_no);
        row.trial = static_cast<std::size_t>(std::stoull(parts[0]));
        row.performance = std::stod(parts[1]);
        row.system_error = std::stod(parts[2]);
        row.pop_size = static_cast<std::size_t>(std::stoull(parts[3]));
        row.mean_specificity = std::stod(parts[4]);
        rows.push_back(row);
    }
    return rows;
}

// --- experiment dispatch ----------------------------------------------------------

namespace {

MultiplexerTask parse_mux(const std::string& env) {
    const std::string digits = env.substr(3);
    std::size_t length = 0;
    try {
        length = static_cast<std::size_t>(std::stoull(digits));
    } catch (const std::exception&) {
        throw ConfigError("bad multiplexer env '" + env + "'");
    }
    for (std::size_t k = 1; k <= 10; ++k)
        if (k + (std::size_t{1} << k) == length)
            return MultiplexerTask{k};
    throw ConfigError("no multiplexer has input length " + std::to_string(length));
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result;
    result.metrics_path = config.out;
    result.population_path = config.pop_out.empty() ? config.out + ".pop" : config.pop_out;
    RandomStream rng(config.seed);

    ProtocolOptions opt;
    opt.trials = config.trials;
    opt.window = config.window;
    opt.coin_flip = config.coin_flip;
    opt.episode_cap = config.episode_cap;
    opt.reward_correct = config.reward;

    if (config.engine == "xcs" && config.env.rfind("mux", 0) == 0) {
        const MultiplexerTask task = parse_mux(config.env);
        Xcs engine(make_xcs_params(config.overrides, 2));
        result.rows = run_xcs_on_mux(engine, task, opt, rng);
        write_metrics_csv(result.rows, result.metrics_path);
        save_population(engine.population(), task.input_length(), result.population_path);
    } else if (config.engine == "ucs" && config.env.rfind("mux", 0) == 0) {
        const MultiplexerTask task = parse_mux(config.env);
        Ucs engine(make_ucs_params(config.overrides, 2));
        result.rows = run_ucs_on_mux(engine, task, opt, rng);
        write_metrics_csv(result.rows, result.metrics_path);
        save_population(engine.population(), task.input_length(), result.population_path);
    } else if (config.engine == "zcs" && config.env.rfind("mux", 0) == 0) {
        const MultiplexerTask task = parse_mux(config.env);
        Zcs engine(make_zcs_params(config.overrides, 2));
        result.rows = run_zcs_on_mux(engine, task, opt, rng);
        write_metrics_csv(result.rows, result.metrics_path);
        save_population(engine.population(), task.input_length(), result.population_path);
    } else if (config.engine == "zcs" && config.env.rfind("maze:", 0) == 0) {
        MazeWorld world = MazeWorld::from_file(config.env.substr(5));
        world.set_food_reward(config.reward);
        Zcs engine(make_zcs_params(config.overrides, 8));
        result.rows = run_zcs_on_maze(engine, world, opt, rng);
        write_metrics_csv(result.rows, result.metrics_path);
        save_population(engine.population(), 16, result.population_path);
    } else if (config.engine == "xcs" && config.env.rfind("maze:", 0) == 0) {
        MazeWorld world = MazeWorld::from_file(config.env.substr(5));
        world.set_food_reward(config.reward);
        Xcs engine(make_xcs_params(config.overrides, 8));
        result.rows = run_xcs_on_maze(engine, world, opt, rng);
        write_metrics_csv(result.rows, result.metrics_path);
        save_population(engine.population(), 16, result.population_path);
    } else if (config.engine == "xcsc" && config.env.rfind("data:", 0) == 0) {
        const auto points = load_points_csv(config.env.substr(5));
        if (points.empty())
            throw ConfigError("clustering dataset is empty");
        Xcsc engine(make_xcsc_params(config.overrides, points.front().size()));
        run_xcsc_on_points(engine, points, config.trials, rng);
        write_metrics_csv(result.rows, result.metrics_path); // clustering: header only
        save_population(engine.population(), points.front().size(), result.population_path);
    } else if (config.engine == "xcsf" && (config.env == "sine" || config.env == "rms")) {
        KvMap kv = config.overrides;
        FunctionTask task;
        task.kind = config.env == "sine" ? FunctionKind::Sine : FunctionKind::Rms;
        task.d = config.env == "sine" ? 1 : 2;
        task.n = 1000;
        std::string raw;
        if (take(kv, "grid", raw))
            task.n = static_cast<std::size_t>(to_u64("grid", raw));
        if (take(kv, "d", raw))
            task.d = static_cast<std::size_t>(to_u64("d", raw));
        if (take(kv, "scale", raw))
            task.scale = to_double("scale", raw);
        task.validate();
        Xcsf engine(make_xcsf_params(kv, task.d, static_cast<int>(task.n)));
        result.rows = run_xcsf_on_function(engine, task, opt, rng);
        write_metrics_csv(result.rows, result.metrics_path);
        save_population(engine.population(), task.d, result.population_path);
    } else {
        throw ConfigError("unsupported engine/env combination '" + config.engine + "' on '" +
                          config.env + "'");
    }
    return result;
}

} // namespace lcs
