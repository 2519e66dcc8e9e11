#include "lcs/theory.hpp"

#include <algorithm>
#include <cmath>

#include "lcs/errors.hpp"

namespace lcs {

double action_set_specificity(double population_specificity) {
    return population_specificity / (2.0 - population_specificity);
}

double delta_mut(double mu, double s) {
    return 0.5 * mu * (2.0 - 3.0 * s);
}

double specificity_step(const SpecificityState& state) {
    const double s_p = state.population_specificity;
    const double s_a = action_set_specificity(s_p);
    const double drift = delta_mut(state.mu, s_a);
    return s_p + state.ga_frequency * (2.0 * (s_a + drift - s_p)) /
                     static_cast<double>(state.population_size);
}

double measure_population_specificity(const std::vector<AccuracyRule>& pop) {
    if (pop.empty())
        throw InputError("specificity of an empty population is undefined");
    double total = 0.0;
    for (const auto& rule : pop)
        total += specificity(rule.cond);
    return total / static_cast<double>(pop.size());
}

TrajectoryResult specificity_trajectory_compare(const TrajectoryConfig& config,
                                                std::size_t transient) {
    XcsParams params = config.xcs;
    params.theta_ga = 0.0; // GA every cycle, matching ga_frequency = 1
    Xcs engine(params);
    RandomStream rng(config.seed);

    // Random initial population: each symbol is specific with probability
    // initial_specificity, defined bits uniform.
    for (std::size_t i = 0; i < params.population_size; ++i) {
        AccuracyRule rule;
        rule.id = engine.next_id();
        rule.cond.symbols.resize(config.condition_length);
        for (auto& s : rule.cond.symbols)
            s = rng.bernoulli(config.initial_specificity) ? static_cast<Tri>(rng.index(2))
                                                          : Tri::Wild;
        rule.action = static_cast<int>(rng.index(params.n_actions));
        rule.p = config.constant_reward;
        rule.eps = 0.0;
        rule.fitness = params.init_fitness;
        engine.population().push_back(std::move(rule));
    }

    TrajectoryResult result;
    result.transient = transient;
    result.predicted.reserve(config.trials);
    result.measured.reserve(config.trials);

    SpecificityState state;
    state.population_size = params.population_size;
    state.mu = params.ga.mu;
    state.ga_frequency = config.ga_frequency;
    state.population_specificity = measure_population_specificity(engine.population());

    double predicted = state.population_specificity;
    for (std::size_t t = 1; t <= config.trials; ++t) {
        BitInput input(config.condition_length);
        for (auto& b : input)
            b = static_cast<std::uint8_t>(rng.index(2));
        const auto match_set = engine.form_match_set(input, t, rng);
        const auto pa = engine.prediction_array(match_set);
        const int action = engine.select_action(pa, Xcs::SelectMode::Explore, rng);
        const auto action_set = engine.action_set(match_set, action);
        engine.update_set(action_set, config.constant_reward);
        if (config.ga_frequency > 0.0 && rng.bernoulli(config.ga_frequency))
            engine.run_ga(action_set, t, input, rng);

        result.measured.push_back(measure_population_specificity(engine.population()));
        state.population_specificity = predicted;
        predicted = specificity_step(state);
        result.predicted.push_back(predicted);
    }

    double max_dev = 0.0;
    for (std::size_t t = transient; t < config.trials; ++t)
        max_dev = std::max(max_dev, std::abs(result.measured[t] - result.predicted[t]));
    result.max_deviation_after_transient = max_dev;
    return result;
}

} // namespace lcs
