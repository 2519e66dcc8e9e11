#pragma once

#include <cstddef>
#include <vector>

#include "lcs/xcs.hpp"

namespace lcs {

// Closed-form specificity dynamics of XCS under neutral fitness, plus a
// live-run comparator that measures the same quantity on the engine.

// Mean action-set specificity implied by population specificity:
// s_A = s_P / (2 - s_P).
double action_set_specificity(double population_specificity);

// Mean specificity change from parent to offspring under per-allele
// mutation rate mu at parent specificity s: 0.5 * mu * (2 - 3s).
double delta_mut(double mu, double s);

struct SpecificityState {
    double population_specificity = 0.5; // s_P
    double ga_frequency = 1.0;           // GA invocations per cycle
    std::size_t population_size = 400;   // N
    double mu = 0.04;
};

// One iteration of the specificity recurrence; delta_mut is evaluated at the
// parents' set specificity.
double specificity_step(const SpecificityState& state);

// Mean condition specificity over the population.
double measure_population_specificity(const std::vector<AccuracyRule>& pop);

struct TrajectoryConfig {
    std::size_t condition_length = 20;
    double initial_specificity = 0.25;
    std::size_t trials = 5000;
    std::uint64_t seed = 1;
    double constant_reward = 1000.0;
    double ga_frequency = 1.0; // GA invocation probability per cycle
    XcsParams xcs;             // theta_ga is forced to 0 so the trigger never delays
};

struct TrajectoryResult {
    std::vector<double> predicted; // one entry per trial
    std::vector<double> measured;
    double max_deviation_after_transient = 0.0;
    std::size_t transient = 0;
};

// Runs XCS on a neutral-fitness task (uniform random inputs, constant reward
// for every action) with a random initial population at the requested
// specificity, recording measured population specificity per explore trial
// alongside the iterated recurrence from the same starting point.
TrajectoryResult specificity_trajectory_compare(const TrajectoryConfig& config,
                                                std::size_t transient);

} // namespace lcs
