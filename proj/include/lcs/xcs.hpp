#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lcs/core.hpp"
#include "lcs/rng.hpp"

namespace lcs {

// Accuracy-based rule: payoff prediction p, running prediction error eps,
// fitness F derived from relative accuracy within the action set.
struct AccuracyRule {
    std::uint64_t id = 0;
    TernaryCondition cond;
    int action = 0;
    double p = 0.0;        // reward prediction
    double eps = 0.0;      // prediction error
    double fitness = 0.0;  // F in [0,1]
    std::uint64_t exp = 0; // number of parameter updates
    std::uint64_t ts = 0;  // trial of last GA participation
    double as = 1.0;       // action-set-size estimate
};

struct XcsParams {
    std::size_t population_size = 400; // N
    double beta = 0.2;                 // learning rate
    double alpha = 0.1;                // accuracy falloff scale
    double eps0 = 10.0;                // error tolerance
    double nu = 5.0;                   // accuracy falloff exponent
    double gamma = 0.71;               // multistep payoff discount
    double theta_ga = 25.0;            // GA trigger threshold (mean trials since last GA)
    double p_explore = 0.5;            // explore probability when coin-flip selection is used
    std::size_t n_actions = 2;
    double init_p = 10.0;
    double init_eps = 0.0;
    double init_fitness = 0.01;
    double offspring_fitness_discount = 0.1;
    GaOperatorParams ga;
    // Config escape hatches; all default to the behavior described above.
    bool mam_on_p_eps = false;    // apply the averaging regime to p and eps as well
    bool cover_per_action = false; // cover until every action is present in [M]
    bool ga_in_match_set = false;  // historical niche choice: run the GA in [M]
    bool niche_mutation = false;   // mutation toggles toward the current input
    bool delete_fitness_penalty = false; // penalize low-fitness experienced rules on deletion

    void validate() const;
};

// XCS: accuracy-based fitness, fitness-weighted prediction array,
// explore/exploit action selection, triggered niche GA in the action set,
// global deletion by action-set-size estimate.
class Xcs {
public:
    using SetIndices = std::vector<std::size_t>;
    using PredictionArray = std::map<int, double>;

    explicit Xcs(XcsParams params);

    // Matching rules; on an empty [M] one covering rule (random action, or a
    // missing action under cover_per_action) is inserted and [M] recomputed.
    SetIndices form_match_set(const BitInput& input, std::uint64_t t, RandomStream& rng);
    SetIndices match_only(const BitInput& input) const;

    // Fitness-weighted mean prediction per action present in [M]; plain mean
    // where an action's fitness mass is zero.
    PredictionArray prediction_array(const SetIndices& match_set) const;

    enum class SelectMode { Explore, Exploit };
    // Explore: uniform among present actions. Exploit: argmax prediction,
    // ties to the lowest action id.
    int select_action(const PredictionArray& pa, SelectMode mode, RandomStream& rng) const;

    SetIndices action_set(const SetIndices& match_set, int action) const;

    // Five-step accuracy update at the given payoff target: error (using the
    // pre-update prediction), prediction, accuracy, relative accuracy, and
    // MAM fitness; also bumps experience and the set-size estimate.
    void update_set(const SetIndices& action_set, double payoff_target);

    // Triggered niche GA: fires when t - mean(ts over the set) exceeds
    // theta_ga. Fitness roulette inside the niche, one-point crossover,
    // per-allele mutation, global deletion by set-size estimate.
    void run_ga(const SetIndices& niche, std::uint64_t t, const BitInput& input,
                RandomStream& rng);

    // Remove one rule by roulette over action-set-size estimates.
    void delete_one(RandomStream& rng);

    const std::vector<AccuracyRule>& population() const { return pop_; }
    std::vector<AccuracyRule>& population() { return pop_; }
    const XcsParams& params() const { return params_; }

    void insert(AccuracyRule rule, RandomStream& rng); // enforces capacity
    std::vector<std::uint64_t> ids_of(const SetIndices& set) const;
    SetIndices resolve_ids(const std::vector<std::uint64_t>& ids) const;
    std::uint64_t next_id() { return next_id_++; }

private:
    double accuracy(double eps) const;

    XcsParams params_;
    std::vector<AccuracyRule> pop_;
    std::uint64_t next_id_ = 1;
};

} // namespace lcs
