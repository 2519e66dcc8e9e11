#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lcs/core.hpp"
#include "lcs/rng.hpp"

namespace lcs {

// Supervised rule: accuracy is the exact proportion of correct
// classifications over matches, fitness its v-th power.
struct SupervisedRule {
    std::uint64_t id = 0;
    TernaryCondition cond;
    int action = 0; // class label
    std::uint64_t correct = 0;
    std::uint64_t exp = 0; // times matched
    double kappa = 0.0;
    double fitness = 0.0;
    double cs = 1.0; // correct-set-size estimate
    std::uint64_t ts = 0;
};

struct UcsParams {
    std::size_t population_size = 400; // N
    double v = 1.0;                    // fitness exponent, F = kappa^v
    double beta = 0.2;                 // set-size estimate rate
    double theta_ga = 25.0;
    std::size_t n_labels = 2;
    GaOperatorParams ga;
    bool fitness_sharing = false; // relative accuracy within [C] drives reproduction

    void validate() const;
};

// UCS: correct-set formation, accuracy-as-proportion fitness, GA in [C],
// global deletion by correct-set size.
class Ucs {
public:
    using SetIndices = std::vector<std::size_t>;

    explicit Ucs(UcsParams params);

    SetIndices match_only(const BitInput& input) const;

    // Inserts a covering rule advocating the label when no matching rule
    // does (kappa = 1, exp = correct = 1).
    void cover(const BitInput& input, int true_label, std::uint64_t t, RandomStream& rng);

    struct UpdateResult {
        SetIndices correct_set;
        SetIndices incorrect_set;
    };
    // Splits [M] by the true label, bumps experience everywhere and correct
    // counts in [C], and recomputes kappa = correct/exp and F = kappa^v.
    UpdateResult update(const SetIndices& match_set, int true_label);

    // Fitness-weighted vote over matching rules; empty match set abstains.
    std::optional<int> classify(const BitInput& input) const;

    // Triggered GA over [C]; deletion is global by cs-estimate roulette.
    void run_ga(const SetIndices& correct_set, std::uint64_t t, const BitInput& input,
                RandomStream& rng);

    const std::vector<SupervisedRule>& population() const { return pop_; }
    std::vector<SupervisedRule>& population() { return pop_; }
    const UcsParams& params() const { return params_; }

    void insert(SupervisedRule rule, RandomStream& rng);
    std::uint64_t next_id() { return next_id_++; }

private:
    void delete_one(RandomStream& rng);

    UcsParams params_;
    std::vector<SupervisedRule> pop_;
    std::uint64_t next_id_ = 1;
};

} // namespace lcs
