#pragma once

#include <cstdint>
#include <vector>

#include "lcs/core.hpp"
#include "lcs/rng.hpp"

namespace lcs {

// Strength-based rule: a single credit parameter drives both action
// selection and reproduction.
struct StrengthRule {
    std::uint64_t id = 0;
    TernaryCondition cond;
    int action = 0;
    double strength = 0.0;
};

struct ZcsParams {
    std::size_t population_size = 400; // N
    double beta = 0.2;                 // learning/bid rate
    double gamma = 0.71;               // bucket discount
    double tax = 0.1;                  // strength tax on [M] \ [A]
    double ga_rate = 0.25;             // GA invocation probability per cycle
    double cover_fraction = 0.5;       // phi: covering threshold vs population mean strength
    double initial_strength = 20.0;    // S0, used when the population is empty
    std::size_t n_actions = 2;
    // The per-cycle panmictic GA with strength halving wants far gentler
    // operator rates than the triggered niche GAs do.
    GaOperatorParams ga{.chi = 0.5, .mu = 0.002, .p_wild = 0.33};

    void validate() const;
};

// Zeroth-level classifier system: match/cover, strength-roulette action
// selection, implicit bucket-brigade credit with discounting and a match-set
// tax, and a panmictic GA with strength-halving reproduction.
class Zcs {
public:
    using SetIndices = std::vector<std::size_t>;

    explicit Zcs(ZcsParams params);

    // Matching rules; covers (one rule: covered condition, random action,
    // strength = population mean) when [M] is empty or its summed strength
    // falls below cover_fraction x mean rule strength.
    SetIndices form_match_set(const BitInput& input, RandomStream& rng);

    // Match set without covering, for measured trials.
    SetIndices match_only(const BitInput& input) const;

    struct ActionChoice {
        int action = 0;
        SetIndices action_set;
    };
    // Roulette over per-action strength sums; uniform among present actions
    // when every strength is zero.
    ActionChoice select_action(const SetIndices& match_set, RandomStream& rng);
    // Deterministic variant: highest strength sum, ties to the lowest action.
    ActionChoice select_action_greedy(const SetIndices& match_set) const;

    // One credit-assignment step. Each member of the action set pays
    // beta * strength into a bucket and receives an equal share of
    // beta * reward; the previous action set (by rule id, if any) receives
    // the bucket discounted by gamma; everything matched but not acting is
    // taxed. Returns the bucket paid by the current action set.
    double credit(const SetIndices& match_set, const SetIndices& action_set,
                  const std::vector<std::uint64_t>& prev_action_ids, double reward);

    // Panmictic GA: fires with probability ga_rate; strength roulette picks
    // two parents, offspring take half the mean parental strength and the
    // parents are halved. Deletes by inverse-strength roulette over capacity.
    void run_ga(RandomStream& rng);

    const std::vector<StrengthRule>& population() const { return pop_; }
    std::vector<StrengthRule>& population() { return pop_; }
    const ZcsParams& params() const { return params_; }

    double mean_strength() const;
    std::vector<std::uint64_t> ids_of(const SetIndices& set) const;
    void insert(StrengthRule rule, RandomStream& rng); // enforces capacity
    std::uint64_t next_id() { return next_id_++; }

private:
    void delete_one(RandomStream& rng);

    ZcsParams params_;
    std::vector<StrengthRule> pop_;
    std::vector<std::uint8_t> flags_;
    std::uint64_t next_id_ = 1;
};

} // namespace lcs
