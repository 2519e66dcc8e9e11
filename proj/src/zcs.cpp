#include "lcs/zcs.hpp"

#include <algorithm>
#include <map>

#include "lcs/errors.hpp"
#include "lcs/match_kernel.hpp"

namespace lcs {

void ZcsParams::validate() const {
    if (population_size == 0)
        throw ConfigError("population_size must be >= 1");
    if (beta <= 0.0 || beta >= 1.0)
        throw ConfigError("beta must lie in (0,1)");
    if (gamma <= 0.0 || gamma >= 1.0)
        throw ConfigError("gamma must lie in (0,1)");
    if (tax < 0.0 || tax >= 1.0)
        throw ConfigError("tax must lie in [0,1)");
    if (ga_rate < 0.0 || ga_rate > 1.0)
        throw ConfigError("ga_rate must lie in [0,1]");
    if (cover_fraction < 0.0)
        throw ConfigError("cover_fraction must be non-negative");
    if (initial_strength < 0.0)
        throw ConfigError("initial_strength must be non-negative");
    if (n_actions == 0)
        throw ConfigError("n_actions must be >= 1");
    ga.validate();
}

Zcs::Zcs(ZcsParams params) : params_(std::move(params)) {
    params_.validate();
    pop_.reserve(params_.population_size + 2);
}

double Zcs::mean_strength() const {
    if (pop_.empty())
        return params_.initial_strength;
    double total = 0.0;
    for (const auto& rule : pop_)
        total += rule.strength;
    return total / static_cast<double>(pop_.size());
}

Zcs::SetIndices Zcs::match_only(const BitInput& input) const {
    std::vector<std::uint8_t> flags;
    match_scan(pop_.size(), [&](std::size_t i) { return matches(pop_[i].cond, input); }, flags);
    return indices_of(flags);
}

Zcs::SetIndices Zcs::form_match_set(const BitInput& input, RandomStream& rng) {
    SetIndices match_set = match_only(input);
    double set_strength = 0.0;
    for (std::size_t i : match_set)
        set_strength += pop_[i].strength;
    const double threshold = params_.cover_fraction * mean_strength();
    if (match_set.empty() || set_strength < threshold) {
        StrengthRule rule;
        rule.id = next_id();
        rule.cond = cover_condition(input, params_.ga.p_wild, rng);
        rule.action = static_cast<int>(rng.index(params_.n_actions));
        rule.strength = mean_strength();
        insert(std::move(rule), rng);
        match_set = match_only(input);
    }
    // The capacity deletion can claim the covering rule itself; keep
    // covering until something matches.
    while (match_set.empty()) {
        StrengthRule rule;
        rule.id = next_id();
        rule.cond = cover_condition(input, params_.ga.p_wild, rng);
        rule.action = static_cast<int>(rng.index(params_.n_actions));
        rule.strength = mean_strength();
        insert(std::move(rule), rng);
        match_set = match_only(input);
    }
    return match_set;
}

Zcs::ActionChoice Zcs::select_action(const SetIndices& match_set, RandomStream& rng) {
    if (match_set.empty())
        throw SelectionError("action selection over an empty match set");
    std::map<int, double> strength_by_action;
    for (std::size_t i : match_set)
        strength_by_action[pop_[i].action] += pop_[i].strength;

    int chosen;
    double total = 0.0;
    for (const auto& [action, s] : strength_by_action)
        total += s;
    if (total <= 0.0) {
        // Degenerate strengths: uniform among the actions present.
        std::vector<int> actions;
        for (const auto& [action, s] : strength_by_action)
            actions.push_back(action);
        chosen = actions[rng.index(actions.size())];
    } else {
        std::vector<int> actions;
        std::vector<double> weights;
        for (const auto& [action, s] : strength_by_action) {
            actions.push_back(action);
            weights.push_back(s);
        }
        chosen = actions[roulette(weights, rng)];
    }

    ActionChoice choice;
    choice.action = chosen;
    for (std::size_t i : match_set)
        if (pop_[i].action == chosen)
            choice.action_set.push_back(i);
    return choice;
}

Zcs::ActionChoice Zcs::select_action_greedy(const SetIndices& match_set) const {
    if (match_set.empty())
        throw SelectionError("action selection over an empty match set");
    std::map<int, double> strength_by_action;
    for (std::size_t i : match_set)
        strength_by_action[pop_[i].action] += pop_[i].strength;
    int best_action = strength_by_action.begin()->first;
    double best = strength_by_action.begin()->second;
    for (const auto& [action, s] : strength_by_action)
        if (s > best) { // ties keep the lowest action (map is ordered)
            best = s;
            best_action = action;
        }
    ActionChoice choice;
    choice.action = best_action;
    for (std::size_t i : match_set)
        if (pop_[i].action == best_action)
            choice.action_set.push_back(i);
    return choice;
}

double Zcs::credit(const SetIndices& match_set, const SetIndices& action_set,
                   const std::vector<std::uint64_t>& prev_action_ids, double reward) {
    // Bucket is collected from pre-step strengths.
    double bucket = 0.0;
    for (std::size_t i : action_set) {
        bucket += params_.beta * pop_[i].strength;
        pop_[i].strength *= 1.0 - params_.beta;
    }
    if (!action_set.empty()) {
        const double share = params_.beta * reward / static_cast<double>(action_set.size());
        for (std::size_t i : action_set)
            pop_[i].strength += share;
    }
    if (!prev_action_ids.empty()) {
        // Resolve ids: predecessors may have been deleted by the GA in between.
        SetIndices prev;
        for (std::size_t i = 0; i < pop_.size(); ++i)
            for (std::uint64_t id : prev_action_ids)
                if (pop_[i].id == id) {
                    prev.push_back(i);
                    break;
                }
        if (!prev.empty()) {
            const double share = params_.gamma * bucket / static_cast<double>(prev.size());
            for (std::size_t i : prev)
                pop_[i].strength += share;
        }
    }
    for (std::size_t i : match_set) {
        if (std::find(action_set.begin(), action_set.end(), i) == action_set.end())
            pop_[i].strength *= 1.0 - params_.tax;
    }
    return bucket;
}

void Zcs::insert(StrengthRule rule, RandomStream& rng) {
    pop_.push_back(std::move(rule));
    while (pop_.size() > params_.population_size)
        delete_one(rng);
}

void Zcs::delete_one(RandomStream& rng) {
    std::vector<double> votes(pop_.size());
    for (std::size_t i = 0; i < pop_.size(); ++i)
        votes[i] = 1.0 / (pop_[i].strength + 0.001);
    const std::size_t victim = roulette(votes, rng);
    pop_.erase(pop_.begin() + static_cast<std::ptrdiff_t>(victim));
}

void Zcs::run_ga(RandomStream& rng) {
    if (!rng.bernoulli(params_.ga_rate) || pop_.size() < 2)
        return;
    std::vector<double> strengths(pop_.size());
    for (std::size_t i = 0; i < pop_.size(); ++i)
        strengths[i] = pop_[i].strength;
    std::size_t pa;
    std::size_t pb;
    if (std::all_of(strengths.begin(), strengths.end(), [](double s) { return s <= 0.0; })) {
        pa = rng.index(pop_.size());
        pb = rng.index(pop_.size());
    } else {
        pa = roulette(strengths, rng);
        pb = roulette(strengths, rng);
    }

    TernaryCondition cond_a = pop_[pa].cond;
    TernaryCondition cond_b = pop_[pb].cond;
    const int action_a = pop_[pa].action;
    const int action_b = pop_[pb].action;
    if (rng.bernoulli(params_.ga.chi))
        std::tie(cond_a, cond_b) = one_point_crossover(cond_a, cond_b, rng);
    cond_a = mutate_ternary(cond_a, params_.ga.mu, rng);
    cond_b = mutate_ternary(cond_b, params_.ga.mu, rng);

    // Offspring each take half of the mean parental strength; both parents
    // give up half of theirs, so total strength is conserved. A rule drawn
    // twice donates only once.
    double donated;
    if (pa == pb) {
        donated = 0.5 * pop_[pa].strength;
        pop_[pa].strength *= 0.5;
    } else {
        donated = 0.5 * (pop_[pa].strength + pop_[pb].strength);
        pop_[pa].strength *= 0.5;
        pop_[pb].strength *= 0.5;
    }
    const double child_strength = 0.5 * donated;

    // Capacity deletion inside insert() can shift indices, so parent state
    // must not be touched past this point.
    StrengthRule child_a;
    child_a.id = next_id();
    child_a.cond = std::move(cond_a);
    child_a.action = action_a;
    child_a.strength = child_strength;
    StrengthRule child_b;
    child_b.id = next_id();
    child_b.cond = std::move(cond_b);
    child_b.action = action_b;
    child_b.strength = child_strength;
    insert(std::move(child_a), rng);
    insert(std::move(child_b), rng);
}

std::vector<std::uint64_t> Zcs::ids_of(const SetIndices& set) const {
    std::vector<std::uint64_t> ids;
    ids.reserve(set.size());
    for (std::size_t i : set)
        ids.push_back(pop_[i].id);
    return ids;
}

} // namespace lcs
