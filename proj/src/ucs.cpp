#include "lcs/ucs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lcs/errors.hpp"
#include "lcs/match_kernel.hpp"

namespace lcs {

void UcsParams::validate() const {
    if (population_size == 0)
        throw ConfigError("population_size must be >= 1");
    if (v < 1.0)
        throw ConfigError("v must be >= 1");
    if (beta <= 0.0 || beta >= 1.0)
        throw ConfigError("beta must lie in (0,1)");
    if (theta_ga < 0.0)
        throw ConfigError("theta_ga must be non-negative");
    if (n_labels < 2)
        throw ConfigError("n_labels must be >= 2");
    ga.validate();
}

Ucs::Ucs(UcsParams params) : params_(std::move(params)) {
    params_.validate();
    pop_.reserve(params_.population_size + 2);
}

Ucs::SetIndices Ucs::match_only(const BitInput& input) const {
    std::vector<std::uint8_t> flags;
    match_scan(pop_.size(), [&](std::size_t i) { return matches(pop_[i].cond, input); }, flags);
    return indices_of(flags);
}

void Ucs::cover(const BitInput& input, int true_label, std::uint64_t t, RandomStream& rng) {
    for (std::size_t i : match_only(input))
        if (pop_[i].action == true_label)
            return;
    SupervisedRule rule;
    rule.id = next_id();
    rule.cond = cover_condition(input, params_.ga.p_wild, rng);
    rule.action = true_label;
    rule.correct = 1;
    rule.exp = 1;
    rule.kappa = 1.0;
    rule.fitness = 1.0;
    rule.cs = 1.0;
    rule.ts = t;
    insert(std::move(rule), rng);
}

Ucs::UpdateResult Ucs::update(const SetIndices& match_set, int true_label) {
    UpdateResult result;
    for (std::size_t i : match_set) {
        SupervisedRule& rule = pop_[i];
        rule.exp += 1;
        if (rule.action == true_label) {
            rule.correct += 1;
            result.correct_set.push_back(i);
        } else {
            result.incorrect_set.push_back(i);
        }
        rule.kappa = static_cast<double>(rule.correct) / static_cast<double>(rule.exp);
        rule.fitness = std::pow(rule.kappa, params_.v);
    }
    const double c_size = static_cast<double>(result.correct_set.size());
    for (std::size_t i : result.correct_set)
        pop_[i].cs += params_.beta * (c_size - pop_[i].cs);
    return result;
}

std::optional<int> Ucs::classify(const BitInput& input) const {
    const SetIndices match_set = match_only(input);
    if (match_set.empty())
        return std::nullopt;
    std::map<int, double> votes;
    for (std::size_t i : match_set)
        votes[pop_[i].action] += pop_[i].fitness;
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it)
        if (it->second > best->second)
            best = it; // ties keep the lowest label
    return best->first;
}

void Ucs::run_ga(const SetIndices& correct_set, std::uint64_t t, const BitInput& input,
                 RandomStream& rng) {
    if (correct_set.empty())
        return;
    double ts_mean = 0.0;
    for (std::size_t i : correct_set)
        ts_mean += static_cast<double>(pop_[i].ts);
    ts_mean /= static_cast<double>(correct_set.size());
    if (static_cast<double>(t) - ts_mean <= params_.theta_ga)
        return;
    for (std::size_t i : correct_set)
        pop_[i].ts = t;

    std::vector<double> weights(correct_set.size());
    double total = 0.0;
    for (std::size_t j = 0; j < correct_set.size(); ++j) {
        weights[j] = pop_[correct_set[j]].fitness;
        total += weights[j];
    }
    if (params_.fitness_sharing && total > 0.0)
        for (double& w : weights)
            w /= total; // relative accuracy within [C]; same roulette ordering
    std::size_t pa_j;
    std::size_t pb_j;
    if (total <= 0.0) {
        pa_j = rng.index(correct_set.size());
        pb_j = rng.index(correct_set.size());
    } else {
        pa_j = roulette(weights, rng);
        pb_j = roulette(weights, rng);
    }
    const SupervisedRule parent_a = pop_[correct_set[pa_j]];
    const SupervisedRule parent_b = pop_[correct_set[pb_j]];

    TernaryCondition cond_a = parent_a.cond;
    TernaryCondition cond_b = parent_b.cond;
    if (rng.bernoulli(params_.ga.chi))
        std::tie(cond_a, cond_b) = one_point_crossover(cond_a, cond_b, rng);
    cond_a = mutate_ternary(cond_a, params_.ga.mu, rng);
    cond_b = mutate_ternary(cond_b, params_.ga.mu, rng);

    // Offspring start with a discounted parental-mean accuracy, fitness
    // recomputed from it, and fresh counters.
    const double kappa0 = 0.1 * 0.5 * (parent_a.kappa + parent_b.kappa);
    const double cs0 = 0.5 * (parent_a.cs + parent_b.cs);
    for (auto* cond : {&cond_a, &cond_b}) {
        SupervisedRule child;
        child.id = next_id();
        child.cond = *cond;
        child.action = (cond == &cond_a) ? parent_a.action : parent_b.action;
        child.correct = 0;
        child.exp = 0;
        child.kappa = kappa0;
        child.fitness = std::pow(kappa0, params_.v);
        child.cs = cs0;
        child.ts = t;
        insert(std::move(child), rng);
    }
}

void Ucs::insert(SupervisedRule rule, RandomStream& rng) {
    pop_.push_back(std::move(rule));
    while (pop_.size() > params_.population_size)
        delete_one(rng);
}

void Ucs::delete_one(RandomStream& rng) {
    std::vector<double> votes(pop_.size());
    for (std::size_t i = 0; i < pop_.size(); ++i)
        votes[i] = pop_[i].cs;
    const std::size_t victim = roulette(votes, rng);
    pop_.erase(pop_.begin() + static_cast<std::ptrdiff_t>(victim));
}

} // namespace lcs
