#include "lcs/xcs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lcs/errors.hpp"
#include "lcs/match_kernel.hpp"

namespace lcs {

void XcsParams::validate() const {
    if (population_size == 0)
        throw ConfigError("population_size must be >= 1");
    if (beta <= 0.0 || beta >= 1.0)
        throw ConfigError("beta must lie in (0,1)");
    if (alpha <= 0.0 || alpha > 1.0)
        throw ConfigError("alpha must lie in (0,1]");
    if (eps0 <= 0.0)
        throw ConfigError("eps0 must be positive");
    if (nu < 1.0)
        throw ConfigError("nu must be >= 1");
    if (gamma < 0.0 || gamma >= 1.0)
        throw ConfigError("gamma must lie in [0,1)");
    if (theta_ga < 0.0)
        throw ConfigError("theta_ga must be non-negative");
    if (p_explore < 0.0 || p_explore > 1.0)
        throw ConfigError("p_explore must be a probability");
    if (n_actions == 0)
        throw ConfigError("n_actions must be >= 1");
    if (offspring_fitness_discount <= 0.0 || offspring_fitness_discount > 1.0)
        throw ConfigError("offspring_fitness_discount must lie in (0,1]");
    ga.validate();
}

Xcs::Xcs(XcsParams params) : params_(std::move(params)) {
    params_.validate();
    pop_.reserve(params_.population_size + 2);
}

Xcs::SetIndices Xcs::match_only(const BitInput& input) const {
    std::vector<std::uint8_t> flags;
    match_scan(pop_.size(), [&](std::size_t i) { return matches(pop_[i].cond, input); }, flags);
    return indices_of(flags);
}

Xcs::SetIndices Xcs::form_match_set(const BitInput& input, std::uint64_t t, RandomStream& rng) {
    SetIndices match_set = match_only(input);
    auto missing_action = [&]() -> int {
        if (match_set.empty())
            return static_cast<int>(rng.index(params_.n_actions));
        if (!params_.cover_per_action)
            return -1;
        std::set<int> present;
        for (std::size_t i : match_set)
            present.insert(pop_[i].action);
        std::vector<int> absent;
        for (std::size_t a = 0; a < params_.n_actions; ++a)
            if (!present.count(static_cast<int>(a)))
                absent.push_back(static_cast<int>(a));
        if (absent.empty())
            return -1;
        return absent[rng.index(absent.size())];
    };
    // Loops until nothing is missing: the capacity deletion can claim the
    // covering rule itself.
    for (int action = missing_action(); action >= 0; action = missing_action()) {
        AccuracyRule rule;
        rule.id = next_id();
        rule.cond = cover_condition(input, params_.ga.p_wild, rng);
        rule.action = action;
        rule.p = params_.init_p;
        rule.eps = params_.init_eps;
        rule.fitness = params_.init_fitness;
        rule.ts = t;
        insert(std::move(rule), rng);
        match_set = match_only(input);
    }
    return match_set;
}

Xcs::PredictionArray Xcs::prediction_array(const SetIndices& match_set) const {
    PredictionArray pa;
    std::map<int, double> fitness_sum;
    std::map<int, double> plain_sum;
    std::map<int, std::size_t> count;
    for (std::size_t i : match_set) {
        const auto& rule = pop_[i];
        pa[rule.action] += rule.p * rule.fitness;
        fitness_sum[rule.action] += rule.fitness;
        plain_sum[rule.action] += rule.p;
        count[rule.action] += 1;
    }
    for (auto& [action, value] : pa) {
        if (fitness_sum[action] > 0.0)
            value /= fitness_sum[action];
        else
            value = plain_sum[action] / static_cast<double>(count[action]);
    }
    return pa;
}

int Xcs::select_action(const PredictionArray& pa, SelectMode mode, RandomStream& rng) const {
    if (pa.empty())
        throw SelectionError("action selection over an empty prediction array");
    if (mode == SelectMode::Explore) {
        const std::size_t pick = rng.index(pa.size());
        auto it = pa.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(pick));
        return it->first;
    }
    // Exploit: argmax; the map is ordered so the first maximum has the
    // lowest action id.
    auto best = pa.begin();
    for (auto it = pa.begin(); it != pa.end(); ++it)
        if (it->second > best->second)
            best = it;
    return best->first;
}

Xcs::SetIndices Xcs::action_set(const SetIndices& match_set, int action) const {
    SetIndices out;
    for (std::size_t i : match_set)
        if (pop_[i].action == action)
            out.push_back(i);
    return out;
}

double Xcs::accuracy(double eps) const {
    if (eps < params_.eps0)
        return 1.0;
    return params_.alpha * std::pow(params_.eps0 / eps, params_.nu);
}

void Xcs::update_set(const SetIndices& action_set, double payoff_target) {
    if (action_set.empty())
        return;
    const double set_size = static_cast<double>(action_set.size());
    const std::uint64_t mam_limit =
        static_cast<std::uint64_t>(std::ceil(1.0 / params_.beta));

    // Steps i-ii per rule, in order: the error update consumes the
    // pre-update prediction.
    std::vector<double> kappa(action_set.size());
    double kappa_total = 0.0;
    for (std::size_t j = 0; j < action_set.size(); ++j) {
        AccuracyRule& rule = pop_[action_set[j]];
        const double abs_err = std::abs(payoff_target - rule.p);
        if (params_.mam_on_p_eps && rule.exp < mam_limit) {
            const double n = static_cast<double>(rule.exp + 1);
            rule.eps += (abs_err - rule.eps) / n;
            rule.p += (payoff_target - rule.p) / n;
        } else {
            rule.eps += params_.beta * (abs_err - rule.eps);
            rule.p += params_.beta * (payoff_target - rule.p);
        }
        kappa[j] = accuracy(rule.eps);
        kappa_total += kappa[j];
    }

    // Steps iv-v: relative accuracy, then MAM fitness. Experience counts
    // fitness adjustments; the first ceil(1/beta) of them form a running
    // mean of the relative accuracies seen so far.
    for (std::size_t j = 0; j < action_set.size(); ++j) {
        AccuracyRule& rule = pop_[action_set[j]];
        const double rel = kappa[j] / kappa_total;
        if (rule.exp >= mam_limit)
            rule.fitness += params_.beta * (rel - rule.fitness);
        else
            rule.fitness += (rel - rule.fitness) / static_cast<double>(rule.exp + 1);
        rule.exp += 1;
        rule.as += params_.beta * (set_size - rule.as);
    }
}

void Xcs::run_ga(const SetIndices& niche, std::uint64_t t, const BitInput& input,
                 RandomStream& rng) {
    if (niche.empty())
        return;
    double ts_mean = 0.0;
    for (std::size_t i : niche)
        ts_mean += static_cast<double>(pop_[i].ts);
    ts_mean /= static_cast<double>(niche.size());
    if (static_cast<double>(t) - ts_mean <= params_.theta_ga)
        return;

    for (std::size_t i : niche)
        pop_[i].ts = t;

    std::vector<double> fitnesses(niche.size());
    for (std::size_t j = 0; j < niche.size(); ++j)
        fitnesses[j] = pop_[niche[j]].fitness;
    std::size_t pa_j;
    std::size_t pb_j;
    if (std::all_of(fitnesses.begin(), fitnesses.end(), [](double f) { return f <= 0.0; })) {
        pa_j = rng.index(niche.size());
        pb_j = rng.index(niche.size());
    } else {
        pa_j = roulette(fitnesses, rng);
        pb_j = roulette(fitnesses, rng);
    }
    const AccuracyRule parent_a = pop_[niche[pa_j]]; // copies: insertion shifts indices
    const AccuracyRule parent_b = pop_[niche[pb_j]];

    TernaryCondition cond_a = parent_a.cond;
    TernaryCondition cond_b = parent_b.cond;
    if (rng.bernoulli(params_.ga.chi))
        std::tie(cond_a, cond_b) = one_point_crossover(cond_a, cond_b, rng);
    if (params_.niche_mutation) {
        cond_a = mutate_ternary_niche(cond_a, params_.ga.mu, input, rng);
        cond_b = mutate_ternary_niche(cond_b, params_.ga.mu, input, rng);
    } else {
        cond_a = mutate_ternary(cond_a, params_.ga.mu, rng);
        cond_b = mutate_ternary(cond_b, params_.ga.mu, rng);
    }

    const double mean_p = 0.5 * (parent_a.p + parent_b.p);
    const double mean_eps = 0.5 * (parent_a.eps + parent_b.eps);
    const double mean_fit = 0.5 * (parent_a.fitness + parent_b.fitness);
    const double mean_as = 0.5 * (parent_a.as + parent_b.as);
    for (auto* cond : {&cond_a, &cond_b}) {
        AccuracyRule child;
        child.id = next_id();
        child.cond = *cond;
        child.action = (cond == &cond_a) ? parent_a.action : parent_b.action;
        child.p = mean_p;
        child.eps = mean_eps;
        child.fitness = params_.offspring_fitness_discount * mean_fit;
        child.exp = 0;
        child.ts = t;
        child.as = mean_as;
        insert(std::move(child), rng);
    }
}

void Xcs::insert(AccuracyRule rule, RandomStream& rng) {
    pop_.push_back(std::move(rule));
    while (pop_.size() > params_.population_size)
        delete_one(rng);
}

void Xcs::delete_one(RandomStream& rng) {
    std::vector<double> votes(pop_.size());
    double mean_fitness = 0.0;
    if (params_.delete_fitness_penalty) {
        for (const auto& rule : pop_)
            mean_fitness += rule.fitness;
        mean_fitness /= static_cast<double>(pop_.size());
    }
    for (std::size_t i = 0; i < pop_.size(); ++i) {
        double vote = pop_[i].as;
        if (params_.delete_fitness_penalty && pop_[i].exp > 20 &&
            pop_[i].fitness < 0.1 * mean_fitness && pop_[i].fitness > 0.0)
            vote *= mean_fitness / pop_[i].fitness;
        votes[i] = vote;
    }
    const std::size_t victim = roulette(votes, rng);
    pop_.erase(pop_.begin() + static_cast<std::ptrdiff_t>(victim));
}

std::vector<std::uint64_t> Xcs::ids_of(const SetIndices& set) const {
    std::vector<std::uint64_t> ids;
    ids.reserve(set.size());
    for (std::size_t i : set)
        ids.push_back(pop_[i].id);
    return ids;
}

Xcs::SetIndices Xcs::resolve_ids(const std::vector<std::uint64_t>& ids) const {
    SetIndices out;
    for (std::size_t i = 0; i < pop_.size(); ++i)
        for (std::uint64_t id : ids)
            if (pop_[i].id == id) {
                out.push_back(i);
                break;
            }
    return out;
}

} // namespace lcs
