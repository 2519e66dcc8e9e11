#include "lcs/xcsc.hpp"

#include <algorithm>
#include <cmath>

#include "lcs/core.hpp"
#include "lcs/errors.hpp"
#include "lcs/match_kernel.hpp"

namespace lcs {

double IntervalConditionCS::lower(std::size_t i) const {
    return std::max(0.0, centre[i] - spread[i]);
}

double IntervalConditionCS::upper(std::size_t i) const {
    return std::min(1.0, centre[i] + spread[i]);
}

void XcscParams::validate() const {
    if (population_size == 0)
        throw ConfigError("population_size must be >= 1");
    if (beta <= 0.0 || beta >= 1.0)
        throw ConfigError("beta must lie in (0,1)");
    if (alpha <= 0.0 || alpha > 1.0)
        throw ConfigError("alpha must lie in (0,1]");
    if (nu < 1.0)
        throw ConfigError("nu must be >= 1");
    if (tau <= 0.0)
        throw ConfigError("tau must be positive");
    if (s0 <= 0.0 || s0 > 1.0)
        throw ConfigError("s0 must lie in (0,1]");
    if (mut_span <= 0.0)
        throw ConfigError("mut_span must be positive");
    if (theta_ga < 0.0)
        throw ConfigError("theta_ga must be non-negative");
    if (chi < 0.0 || chi > 1.0 || mu < 0.0 || mu > 1.0)
        throw ConfigError("chi and mu must be probabilities");
    if (dims == 0)
        throw ConfigError("dims must be >= 1");
}

Xcsc::Xcsc(XcscParams params) : params_(std::move(params)) {
    params_.validate();
    pop_.reserve(params_.population_size + 2);
}

bool Xcsc::match(const IntervalConditionCS& cond, const std::vector<double>& x) {
    if (cond.dims() != x.size())
        throw ConfigError("interval condition dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < cond.lower(i) || x[i] > cond.upper(i))
            return false;
    return true;
}

Xcsc::SetIndices Xcsc::match_only(const std::vector<double>& x) const {
    std::vector<std::uint8_t> flags;
    match_scan(pop_.size(), [&](std::size_t i) { return match(pop_[i].cond, x); }, flags);
    return indices_of(flags);
}

Xcsc::SetIndices Xcsc::form_match_set(const std::vector<double>& x, std::uint64_t t,
                                      RandomStream& rng) {
    SetIndices match_set = match_only(x);
    while (match_set.empty()) {
        ClusterRule rule;
        rule.id = next_id();
        rule.cond.centre = x;
        rule.cond.spread.resize(x.size());
        for (auto& s : rule.cond.spread)
            s = (1.0 - rng.uniform()) * params_.s0; // (0, s0]
        rule.eps = 0.0;
        rule.fitness = params_.init_fitness;
        rule.ts = t;
        insert(std::move(rule), rng);
        match_set = match_only(x);
    }
    return match_set;
}

void Xcsc::update_set(const SetIndices& match_set, const std::vector<double>& x) {
    if (match_set.empty())
        return;
    const double set_size = static_cast<double>(match_set.size());
    const std::uint64_t mam_limit =
        static_cast<std::uint64_t>(std::ceil(1.0 / params_.beta));

    // Widrow-Hoff toward the Euclidean distance between input and centre.
    double eps_total = 0.0;
    for (std::size_t i : match_set) {
        ClusterRule& rule = pop_[i];
        double dist2 = 0.0;
        for (std::size_t l = 0; l < x.size(); ++l) {
            const double diff = x[l] - rule.cond.centre[l];
            dist2 += diff * diff;
        }
        rule.eps += params_.beta * (std::sqrt(dist2) - rule.eps);
        eps_total += rule.eps;
    }

    // Adaptive tolerance from the current match set, then the accuracy,
    // relative-accuracy, and MAM fitness steps.
    const double eps0 = params_.tau * (eps_total / set_size);
    std::vector<double> kappa(match_set.size());
    double kappa_total = 0.0;
    for (std::size_t j = 0; j < match_set.size(); ++j) {
        const double eps = pop_[match_set[j]].eps;
        kappa[j] = (eps < eps0 || eps0 <= 0.0)
                       ? 1.0
                       : params_.alpha * std::pow(eps0 / eps, params_.nu);
        kappa_total += kappa[j];
    }
    for (std::size_t j = 0; j < match_set.size(); ++j) {
        ClusterRule& rule = pop_[match_set[j]];
        const double rel = kappa[j] / kappa_total;
        if (rule.exp >= mam_limit)
            rule.fitness += params_.beta * (rel - rule.fitness);
        else
            rule.fitness += (rel - rule.fitness) / static_cast<double>(rule.exp + 1);
        rule.exp += 1;
        rule.ms += params_.beta * (set_size - rule.ms);
    }
}

void Xcsc::run_ga(const SetIndices& match_set, std::uint64_t t, RandomStream& rng) {
    if (match_set.empty())
        return;
    double ts_mean = 0.0;
    for (std::size_t i : match_set)
        ts_mean += static_cast<double>(pop_[i].ts);
    ts_mean /= static_cast<double>(match_set.size());
    if (static_cast<double>(t) - ts_mean <= params_.theta_ga)
        return;
    for (std::size_t i : match_set)
        pop_[i].ts = t;

    std::vector<double> fitnesses(match_set.size());
    for (std::size_t j = 0; j < match_set.size(); ++j)
        fitnesses[j] = pop_[match_set[j]].fitness;
    std::size_t pa_j;
    std::size_t pb_j;
    if (std::all_of(fitnesses.begin(), fitnesses.end(), [](double f) { return f <= 0.0; })) {
        pa_j = rng.index(match_set.size());
        pb_j = rng.index(match_set.size());
    } else {
        pa_j = roulette(fitnesses, rng);
        pb_j = roulette(fitnesses, rng);
    }
    const ClusterRule parent_a = pop_[match_set[pa_j]];
    const ClusterRule parent_b = pop_[match_set[pb_j]];

    IntervalConditionCS cond_a = parent_a.cond;
    IntervalConditionCS cond_b = parent_b.cond;
    const std::size_t d = cond_a.dims();
    // One-point cut over dimensions, exchanging whole (c, s) pairs.
    if (d >= 2 && rng.bernoulli(params_.chi)) {
        const std::size_t cut = 1 + rng.index(d - 1);
        for (std::size_t i = cut; i < d; ++i) {
            std::swap(cond_a.centre[i], cond_b.centre[i]);
            std::swap(cond_a.spread[i], cond_b.spread[i]);
        }
    }
    for (auto* cond : {&cond_a, &cond_b}) {
        for (std::size_t i = 0; i < d; ++i) {
            if (rng.bernoulli(params_.mu)) {
                cond->centre[i] =
                    std::clamp(cond->centre[i] + rng.uniform(-params_.mut_span, params_.mut_span),
                               0.0, 1.0);
            }
            if (rng.bernoulli(params_.mu)) {
                cond->spread[i] =
                    std::clamp(cond->spread[i] + rng.uniform(-params_.mut_span, params_.mut_span),
                               1e-6, params_.s0);
            }
        }
    }

    const double mean_eps = 0.5 * (parent_a.eps + parent_b.eps);
    const double mean_fit = 0.5 * (parent_a.fitness + parent_b.fitness);
    const double mean_ms = 0.5 * (parent_a.ms + parent_b.ms);
    for (auto* cond : {&cond_a, &cond_b}) {
        ClusterRule child;
        child.id = next_id();
        child.cond = *cond;
        child.eps = mean_eps;
        child.fitness = params_.offspring_fitness_discount * mean_fit;
        child.exp = 0;
        child.ms = mean_ms;
        child.ts = t;
        insert(std::move(child), rng);
    }
}

void Xcsc::insert(ClusterRule rule, RandomStream& rng) {
    pop_.push_back(std::move(rule));
    while (pop_.size() > params_.population_size)
        delete_one(rng);
}

void Xcsc::delete_one(RandomStream& rng) {
    std::vector<double> votes(pop_.size());
    for (std::size_t i = 0; i < pop_.size(); ++i)
        votes[i] = pop_[i].ms;
    const std::size_t victim = roulette(votes, rng);
    pop_.erase(pop_.begin() + static_cast<std::ptrdiff_t>(victim));
}

std::vector<ClusterDescriptor> Xcsc::extract_clusters(std::uint64_t min_exp) const {
    // Survivors: experienced rules at or below the population median error.
    std::vector<double> errors;
    errors.reserve(pop_.size());
    for (const auto& rule : pop_)
        errors.push_back(rule.eps);
    if (errors.empty())
        return {};
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];

    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < pop_.size(); ++i)
        if (pop_[i].exp >= min_exp && pop_[i].eps <= median)
            survivors.push_back(i);
    if (survivors.empty())
        return {};

    const std::size_t d = pop_[survivors.front()].cond.dims();
    struct Group {
        std::vector<double> lower;
        std::vector<double> upper;
        std::vector<std::size_t> members;
    };
    std::vector<Group> groups;
    auto overlaps = [&](const Group& g, const ClusterRule& rule) {
        for (std::size_t i = 0; i < d; ++i)
            if (rule.cond.upper(i) < g.lower[i] || rule.cond.lower(i) > g.upper[i])
                return false;
        return true;
    };
    // Single greedy pass: each rule is unioned with every group whose
    // bounding box it overlaps in all dimensions; overlapping groups merge
    // through it.
    for (std::size_t i : survivors) {
        const ClusterRule& rule = pop_[i];
        Group merged;
        merged.lower.resize(d);
        merged.upper.resize(d);
        for (std::size_t k = 0; k < d; ++k) {
            merged.lower[k] = rule.cond.lower(k);
            merged.upper[k] = rule.cond.upper(k);
        }
        merged.members.push_back(i);
        std::vector<Group> rest;
        for (auto& g : groups) {
            if (overlaps(g, rule)) {
                for (std::size_t k = 0; k < d; ++k) {
                    merged.lower[k] = std::min(merged.lower[k], g.lower[k]);
                    merged.upper[k] = std::max(merged.upper[k], g.upper[k]);
                }
                merged.members.insert(merged.members.end(), g.members.begin(), g.members.end());
            } else {
                rest.push_back(std::move(g));
            }
        }
        rest.push_back(std::move(merged));
        groups = std::move(rest);
    }

    std::vector<ClusterDescriptor> out;
    out.reserve(groups.size());
    for (const auto& g : groups) {
        ClusterDescriptor desc;
        desc.lower = g.lower;
        desc.upper = g.upper;
        desc.centre.assign(d, 0.0);
        double weight_total = 0.0;
        for (std::size_t i : g.members) {
            const double w = static_cast<double>(pop_[i].exp);
            weight_total += w;
            for (std::size_t k = 0; k < d; ++k)
                desc.centre[k] += w * pop_[i].cond.centre[k];
            desc.support += pop_[i].exp;
        }
        for (std::size_t k = 0; k < d; ++k)
            desc.centre[k] /= weight_total;
        desc.rule_count = g.members.size();
        out.push_back(std::move(desc));
    }
    return out;
}

} // namespace lcs
