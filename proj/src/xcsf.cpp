#include "lcs/xcsf.hpp"

#include <algorithm>
#include <cmath>

#include "lcs/core.hpp"
#include "lcs/errors.hpp"
#include "lcs/match_kernel.hpp"

namespace lcs {

void XcsfParams::validate() const {
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
    if (eta <= 0.0 || eta > 1.0)
        throw ConfigError("eta must lie in (0,1]");
    if (x0 <= 0.0)
        throw ConfigError("x0 must be positive");
    if (cover_width < 0 || mutation_range < 0)
        throw ConfigError("cover_width and mutation_range must be non-negative");
    if (theta_ga < 0.0)
        throw ConfigError("theta_ga must be non-negative");
    if (chi < 0.0 || chi > 1.0 || mu < 0.0 || mu > 1.0)
        throw ConfigError("chi and mu must be probabilities");
    if (dims == 0)
        throw ConfigError("dims must be >= 1");
    if (grid_n < 2)
        throw ConfigError("grid_n must be >= 2");
}

Xcsf::Xcsf(XcsfParams params) : params_(std::move(params)) {
    params_.validate();
    pop_.reserve(params_.population_size + 2);
}

bool Xcsf::match(const IntervalConditionLU& cond, const std::vector<int>& x) {
    if (cond.dims() != x.size())
        throw ConfigError("interval condition dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < cond.lower[i] || x[i] > cond.upper[i])
            return false;
    return true;
}

double Xcsf::predict(const FunctionRule& rule, const std::vector<int>& x) const {
    double out = rule.weights[0] * params_.x0;
    for (std::size_t i = 0; i < x.size(); ++i)
        out += rule.weights[i + 1] * static_cast<double>(x[i]);
    return out;
}

Xcsf::SetIndices Xcsf::match_only(const std::vector<int>& x) const {
    std::vector<std::uint8_t> flags;
    match_scan(pop_.size(), [&](std::size_t i) { return match(pop_[i].cond, x); }, flags);
    return indices_of(flags);
}

Xcsf::SetIndices Xcsf::form_match_set(const std::vector<int>& x, std::uint64_t t,
                                      RandomStream& rng) {
    SetIndices match_set = match_only(x);
    while (match_set.empty()) {
        FunctionRule rule;
        rule.id = next_id();
        rule.cond.lower.resize(x.size());
        rule.cond.upper.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            rule.cond.lower[i] = std::max(0, x[i] - rng.range_int(0, params_.cover_width));
            rule.cond.upper[i] =
                std::min(params_.grid_n - 1, x[i] + rng.range_int(0, params_.cover_width));
        }
        rule.weights.assign(x.size() + 1, 0.0);
        rule.fitness = params_.init_fitness;
        rule.ts = t;
        insert(std::move(rule), rng);
        match_set = match_only(x);
    }
    return match_set;
}

void Xcsf::update_set(const SetIndices& match_set, const std::vector<int>& x, double target) {
    if (match_set.empty())
        return;
    const double set_size = static_cast<double>(match_set.size());
    const std::uint64_t mam_limit =
        static_cast<std::uint64_t>(std::ceil(1.0 / params_.beta));

    double norm2 = params_.x0 * params_.x0;
    for (int v : x)
        norm2 += static_cast<double>(v) * static_cast<double>(v);

    std::vector<double> kappa(match_set.size());
    double kappa_total = 0.0;
    for (std::size_t j = 0; j < match_set.size(); ++j) {
        FunctionRule& rule = pop_[match_set[j]];
        const double out = predict(rule, x);
        const double residual = target - out;
        // Normalized delta rule on the augmented input (x0, x1, ..., xd).
        const double step = params_.eta / norm2 * residual;
        rule.weights[0] += step * params_.x0;
        for (std::size_t i = 0; i < x.size(); ++i)
            rule.weights[i + 1] += step * static_cast<double>(x[i]);
        rule.eps += params_.beta * (std::abs(residual) - rule.eps);
        kappa[j] = (rule.eps < params_.eps0)
                       ? 1.0
                       : params_.alpha * std::pow(params_.eps0 / rule.eps, params_.nu);
        kappa_total += kappa[j];
    }

    for (std::size_t j = 0; j < match_set.size(); ++j) {
        FunctionRule& rule = pop_[match_set[j]];
        const double rel = kappa[j] / kappa_total;
        if (rule.exp >= mam_limit)
            rule.fitness += params_.beta * (rel - rule.fitness);
        else
            rule.fitness += (rel - rule.fitness) / static_cast<double>(rule.exp + 1);
        rule.exp += 1;
        rule.ms += params_.beta * (set_size - rule.ms);
    }
}

double Xcsf::system_output(const SetIndices& match_set, const std::vector<int>& x) const {
    if (match_set.empty())
        throw SelectionError("system output over an empty match set");
    double weighted = 0.0;
    double fitness_total = 0.0;
    double plain = 0.0;
    for (std::size_t i : match_set) {
        const double h = predict(pop_[i], x);
        weighted += pop_[i].fitness * h;
        fitness_total += pop_[i].fitness;
        plain += h;
    }
    if (fitness_total > 0.0)
        return weighted / fitness_total;
    return plain / static_cast<double>(match_set.size());
}

void Xcsf::run_ga(const SetIndices& match_set, std::uint64_t t, RandomStream& rng) {
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
    const FunctionRule parent_a = pop_[match_set[pa_j]];
    const FunctionRule parent_b = pop_[match_set[pb_j]];

    IntervalConditionLU cond_a = parent_a.cond;
    IntervalConditionLU cond_b = parent_b.cond;
    const std::size_t d = cond_a.dims();
    if (d >= 2 && rng.bernoulli(params_.chi)) {
        const std::size_t cut = 1 + rng.index(d - 1);
        for (std::size_t i = cut; i < d; ++i) {
            std::swap(cond_a.lower[i], cond_b.lower[i]);
            std::swap(cond_a.upper[i], cond_b.upper[i]);
        }
    }
    auto offset = [&]() {
        const int magnitude = rng.range_int(0, params_.mutation_range);
        return rng.bernoulli(0.5) ? magnitude : -magnitude;
    };
    for (auto* cond : {&cond_a, &cond_b}) {
        for (std::size_t i = 0; i < d; ++i) {
            if (rng.bernoulli(params_.mu))
                cond->lower[i] += offset();
            if (rng.bernoulli(params_.mu))
                cond->upper[i] += offset();
            if (cond->lower[i] > cond->upper[i])
                std::swap(cond->lower[i], cond->upper[i]);
            cond->lower[i] = std::clamp(cond->lower[i], 0, params_.grid_n - 1);
            cond->upper[i] = std::clamp(cond->upper[i], 0, params_.grid_n - 1);
        }
    }

    const double mean_eps = 0.5 * (parent_a.eps + parent_b.eps);
    const double mean_fit = 0.5 * (parent_a.fitness + parent_b.fitness);
    const double mean_ms = 0.5 * (parent_a.ms + parent_b.ms);
    for (auto* cond : {&cond_a, &cond_b}) {
        FunctionRule child;
        child.id = next_id();
        child.cond = *cond;
        child.weights = (cond == &cond_a) ? parent_a.weights : parent_b.weights;
        child.eps = mean_eps;
        child.fitness = params_.offspring_fitness_discount * mean_fit;
        child.exp = 0;
        child.ms = mean_ms;
        child.ts = t;
        insert(std::move(child), rng);
    }
}

void Xcsf::insert(FunctionRule rule, RandomStream& rng) {
    pop_.push_back(std::move(rule));
    while (pop_.size() > params_.population_size)
        delete_one(rng);
}

void Xcsf::delete_one(RandomStream& rng) {
    std::vector<double> votes(pop_.size());
    for (std::size_t i = 0; i < pop_.size(); ++i)
        votes[i] = pop_[i].ms;
    const std::size_t victim = roulette(votes, rng);
    pop_.erase(pop_.begin() + static_cast<std::ptrdiff_t>(victim));
}

} // namespace lcs
