#include "lcs/core.hpp"

#include <algorithm>

namespace lcs {

void GaOperatorParams::validate() const {
    if (chi < 0.0 || chi > 1.0)
        throw ConfigError("chi must be a probability, got " + std::to_string(chi));
    if (mu < 0.0 || mu > 1.0)
        throw ConfigError("mu must be a probability, got " + std::to_string(mu));
    if (p_wild < 0.0 || p_wild > 1.0)
        throw ConfigError("p_wild must be a probability, got " + std::to_string(p_wild));
}

TernaryCondition condition_from_string(const std::string& text) {
    TernaryCondition cond;
    cond.symbols.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '0': cond.symbols.push_back(Tri::Zero); break;
        case '1': cond.symbols.push_back(Tri::One); break;
        case '#': cond.symbols.push_back(Tri::Wild); break;
        default:
            throw ConfigError(std::string("invalid condition symbol '") + c + "'");
        }
    }
    return cond;
}

std::string condition_to_string(const TernaryCondition& cond) {
    std::string out;
    out.reserve(cond.size());
    for (Tri s : cond.symbols)
        out.push_back(s == Tri::Zero ? '0' : s == Tri::One ? '1' : '#');
    return out;
}

bool matches(const TernaryCondition& cond, const BitInput& input) {
    if (cond.size() != input.size())
        throw ConfigError("condition length " + std::to_string(cond.size()) +
                          " does not match input length " + std::to_string(input.size()));
    for (std::size_t i = 0; i < input.size(); ++i) {
        const Tri s = cond.symbols[i];
        if (s != Tri::Wild && static_cast<std::uint8_t>(s) != input[i])
            return false;
    }
    return true;
}

double specificity(const TernaryCondition& cond) {
    if (cond.size() == 0)
        throw ConfigError("specificity of a zero-length condition is undefined");
    const auto defined =
        std::count_if(cond.symbols.begin(), cond.symbols.end(),
                      [](Tri s) { return s != Tri::Wild; });
    return static_cast<double>(defined) / static_cast<double>(cond.size());
}

bool is_generalization_of(const TernaryCondition& general, const TernaryCondition& specific) {
    if (general.size() != specific.size())
        return false;
    for (std::size_t i = 0; i < general.size(); ++i) {
        const Tri g = general.symbols[i];
        if (g != Tri::Wild && g != specific.symbols[i])
            return false;
    }
    return true;
}

TernaryCondition cover_condition(const BitInput& input, double p_wild, RandomStream& rng) {
    TernaryCondition cond;
    cond.symbols.reserve(input.size());
    for (std::uint8_t bit : input)
        cond.symbols.push_back(rng.bernoulli(p_wild) ? Tri::Wild : static_cast<Tri>(bit));
    return cond;
}

std::pair<TernaryCondition, TernaryCondition>
one_point_crossover(const TernaryCondition& a, const TernaryCondition& b, RandomStream& rng) {
    if (a.size() != b.size())
        throw ConfigError("crossover requires equal-length conditions");
    if (a.size() < 2)
        return {a, b};
    const std::size_t cut = 1 + rng.index(a.size() - 1); // in [1, len-1]
    TernaryCondition c1 = a;
    TernaryCondition c2 = b;
    for (std::size_t i = cut; i < a.size(); ++i)
        std::swap(c1.symbols[i], c2.symbols[i]);
    return {std::move(c1), std::move(c2)};
}

TernaryCondition mutate_ternary(const TernaryCondition& cond, double mu, RandomStream& rng) {
    TernaryCondition out = cond;
    for (Tri& s : out.symbols) {
        if (!rng.bernoulli(mu))
            continue;
        // Uniform over the two symbols different from the current one.
        const auto cur = static_cast<std::uint8_t>(s);
        const auto shifted = (cur + 1 + rng.index(2)) % 3;
        s = static_cast<Tri>(shifted);
    }
    return out;
}

TernaryCondition mutate_ternary_niche(const TernaryCondition& cond, double mu,
                                      const BitInput& input, RandomStream& rng) {
    if (cond.size() != input.size())
        throw ConfigError("niche mutation requires input of the condition's length");
    TernaryCondition out = cond;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!rng.bernoulli(mu))
            continue;
        Tri& s = out.symbols[i];
        s = (s == Tri::Wild) ? static_cast<Tri>(input[i]) : Tri::Wild;
    }
    return out;
}

std::size_t roulette(std::span<const double> weights, RandomStream& rng) {
    double total = 0.0;
    for (double w : weights)
        total += w;
    if (weights.empty() || total <= 0.0)
        throw SelectionError("roulette requires at least one positive weight");
    const double target = rng.uniform() * total;
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0)
            continue;
        cum += weights[i];
        last_positive = i;
        if (cum > target)
            return i;
    }
    // Floating-point slack: fall back to the last positive-weight entry.
    return last_positive;
}

} // namespace lcs
