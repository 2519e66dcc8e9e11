#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcs/errors.hpp"
#include "lcs/rng.hpp"

namespace lcs {

// Ternary rule-condition symbol: 0, 1, or the wildcard #.
enum class Tri : std::uint8_t { Zero = 0, One = 1, Wild = 2 };

// Binary environment state, one byte per bit (values 0/1).
using BitInput = std::vector<std::uint8_t>;

// Fixed-length condition over {0,1,#}. # matches either input bit.
struct TernaryCondition {
    std::vector<Tri> symbols;

    bool operator==(const TernaryCondition& other) const = default;
    std::size_t size() const { return symbols.size(); }
};

// Stochastic-operator rates shared by all engines.
struct GaOperatorParams {
    double chi = 0.8;     // crossover probability per GA invocation
    double mu = 0.04;     // per-allele mutation probability
    double p_wild = 0.33; // per-position wildcard probability during covering

    void validate() const;
};

// --- condition construction / rendering ---------------------------------

TernaryCondition condition_from_string(const std::string& text);
std::string condition_to_string(const TernaryCondition& cond);

// --- matching and generality ---------------------------------------------

// True iff every non-# position of cond equals the input bit. Throws
// ConfigError on length mismatch.
bool matches(const TernaryCondition& cond, const BitInput& input);

// Fraction of non-# symbols. Throws ConfigError on an empty condition.
double specificity(const TernaryCondition& cond);

// True iff general has # wherever specific has # (and possibly more), with
// equal defined symbols elsewhere being irrelevant: every input matched by
// `specific` is matched by `general`.
bool is_generalization_of(const TernaryCondition& general, const TernaryCondition& specific);

// --- stochastic operators --------------------------------------------------

// Condition matching `input`: each position becomes # with probability
// p_wild, else copies the input bit.
TernaryCondition cover_condition(const BitInput& input, double p_wild, RandomStream& rng);

// One-point crossover at a cut in [1, len-1]. Conditions shorter than 2
// symbols are returned unchanged. Positionwise symbol multisets are
// preserved across the offspring pair.
std::pair<TernaryCondition, TernaryCondition>
one_point_crossover(const TernaryCondition& a, const TernaryCondition& b, RandomStream& rng);

// Each position mutates with probability mu to one of the other two alphabet
// symbols, chosen uniformly.
TernaryCondition mutate_ternary(const TernaryCondition& cond, double mu, RandomStream& rng);

// Niche variant: a mutated position toggles between # and the current input
// bit, so the result still matches the input that triggered the GA.
TernaryCondition mutate_ternary_niche(const TernaryCondition& cond, double mu,
                                      const BitInput& input, RandomStream& rng);

// Roulette-wheel draw: index i with probability weights[i] / sum(weights).
// Throws SelectionError when the weights are empty or sum to zero.
std::size_t roulette(std::span<const double> weights, RandomStream& rng);

} // namespace lcs
