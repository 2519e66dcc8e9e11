#pragma once

#include <cstdint>
#include <vector>

#include "lcs/rng.hpp"

namespace lcs {

// Lower-upper integer interval condition on the task grid.
struct IntervalConditionLU {
    std::vector<int> lower;
    std::vector<int> upper; // l_i <= u_i, both within [0, n-1]

    std::size_t dims() const { return lower.size(); }
};

// Piecewise-linear local model: h(x) = w0*x0 + w1*x1 + ... + wd*xd, with x0
// a constant augmentation input.
struct FunctionRule {
    std::uint64_t id = 0;
    IntervalConditionLU cond;
    std::vector<double> weights; // size d+1, intercept first
    double eps = 0.0;
    double fitness = 0.0;
    std::uint64_t exp = 0;
    double ms = 1.0;
    std::uint64_t ts = 0;
};

struct XcsfParams {
    std::size_t population_size = 500; // N
    double beta = 0.2;
    double alpha = 0.1;
    double eps0 = 0.01;
    double nu = 5.0;
    double eta = 0.2; // weight-update learning rate
    double x0 = 1.0;  // augmentation constant
    int cover_width = 100;    // m: covering half-width draw bound
    int mutation_range = 50;  // r: bound offset draw range
    double theta_ga = 25.0;
    double chi = 0.8;
    double mu = 0.04;
    std::size_t dims = 1;
    int grid_n = 1000; // domain [0, grid_n - 1] per dimension
    double init_fitness = 0.01;
    double offspring_fitness_discount = 0.1;

    void validate() const;
};

// XCSF: integer interval matching, per-rule linear models trained by the
// normalized delta rule, accuracy fitness over [M] (a single implicit
// action), triggered niche GA.
class Xcsf {
public:
    using SetIndices = std::vector<std::size_t>;

    explicit Xcsf(XcsfParams params);

    static bool match(const IntervalConditionLU& cond, const std::vector<int>& x);

    double predict(const FunctionRule& rule, const std::vector<int>& x) const;

    SetIndices match_only(const std::vector<int>& x) const;
    // Covering: l_i = max(0, x_i - U{0..m}), u_i = min(n-1, x_i + U{0..m}),
    // weights zero.
    SetIndices form_match_set(const std::vector<int>& x, std::uint64_t t, RandomStream& rng);

    // Normalized delta rule on the augmented input, error toward the
    // pre-update residual, then the accuracy/fitness steps over [M].
    void update_set(const SetIndices& match_set, const std::vector<int>& x, double target);

    // Fitness-weighted blend of member predictions.
    double system_output(const SetIndices& match_set, const std::vector<int>& x) const;

    void run_ga(const SetIndices& match_set, std::uint64_t t, RandomStream& rng);

    const std::vector<FunctionRule>& population() const { return pop_; }
    std::vector<FunctionRule>& population() { return pop_; }
    const XcsfParams& params() const { return params_; }

    void insert(FunctionRule rule, RandomStream& rng);
    std::uint64_t next_id() { return next_id_++; }

private:
    void delete_one(RandomStream& rng);

    XcsfParams params_;
    std::vector<FunctionRule> pop_;
    std::uint64_t next_id_ = 1;
};

} // namespace lcs
