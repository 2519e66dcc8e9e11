#pragma once

#include <cstdint>
#include <vector>

#include "lcs/rng.hpp"

namespace lcs {

// Centre-spread interval condition over [0,1]^d. Effective bounds are
// [c_i - s_i, c_i + s_i] truncated to the unit cube at evaluation time.
struct IntervalConditionCS {
    std::vector<double> centre; // c_i in [0,1]
    std::vector<double> spread; // s_i in (0, s0]

    std::size_t dims() const { return centre.size(); }
    double lower(std::size_t i) const;
    double upper(std::size_t i) const;
};

struct ClusterRule {
    std::uint64_t id = 0;
    IntervalConditionCS cond;
    double eps = 0.0;     // running Euclidean matching error
    double fitness = 0.0; // relative-accuracy fitness
    std::uint64_t exp = 0;
    double ms = 1.0; // match-set-size estimate (replaces the action-set analog)
    std::uint64_t ts = 0;
};

struct XcscParams {
    std::size_t population_size = 400; // N
    double beta = 0.2;
    double alpha = 0.1;
    double nu = 5.0;
    double tau = 1.2;      // adaptive threshold factor: eps0 = tau * mean [M] error
    double s0 = 0.2;        // maximum spread (covering and repair bound)
    double mut_span = 0.05; // mutation perturbation half-range
    double theta_ga = 25.0;
    double chi = 0.8;
    double mu = 0.04;
    std::size_t dims = 2;
    double init_fitness = 0.01;
    double offspring_fitness_discount = 0.1;

    void validate() const;
};

// Cluster descriptor reported by extraction: experience-weighted centre,
// per-axis bounding extent, and total supporting experience.
struct ClusterDescriptor {
    std::vector<double> centre;
    std::vector<double> lower;
    std::vector<double> upper;
    std::uint64_t support = 0;
    std::size_t rule_count = 0;
};

// XCSC: interval matching over [0,1]^d, Widrow-Hoff error on the Euclidean
// distance to rule centres, adaptive error threshold, XCS-style relative
// accuracy with the niche GA in [M] (clustering has no actions).
class Xcsc {
public:
    using SetIndices = std::vector<std::size_t>;

    explicit Xcsc(XcscParams params);

    static bool match(const IntervalConditionCS& cond, const std::vector<double>& x);

    SetIndices match_only(const std::vector<double>& x) const;
    // Covers with centre = x and spreads uniform in (0, s0] when [M] is empty.
    SetIndices form_match_set(const std::vector<double>& x, std::uint64_t t, RandomStream& rng);

    // Error toward the Euclidean distance, adaptive eps0 = tau * mean error
    // of [M], then the XCS accuracy/fitness steps over [M].
    void update_set(const SetIndices& match_set, const std::vector<double>& x);

    void run_ga(const SetIndices& match_set, std::uint64_t t, RandomStream& rng);

    // Filter to experienced, below-median-error rules, then greedily merge
    // overlapping truncated hyper-rectangles.
    std::vector<ClusterDescriptor> extract_clusters(std::uint64_t min_exp) const;
    std::vector<ClusterDescriptor> extract_clusters() const { return extract_clusters(20); }

    const std::vector<ClusterRule>& population() const { return pop_; }
    std::vector<ClusterRule>& population() { return pop_; }
    const XcscParams& params() const { return params_; }

    void insert(ClusterRule rule, RandomStream& rng);
    std::uint64_t next_id() { return next_id_++; }

private:
    void delete_one(RandomStream& rng);

    XcscParams params_;
    std::vector<ClusterRule> pop_;
    std::uint64_t next_id_ = 1;
};

} // namespace lcs
