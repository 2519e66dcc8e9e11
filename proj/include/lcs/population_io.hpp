#pragma once

#include <string>

#include "lcs/ucs.hpp"
#include "lcs/xcs.hpp"
#include "lcs/xcsc.hpp"
#include "lcs/xcsf.hpp"
#include "lcs/zcs.hpp"

namespace lcs {

// Line-oriented population files. Header "LCSPOP v1 <engine> <dims>", then
// one rule per line: condition rendering, action (or "-" for actionless
// engines), and named parameters as key=value. Doubles are printed with 17
// significant digits so load(save(P)) reproduces P exactly.

void save_population(const std::vector<StrengthRule>& pop, std::size_t dims,
                     const std::string& path);
void save_population(const std::vector<AccuracyRule>& pop, std::size_t dims,
                     const std::string& path);
void save_population(const std::vector<SupervisedRule>& pop, std::size_t dims,
                     const std::string& path);
void save_population(const std::vector<ClusterRule>& pop, std::size_t dims,
                     const std::string& path);
void save_population(const std::vector<FunctionRule>& pop, std::size_t dims,
                     const std::string& path);

// Engine tag in the header must equal the requested engine; version or
// format violations raise LoadError with the offending line number.
std::vector<StrengthRule> load_zcs_population(const std::string& path, std::size_t& dims);
std::vector<AccuracyRule> load_xcs_population(const std::string& path, std::size_t& dims);
std::vector<SupervisedRule> load_ucs_population(const std::string& path, std::size_t& dims);
std::vector<ClusterRule> load_xcsc_population(const std::string& path, std::size_t& dims);
std::vector<FunctionRule> load_xcsf_population(const std::string& path, std::size_t& dims);

struct PopulationSummary {
    std::string engine;
    std::size_t dims = 0;
    std::size_t rule_count = 0;
    double mean_specificity = 0.0; // interval engines: 1 - mean normalized width
};

// Reads any engine's file (used by the CLI inspect subcommand).
PopulationSummary inspect_population(const std::string& path);

} // namespace lcs
