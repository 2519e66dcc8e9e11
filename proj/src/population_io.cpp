#include "lcs/population_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "lcs/errors.hpp"

namespace lcs {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw LoadError("cannot write population file '" + path + "'", 0);
    return out;
}

struct Parser {
    std::ifstream in;
    std::string path;
    std::size_t line_no = 0;

    explicit Parser(const std::string& p) : in(p), path(p) {
        if (!in)
            throw LoadError("cannot open population file '" + p + "'", 0);
    }

    bool next_line(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty())
                return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw LoadError(what, line_no); }
};

// Header: "LCSPOP v1 <engine> <dims>".
std::size_t read_header(Parser& p, const std::string& expected_engine, std::string* engine_out) {
    std::string line;
    if (!p.next_line(line))
        throw LoadError("missing population header", 1);
    std::istringstream fields(line);
    std::string magic;
    std::string version;
    std::string engine;
    std::size_t dims = 0;
    if (!(fields >> magic >> version >> engine >> dims) || magic != "LCSPOP")
        p.fail("malformed population header '" + line + "'");
    if (version != "v1")
        p.fail("unsupported population file version '" + version + "'");
    if (!expected_engine.empty() && engine != expected_engine)
        p.fail("population file is for engine '" + engine + "', expected '" + expected_engine +
               "'");
    if (engine_out)
        *engine_out = engine;
    return dims;
}

double parse_double(Parser& p, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
        p.fail("invalid numeric value '" + text + "'");
    return v;
}

std::uint64_t parse_u64(Parser& p, const std::string& text) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size())
        p.fail("invalid integer value '" + text + "'");
    return v;
}

// Splits "key=value" tokens following the condition and action fields.
std::map<std::string, std::string> parse_kv(Parser& p, std::istringstream& fields) {
    std::map<std::string, std::string> kv;
    std::string token;
    while (fields >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
            p.fail("expected key=value, got '" + token + "'");
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return kv;
}

std::string require(Parser& p, std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
        p.fail("missing parameter '" + key + "'");
    return it->second;
}

std::vector<double> parse_double_list(Parser& p, const std::string& text) {
    std::vector<double> out;
    std::istringstream fields(text);
    std::string item;
    while (std::getline(fields, item, ','))
        out.push_back(parse_double(p, item));
    return out;
}

} // namespace

// --- ternary engines ----------------------------------------------------

void save_population(const std::vector<StrengthRule>& pop, std::size_t dims,
                     const std::string& path) {
    auto out = open_out(path);
    out << "LCSPOP v1 zcs " << dims << '\n';
    for (const auto& rule : pop)
        out << condition_to_string(rule.cond) << ' ' << rule.action << " S=" << fmt(rule.strength)
            << '\n';
}

std::vector<StrengthRule> load_zcs_population(const std::string& path, std::size_t& dims) {
    Parser p(path);
    dims = read_header(p, "zcs", nullptr);
    std::vector<StrengthRule> pop;
    std::string line;
    std::uint64_t id = 1;
    while (p.next_line(line)) {
        std::istringstream fields(line);
        std::string cond;
        int action = 0;
        if (!(fields >> cond >> action))
            p.fail("malformed rule line '" + line + "'");
        StrengthRule rule;
        rule.id = id++;
        rule.cond = condition_from_string(cond);
        if (rule.cond.size() != dims)
            p.fail("condition length does not match header dims");
        rule.action = action;
        auto kv = parse_kv(p, fields);
        rule.strength = parse_double(p, require(p, kv, "S"));
        pop.push_back(std::move(rule));
    }
    return pop;
}

void save_population(const std::vector<AccuracyRule>& pop, std::size_t dims,
                     const std::string& path) {
    auto out = open_out(path);
    out << "LCSPOP v1 xcs " << dims << '\n';
    for (const auto& rule : pop)
        out << condition_to_string(rule.cond) << ' ' << rule.action << " p=" << fmt(rule.p)
            << " eps=" << fmt(rule.eps) << " F=" << fmt(rule.fitness) << " exp=" << rule.exp
            << " ts=" << rule.ts << " as=" << fmt(rule.as) << '\n';
}

std::vector<AccuracyRule> load_xcs_population(const std::string& path, std::size_t& dims) {
    Parser p(path);
    dims = read_header(p, "xcs", nullptr);
    std::vector<AccuracyRule> pop;
    std::string line;
    std::uint64_t id = 1;
    while (p.next_line(line)) {
        std::istringstream fields(line);
        std::string cond;
        int action = 0;
        if (!(fields >> cond >> action))
            p.fail("malformed rule line '" + line + "'");
        AccuracyRule rule;
        rule.id = id++;
        rule.cond = condition_from_string(cond);
        if (rule.cond.size() != dims)
            p.fail("condition length does not match header dims");
        rule.action = action;
        auto kv = parse_kv(p, fields);
        rule.p = parse_double(p, require(p, kv, "p"));
        rule.eps = parse_double(p, require(p, kv, "eps"));
        rule.fitness = parse_double(p, require(p, kv, "F"));
        rule.exp = parse_u64(p, require(p, kv, "exp"));
        rule.ts = parse_u64(p, require(p, kv, "ts"));
        rule.as = parse_double(p, require(p, kv, "as"));
        pop.push_back(std::move(rule));
    }
    return pop;
}

void save_population(const std::vector<SupervisedRule>& pop, std::size_t dims,
                     const std::string& path) {
    auto out = open_out(path);
    out << "LCSPOP v1 ucs " << dims << '\n';
    for (const auto& rule : pop)
        out << condition_to_string(rule.cond) << ' ' << rule.action << " correct=" << rule.correct
            << " exp=" << rule.exp << " kappa=" << fmt(rule.kappa) << " F=" << fmt(rule.fitness)
            << " cs=" << fmt(rule.cs) << " ts=" << rule.ts << '\n';
}

std::vector<SupervisedRule> load_ucs_population(const std::string& path, std::size_t& dims) {
    Parser p(path);
    dims = read_header(p, "ucs", nullptr);
    std::vector<SupervisedRule> pop;
    std::string line;
    std::uint64_t id = 1;
    while (p.next_line(line)) {
        std::istringstream fields(line);
        std::string cond;
        int action = 0;
        if (!(fields >> cond >> action))
            p.fail("malformed rule line '" + line + "'");
        SupervisedRule rule;
        rule.id = id++;
        rule.cond = condition_from_string(cond);
        if (rule.cond.size() != dims)
            p.fail("condition length does not match header dims");
        rule.action = action;
        auto kv = parse_kv(p, fields);
        rule.correct = parse_u64(p, require(p, kv, "correct"));
        rule.exp = parse_u64(p, require(p, kv, "exp"));
        rule.kappa = parse_double(p, require(p, kv, "kappa"));
        rule.fitness = parse_double(p, require(p, kv, "F"));
        rule.cs = parse_double(p, require(p, kv, "cs"));
        rule.ts = parse_u64(p, require(p, kv, "ts"));
        pop.push_back(std::move(rule));
    }
    return pop;
}

// --- interval engines -----------------------------------------------------

void save_population(const std::vector<ClusterRule>& pop, std::size_t dims,
                     const std::string& path) {
    auto out = open_out(path);
    out << "LCSPOP v1 xcsc " << dims << '\n';
    for (const auto& rule : pop) {
        for (std::size_t i = 0; i < rule.cond.dims(); ++i)
            out << (i ? ";" : "") << fmt(rule.cond.centre[i]) << ',' << fmt(rule.cond.spread[i]);
        out << " - eps=" << fmt(rule.eps) << " F=" << fmt(rule.fitness) << " exp=" << rule.exp
            << " ms=" << fmt(rule.ms) << " ts=" << rule.ts << '\n';
    }
}

std::vector<ClusterRule> load_xcsc_population(const std::string& path, std::size_t& dims) {
    Parser p(path);
    dims = read_header(p, "xcsc", nullptr);
    std::vector<ClusterRule> pop;
    std::string line;
    std::uint64_t id = 1;
    while (p.next_line(line)) {
        std::istringstream fields(line);
        std::string cond;
        std::string dash;
        if (!(fields >> cond >> dash) || dash != "-")
            p.fail("malformed rule line '" + line + "'");
        ClusterRule rule;
        rule.id = id++;
        std::istringstream pairs(cond);
        std::string pair;
        while (std::getline(pairs, pair, ';')) {
            const auto values = parse_double_list(p, pair);
            if (values.size() != 2)
                p.fail("interval must be centre,spread");
            rule.cond.centre.push_back(values[0]);
            rule.cond.spread.push_back(values[1]);
        }
        if (rule.cond.dims() != dims)
            p.fail("condition dimension does not match header dims");
        auto kv = parse_kv(p, fields);
        rule.eps = parse_double(p, require(p, kv, "eps"));
        rule.fitness = parse_double(p, require(p, kv, "F"));
        rule.exp = parse_u64(p, require(p, kv, "exp"));
        rule.ms = parse_double(p, require(p, kv, "ms"));
        rule.ts = parse_u64(p, require(p, kv, "ts"));
        pop.push_back(std::move(rule));
    }
    return pop;
}

void save_population(const std::vector<FunctionRule>& pop, std::size_t dims,
                     const std::string& path) {
    auto out = open_out(path);
    out << "LCSPOP v1 xcsf " << dims << '\n';
    for (const auto& rule : pop) {
        for (std::size_t i = 0; i < rule.cond.dims(); ++i)
            out << (i ? ";" : "") << rule.cond.lower[i] << ',' << rule.cond.upper[i];
        out << " - w=";
        for (std::size_t i = 0; i < rule.weights.size(); ++i)
            out << (i ? "," : "") << fmt(rule.weights[i]);
        out << " eps=" << fmt(rule.eps) << " F=" << fmt(rule.fitness) << " exp=" << rule.exp
            << " ms=" << fmt(rule.ms) << " ts=" << rule.ts << '\n';
    }
}

std::vector<FunctionRule> load_xcsf_population(const std::string& path, std::size_t& dims) {
    Parser p(path);
    dims = read_header(p, "xcsf", nullptr);
    std::vector<FunctionRule> pop;
    std::string line;
    std::uint64_t id = 1;
    while (p.next_line(line)) {
        std::istringstream fields(line);
        std::string cond;
        std::string dash;
        if (!(fields >> cond >> dash) || dash != "-")
            p.fail("malformed rule line '" + line + "'");
        FunctionRule rule;
        rule.id = id++;
        std::istringstream pairs(cond);
        std::string pair;
        while (std::getline(pairs, pair, ';')) {
            const auto values = parse_double_list(p, pair);
            if (values.size() != 2)
                p.fail("interval must be lower,upper");
            rule.cond.lower.push_back(static_cast<int>(values[0]));
            rule.cond.upper.push_back(static_cast<int>(values[1]));
        }
        if (rule.cond.dims() != dims)
            p.fail("condition dimension does not match header dims");
        auto kv = parse_kv(p, fields);
        rule.weights = parse_double_list(p, require(p, kv, "w"));
        if (rule.weights.size() != dims + 1)
            p.fail("weight vector must have dims+1 entries");
        rule.eps = parse_double(p, require(p, kv, "eps"));
        rule.fitness = parse_double(p, require(p, kv, "F"));
        rule.exp = parse_u64(p, require(p, kv, "exp"));
        rule.ms = parse_double(p, require(p, kv, "ms"));
        rule.ts = parse_u64(p, require(p, kv, "ts"));
        pop.push_back(std::move(rule));
    }
    return pop;
}

// --- inspect ---------------------------------------------------------------

PopulationSummary inspect_population(const std::string& path) {
    std::string engine;
    {
        Parser p(path);
        read_header(p, "", &engine);
    }
    PopulationSummary summary;
    summary.engine = engine;
    if (engine == "zcs" || engine == "xcs" || engine == "ucs") {
        double total = 0.0;
        std::size_t count = 0;
        auto tally = [&](const TernaryCondition& cond) {
            total += specificity(cond);
            ++count;
        };
        if (engine == "zcs") {
            for (const auto& r : load_zcs_population(path, summary.dims))
                tally(r.cond);
        } else if (engine == "xcs") {
            for (const auto& r : load_xcs_population(path, summary.dims))
                tally(r.cond);
        } else {
            for (const auto& r : load_ucs_population(path, summary.dims))
                tally(r.cond);
        }
        summary.rule_count = count;
        summary.mean_specificity = count ? total / static_cast<double>(count) : 0.0;
    } else if (engine == "xcsc") {
        const auto pop = load_xcsc_population(path, summary.dims);
        summary.rule_count = pop.size();
        double total = 0.0;
        for (const auto& r : pop) {
            double width = 0.0;
            for (std::size_t i = 0; i < r.cond.dims(); ++i)
                width += r.cond.upper(i) - r.cond.lower(i);
            total += 1.0 - width / static_cast<double>(r.cond.dims());
        }
        summary.mean_specificity = pop.empty() ? 0.0 : total / static_cast<double>(pop.size());
    } else if (engine == "xcsf") {
        const auto pop = load_xcsf_population(path, summary.dims);
        summary.rule_count = pop.size();
        // The grid size is not stored, so normalize widths by the observed
        // extent per dimension.
        std::vector<int> extent(summary.dims, 1);
        for (const auto& r : pop)
            for (std::size_t i = 0; i < r.cond.dims(); ++i)
                extent[i] = std::max(extent[i], r.cond.upper[i] + 1);
        double total = 0.0;
        for (const auto& r : pop) {
            double width = 0.0;
            for (std::size_t i = 0; i < r.cond.dims(); ++i)
                width += static_cast<double>(r.cond.upper[i] - r.cond.lower[i] + 1) /
                         static_cast<double>(extent[i]);
            total += 1.0 - width / static_cast<double>(r.cond.dims());
        }
        summary.mean_specificity = pop.empty() ? 0.0 : total / static_cast<double>(pop.size());
    } else {
        throw LoadError("unknown engine '" + engine + "' in population header", 1);
    }
    return summary;
}

} // namespace lcs
