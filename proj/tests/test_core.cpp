#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>

#include "lcs/core.hpp"
#include "lcs/errors.hpp"
#include "lcs/rng.hpp"

using namespace lcs;

namespace {

BitInput bits(const std::string& text) {
    BitInput out;
    for (char c : text)
        out.push_back(c == '1' ? 1 : 0);
    return out;
}

TernaryCondition cond(const std::string& text) { return condition_from_string(text); }

} // namespace

TEST_CASE("matches follows wildcard semantics") {
    CHECK(matches(cond("1#1"), bits("111")));
    CHECK(matches(cond("1#1"), bits("101")));
    CHECK_FALSE(matches(cond("1#1"), bits("110")));
    CHECK_THROWS_AS(matches(cond("1#1"), bits("11")), ConfigError);
}

TEST_CASE("specificity is the defined fraction") {
    CHECK(specificity(cond("###")) == 0.0);
    CHECK(specificity(cond("101")) == 1.0);
    CHECK(specificity(cond("1#1")) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(specificity(TernaryCondition{}), ConfigError);
}

TEST_CASE("specificity never increases when a symbol is wildcarded") {
    RandomStream rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        TernaryCondition c;
        c.symbols.resize(12);
        for (auto& s : c.symbols)
            s = static_cast<Tri>(rng.index(3));
        const double base = specificity(c);
        for (std::size_t i = 0; i < c.size(); ++i) {
            TernaryCondition widened = c;
            widened.symbols[i] = Tri::Wild;
            CHECK(specificity(widened) <= base + 1e-12);
        }
    }
}

TEST_CASE("cover_condition extremes and matching property") {
    RandomStream rng(11);
    const BitInput input = bits("10110");

    auto covered = cover_condition(input, 0.0, rng);
    CHECK(condition_to_string(covered) == "10110");

    covered = cover_condition(input, 1.0, rng);
    CHECK(condition_to_string(covered) == "#####");

    // Covered conditions always match the input that triggered them.
    for (int trial = 0; trial < 10000; ++trial) {
        BitInput x(20);
        for (auto& b : x)
            b = static_cast<std::uint8_t>(rng.index(2));
        CHECK(matches(cover_condition(x, 0.33, rng), x));
    }
}

TEST_CASE("one_point_crossover exchanges prefix and suffix") {
    // The cut draw is the first value the operator takes from the stream, so
    // a twin stream tells us which cut was used.
    for (std::uint64_t seed = 1; seed <= 16; ++seed) {
        RandomStream rng(seed);
        RandomStream twin(seed);
        const auto [c1, c2] = one_point_crossover(cond("000"), cond("111"), rng);
        const std::size_t cut = 1 + twin.index(2);
        if (cut == 1) {
            CHECK(condition_to_string(c1) == "011");
            CHECK(condition_to_string(c2) == "100");
        } else {
            CHECK(condition_to_string(c1) == "001");
            CHECK(condition_to_string(c2) == "110");
        }
    }
}

TEST_CASE("crossover of identical parents returns identical offspring") {
    RandomStream rng(5);
    const auto [c1, c2] = one_point_crossover(cond("01#10"), cond("01#10"), rng);
    CHECK(condition_to_string(c1) == "01#10");
    CHECK(condition_to_string(c2) == "01#10");
}

TEST_CASE("crossover below length two returns parents unchanged") {
    RandomStream rng(5);
    const auto [c1, c2] = one_point_crossover(cond("0"), cond("1"), rng);
    CHECK(condition_to_string(c1) == "0");
    CHECK(condition_to_string(c2) == "1");
}

TEST_CASE("crossover conserves positionwise symbols across the pair") {
    RandomStream rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        TernaryCondition a;
        TernaryCondition b;
        a.symbols.resize(10);
        b.symbols.resize(10);
        for (std::size_t i = 0; i < 10; ++i) {
            a.symbols[i] = static_cast<Tri>(rng.index(3));
            b.symbols[i] = static_cast<Tri>(rng.index(3));
        }
        const auto [c1, c2] = one_point_crossover(a, b, rng);
        for (std::size_t i = 0; i < 10; ++i) {
            std::array<int, 3> before{};
            std::array<int, 3> after{};
            before[static_cast<int>(a.symbols[i])] += 1;
            before[static_cast<int>(b.symbols[i])] += 1;
            after[static_cast<int>(c1.symbols[i])] += 1;
            after[static_cast<int>(c2.symbols[i])] += 1;
            CHECK(before == after);
        }
    }
}

TEST_CASE("mutate_ternary rates and allele choice") {
    RandomStream rng(23);
    const TernaryCondition base = cond("0101#10#11");

    CHECK(mutate_ternary(base, 0.0, rng) == base);

    // A forced mutation of "0" lands on "1" or "#" with equal probability.
    std::map<std::string, int> counts;
    for (int trial = 0; trial < 20000; ++trial)
        counts[condition_to_string(mutate_ternary(cond("0"), 1.0, rng))] += 1;
    CHECK(counts.size() == 2);
    CHECK(counts["1"] == doctest::Approx(10000).epsilon(0.05));
    CHECK(counts["#"] == doctest::Approx(10000).epsilon(0.05));

    // Empirical per-position flip rate at mu = 0.04.
    int flips = 0;
    int positions = 0;
    TernaryCondition wide;
    wide.symbols.assign(100, Tri::Zero);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto mutated = mutate_ternary(wide, 0.04, rng);
        for (std::size_t i = 0; i < mutated.size(); ++i) {
            positions += 1;
            if (mutated.symbols[i] != Tri::Zero)
                flips += 1;
        }
    }
    const double rate = static_cast<double>(flips) / positions;
    CHECK(rate == doctest::Approx(0.04).epsilon(0.125)); // 0.04 +- 0.005
}

TEST_CASE("niche mutation toggles toward the current input") {
    RandomStream rng(29);
    const BitInput input = bits("1010");
    const auto mutated = mutate_ternary_niche(cond("####"), 1.0, input, rng);
    CHECK(condition_to_string(mutated) == "1010");
    const auto widened = mutate_ternary_niche(cond("1010"), 1.0, input, rng);
    CHECK(condition_to_string(widened) == "####");
    CHECK(matches(mutate_ternary_niche(cond("10##"), 1.0, input, rng), input));
}

TEST_CASE("roulette proportionality and errors") {
    RandomStream rng(31);
    const std::array<double, 2> zero_then_five{0.0, 5.0};
    for (int trial = 0; trial < 100; ++trial)
        CHECK(roulette(zero_then_five, rng) == 1);

    const std::array<double, 2> one_three{1.0, 3.0};
    int second = 0;
    const int draws = 100000;
    for (int trial = 0; trial < draws; ++trial)
        second += roulette(one_three, rng) == 1 ? 1 : 0;
    CHECK(static_cast<double>(second) / draws == doctest::Approx(0.75).epsilon(0.0267));

    CHECK_THROWS_AS(roulette(std::array<double, 2>{0.0, 0.0}, rng), SelectionError);
    CHECK_THROWS_AS(roulette(std::span<const double>{}, rng), SelectionError);
}

TEST_CASE("roulette under a fixed seed is reproducible") {
    const std::array<double, 3> equal{1.0, 1.0, 1.0};
    RandomStream a(42);
    RandomStream b(42);
    std::vector<std::size_t> seq_a;
    std::vector<std::size_t> seq_b;
    for (int i = 0; i < 64; ++i) {
        seq_a.push_back(roulette(equal, a));
        seq_b.push_back(roulette(equal, b));
    }
    CHECK(seq_a == seq_b);
    // Recorded once under seed 42; pinned thereafter.
    const std::vector<std::size_t> head(seq_a.begin(), seq_a.begin() + 8);
    CHECK(head == std::vector<std::size_t>{2, 1, 2, 0, 2, 0, 1, 1});
}

TEST_CASE("generality order implies match containment") {
    RandomStream rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        TernaryCondition specific;
        specific.symbols.resize(8);
        for (auto& s : specific.symbols)
            s = static_cast<Tri>(rng.index(3));
        TernaryCondition general = specific;
        for (auto& s : general.symbols)
            if (rng.bernoulli(0.3))
                s = Tri::Wild;
        REQUIRE(is_generalization_of(general, specific));
        for (int probe = 0; probe < 50; ++probe) {
            BitInput x(8);
            for (auto& b : x)
                b = static_cast<std::uint8_t>(rng.index(2));
            if (matches(specific, x))
                CHECK(matches(general, x));
        }
    }
}

TEST_CASE("equal seeds give equal draw sequences") {
    RandomStream a(123456789);
    RandomStream b(123456789);
    for (int i = 0; i < 1000000; ++i)
        REQUIRE(a.next_u64() == b.next_u64());
}
