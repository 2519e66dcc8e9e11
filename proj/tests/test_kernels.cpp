#include <doctest.h>

#include <vector>

#include "lcs/core.hpp"
#include "lcs/match_kernel.hpp"
#include "lcs/rng.hpp"

using namespace lcs;

TEST_CASE("parallel match scan equals the serial reference") {
    RandomStream rng(41);
    for (const std::size_t n : {0UL, 1UL, 63UL, 400UL, 4096UL, 20000UL}) {
        std::vector<TernaryCondition> conds(n);
        for (auto& c : conds) {
            c.symbols.resize(16);
            for (auto& s : c.symbols)
                s = rng.bernoulli(0.5) ? Tri::Wild : static_cast<Tri>(rng.index(2));
        }
        BitInput input(16);
        for (auto& b : input)
            b = static_cast<std::uint8_t>(rng.index(2));

        auto pred = [&](std::size_t i) { return matches(conds[i], input); };
        std::vector<std::uint8_t> serial_flags;
        std::vector<std::uint8_t> parallel_flags;
        std::vector<std::uint8_t> dispatched_flags;
        match_scan_serial(n, pred, serial_flags);
        match_scan_parallel(n, pred, parallel_flags);
        match_scan(n, pred, dispatched_flags);
        CHECK(serial_flags == parallel_flags);
        CHECK(serial_flags == dispatched_flags);
    }
}

TEST_CASE("indices_of preserves rule order") {
    const std::vector<std::uint8_t> flags{1, 0, 1, 1, 0, 1};
    CHECK(indices_of(flags) == std::vector<std::size_t>{0, 2, 3, 5});
    CHECK(indices_of({}).empty());
}
