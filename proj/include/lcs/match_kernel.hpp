#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lcs {

// Population-wide match scan. Evaluating one rule's predicate against the
// current input is independent of every other rule, which makes this the
// data-parallel kernel of every engine cycle. Both variants fill the same
// flag vector; the index list is always rebuilt serially in rule order, so
// results are identical whichever variant ran.

inline constexpr std::size_t kMatchParallelGrain = 4096;

template <typename Pred>
void match_scan_serial(std::size_t n, const Pred& pred, std::vector<std::uint8_t>& flags) {
    flags.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        flags[i] = pred(i) ? 1 : 0;
}

template <typename Pred>
void match_scan_parallel(std::size_t n, const Pred& pred, std::vector<std::uint8_t>& flags) {
    flags.assign(n, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        flags[static_cast<std::size_t>(i)] = pred(static_cast<std::size_t>(i)) ? 1 : 0;
#else
    for (std::size_t i = 0; i < n; ++i)
        flags[i] = pred(i) ? 1 : 0;
#endif
}

// Dispatcher used by the engines: small populations stay on the serial path,
// large ones go parallel. Output is identical either way.
template <typename Pred>
void match_scan(std::size_t n, const Pred& pred, std::vector<std::uint8_t>& flags) {
    if (n >= kMatchParallelGrain)
        match_scan_parallel(n, pred, flags);
    else
        match_scan_serial(n, pred, flags);
}

// Indices of set flags, in rule order.
inline std::vector<std::size_t> indices_of(const std::vector<std::uint8_t>& flags) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i])
            out.push_back(i);
    return out;
}

} // namespace lcs
