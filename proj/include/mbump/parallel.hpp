#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mbump {

inline constexpr std::size_t kReduceBlock = 4096;

double pairwise_sum(std::span<const double> terms);

/// Sum of term(i), i < count, with a summation order fixed by count alone:
/// serial sums inside blocks of kReduceBlock, blocks combined pairwise.
template <class Term>
double reduce_sum(std::size_t count, Term&& term) {
    const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t end = begin + kReduceBlock < count ? begin + kReduceBlock : count;
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    return pairwise_sum(partial);
}

template <class Body>
void parallel_for(std::size_t count, Body&& body) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) body(static_cast<std::size_t>(i));
}

}  // namespace mbump
