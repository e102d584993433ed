#pragma once

// Self-contained reference implementations used to cross-check the library.
// Everything here is deliberately written by a different route than the
// production code: counting identities, graph arguments, and moment/cumulant
// inversion instead of row reduction and composition sums.

#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "cuecorr/partitions.hpp"

namespace oracles {

// Bell numbers via the Bell triangle.
inline std::vector<long long> bell_numbers(int up_to) {
    std::vector<long long> bell = {1};  // B(0)
    std::vector<long long> row = {1};
    for (int n = 1; n <= up_to; ++n) {
        std::vector<long long> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (long long v : row) next.push_back(next.back() + v);
        bell.push_back(next.front());
        row = std::move(next);
    }
    return bell;
}

inline long long binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    long long v = 1;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

// Number of partitions of m*l elements in which no window is a union of
// blocks, by inclusion-exclusion over the set of windows that are:
// choosing s windows to be self-contained splits them off independently.
inline long long connecting_count(int m, int l) {
    const auto bell = bell_numbers(m * l);
    long long total = 0;
    for (int s = 0; s <= m; ++s) {
        long long term = binomial(m, s) * bell[static_cast<std::size_t>((m - s) * l)];
        for (int i = 0; i < s; ++i) term *= bell[static_cast<std::size_t>(l)];
        total += (s % 2 == 0) ? term : -term;
    }
    return total;
}

// Dimension of the zero-sum solution space by a counting argument: each
// window and each block contributes one linear constraint, and every
// connected component of the incidence graph (windows and blocks as nodes,
// edges where they intersect) yields exactly one dependency among them.
inline int dim_by_components(const cuecorr::SetPartition& pi, const cuecorr::WindowStructure& w) {
    const int nodes = w.m + pi.block_count();
    std::vector<int> parent(nodes);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int b = 0; b < pi.block_count(); ++b)
        for (int e : pi.blocks[static_cast<std::size_t>(b)])
            parent[find(w.window_of(e))] = find(w.m + b);
    int components = 0;
    for (int v = 0; v < nodes; ++v)
        if (find(v) == v) ++components;
    return w.ground_size() - w.m - pi.block_count() + components;
}

// Joint cumulant from joint moments by Moebius inversion over set partitions:
// kappa(S) = sum over partitions of S of (-1)^(b-1) (b-1)! prod_B E[prod_B].
inline double cumulant_from_moments(
    std::span<const long long> k,
    const std::function<double(std::span<const long long>)>& moment) {
    const int p = static_cast<int>(k.size());
    double total = 0.0;
    cuecorr::for_each_set_partition(p, [&](const cuecorr::SetPartition& pi) {
        double prod = 1.0;
        for (const auto& block : pi.blocks) {
            std::vector<long long> sub;
            sub.reserve(block.size());
            for (int e : block) sub.push_back(k[static_cast<std::size_t>(e)]);
            prod *= moment(sub);
        }
        double coeff = 1.0;
        for (int i = 2; i < pi.block_count(); ++i) coeff *= i;
        if (pi.block_count() % 2 == 0) coeff = -coeff;
        total += coeff * prod;
    });
    return total;
}

// Moment of an abstract family whose joint cumulants are prescribed per
// index subset (bitmask over a ground set of size <= 12): the usual sum over
// set partitions of the product of per-block values.
inline double abstract_moment(std::uint32_t subset_mask, std::span<const double> cumulant_of_mask) {
    std::vector<int> elements;
    for (int i = 0; i < 32; ++i)
        if (subset_mask & (1u << i)) elements.push_back(i);
    if (elements.empty()) return 1.0;
    double total = 0.0;
    cuecorr::for_each_set_partition(static_cast<int>(elements.size()),
                                    [&](const cuecorr::SetPartition& pi) {
                                        double prod = 1.0;
                                        for (const auto& block : pi.blocks) {
                                            std::uint32_t mask = 0;
                                            for (int e : block)
                                                mask |= 1u << elements[static_cast<std::size_t>(e)];
                                            prod *= cumulant_of_mask[mask];
                                        }
                                        total += prod;
                                    });
    return total;
}

}  // namespace oracles
