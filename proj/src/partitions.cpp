#include "cuecorr/partitions.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "cuecorr/linear.hpp"

namespace cuecorr {

namespace {

void check_ground(int M, const char* who) {
    if (M < 1) throw argument_error(std::string(who) + ": ground size must be >= 1");
    if (M > kMaxPartitionGround)
        throw capacity_error(std::string(who) + ": ground size " + std::to_string(M) +
                             " exceeds limit " + std::to_string(kMaxPartitionGround));
}

void check_window_match(const SetPartition& pi, const WindowStructure& w, const char* who) {
    if (w.m < 1 || w.l < 1)
        throw argument_error(std::string(who) + ": window structure must have m, l >= 1");
    if (pi.ground_size != w.ground_size())
        throw argument_error(std::string(who) + ": partition ground size " +
                             std::to_string(pi.ground_size) + " does not match windows (" +
                             std::to_string(w.m) + " x " + std::to_string(w.l) + ")");
}

std::vector<std::uint32_t> block_masks(const SetPartition& pi) {
    std::vector<std::uint32_t> masks;
    masks.reserve(pi.blocks.size());
    for (const auto& b : pi.blocks) {
        std::uint32_t m = 0;
        for (int e : b) m |= (1u << e);
        masks.push_back(m);
    }
    return masks;
}

}  // namespace

void for_each_set_partition(int M, const std::function<void(const SetPartition&)>& visit) {
    check_ground(M, "for_each_set_partition");

    // Restricted growth strings: rgs[0] = 0 and rgs[i] <= max(rgs[0..i-1]) + 1.
    // Lexicographic order on the strings; block b collects the positions
    // labelled b, which yields the canonical block layout directly.
    std::vector<int> rgs(M, 0);
    std::vector<int> prefix_max(M, 0);  // max(rgs[0..i])
    SetPartition scratch;
    scratch.ground_size = M;

    for (;;) {
        const int nb = prefix_max[M - 1] + 1;
        scratch.blocks.resize(nb);
        for (auto& b : scratch.blocks) b.clear();
        for (int i = 0; i < M; ++i) scratch.blocks[rgs[i]].push_back(i);
        visit(scratch);

        int i = M - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;  // saturated position
        if (i == 0) break;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (int j = i + 1; j < M; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

std::vector<SetPartition> enumerate_set_partitions(int M) {
    std::vector<SetPartition> out;
    for_each_set_partition(M, [&](const SetPartition& p) { out.push_back(p); });
    return out;
}

bool is_connecting(const SetPartition& pi, const WindowStructure& w) {
    check_window_match(pi, w, "is_connecting");
    const auto masks = block_masks(pi);
    const std::uint32_t all = (w.ground_size() == 32) ? ~0u : ((1u << w.ground_size()) - 1);
    for (int win = 0; win < w.m; ++win) {
        const std::uint32_t wm = (((1u << w.l) - 1) << (win * w.l)) & all;
        bool union_of_blocks = true;
        for (std::uint32_t bm : masks) {
            if ((bm & wm) != 0 && (bm & ~wm) != 0) {  // block crosses the window
                union_of_blocks = false;
                break;
            }
        }
        if (union_of_blocks) return false;
    }
    return true;
}

std::vector<SetPartition> enumerate_connecting_partitions(int m, int l) {
    if (m < 1 || l < 1) throw argument_error("enumerate_connecting_partitions: m, l must be >= 1");
    check_ground(m * l, "enumerate_connecting_partitions");
    WindowStructure w{m, l};
    std::vector<SetPartition> out;
    for_each_set_partition(m * l, [&](const SetPartition& p) {
        if (is_connecting(p, w)) out.push_back(p);
    });
    return out;
}

std::vector<SetPartition> centered_product_expansion(int m, int l) {
    // Expanding E[prod_w (P_w - E P_w)] over products of block cumulants and
    // collecting terms, a partition in which some window is a union of blocks
    // factorizes across that window and its coefficient telescopes to zero;
    // every connecting partition survives with coefficient one.
    return enumerate_connecting_partitions(m, l);
}

EquivalenceClasses equivalence_classes(const SetPartition& pi, const WindowStructure& w) {
    check_window_match(pi, w, "equivalence_classes");

    std::vector<int> parent(w.m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (const auto& b : pi.blocks) {
        const int first = w.window_of(b.front());
        for (int e : b) {
            int a = find(first), c = find(w.window_of(e));
            if (a != c) parent[std::max(a, c)] = std::min(a, c);
        }
    }

    EquivalenceClasses out;
    std::vector<int> root_to_class(w.m, -1);
    for (int win = 0; win < w.m; ++win) {
        int r = find(win);
        if (root_to_class[r] < 0) {
            root_to_class[r] = static_cast<int>(out.classes.size());
            out.classes.emplace_back();
        }
        out.classes[root_to_class[r]].push_back(win);
    }
    return out;
}

PartitionClass classify_partition(const SetPartition& pi, const WindowStructure& w) {
    if (!is_connecting(pi, w))
        throw argument_error("classify_partition: partition is not connecting");
    for (const auto& cls : equivalence_classes(pi, w).classes)
        if (cls.size() != 2) return PartitionClass::SubOptimal;
    return PartitionClass::Optimal;
}

int dim_L_pi(const SetPartition& pi, const WindowStructure& w) {
    check_window_match(pi, w, "dim_L_pi");
    const auto sys = detail::reduce_constraints(detail::window_block_constraints(pi, w),
                                                w.ground_size());
    return sys.cols - sys.rank;
}

double moments_from_cumulants(
    long long N, std::span<const long long> k,
    const std::function<double(long long, std::span<const long long>)>& kappa_oracle) {
    const int p = static_cast<int>(k.size());
    if (p < 1) throw argument_error("moments_from_cumulants: empty frequency tuple");
    check_ground(p, "moments_from_cumulants");

    double total = 0.0;
    std::vector<long long> sub;
    sub.reserve(p);
    for_each_set_partition(p, [&](const SetPartition& pi) {
        double prod = 1.0;
        for (const auto& b : pi.blocks) {
            sub.clear();
            for (int e : b) sub.push_back(k[e]);
            prod *= kappa_oracle(N, sub);
            if (prod == 0.0) break;
        }
        total += prod;
    });
    return total;
}

}  // namespace cuecorr
