#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cuecorr/errors.hpp"

namespace cuecorr {

// Largest ground set we enumerate partitions of (Bell(12) = 4,213,597).
inline constexpr int kMaxPartitionGround = 12;

// Partition of {0, ..., ground_size - 1} into disjoint non-empty blocks.
// Canonical layout: elements inside each block ascending, blocks ordered by
// their smallest element. Enumeration functions always produce this layout.
struct SetPartition {
    int ground_size = 0;
    std::vector<std::vector<int>> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }
    bool operator==(const SetPartition& o) const {
        return ground_size == o.ground_size && blocks == o.blocks;
    }
};

// m consecutive index windows of width l tiling {0, ..., m*l - 1}:
// window w covers [w*l, (w+1)*l).
struct WindowStructure {
    int m = 0;
    int l = 0;

    int ground_size() const { return m * l; }
    int window_of(int element) const { return element / l; }
};

// Partition of the window labels {0, ..., m-1} induced by a set partition:
// two windows are merged whenever some block meets both (transitively).
struct EquivalenceClasses {
    std::vector<std::vector<int>> classes;  // same canonical layout as blocks

    int class_count() const { return static_cast<int>(classes.size()); }
};

// A connecting partition is "optimal" when every window equivalence class
// has exactly two windows; such partitions carry the leading-order variance
// terms, everything else is lower order.
enum class PartitionClass { Optimal, SubOptimal };

// Calls visit for every partition of {0..M-1}, in restricted-growth-string
// order. The SetPartition passed to the visitor is reused between calls;
// copy it if it must outlive the visit.
void for_each_set_partition(int M, const std::function<void(const SetPartition&)>& visit);

std::vector<SetPartition> enumerate_set_partitions(int M);

// True when neither window of w (in fact: no window) is expressible as a
// union of blocks of pi. Partitions failing this drop out of centered
// (covariance-type) moment expansions.
bool is_connecting(const SetPartition& pi, const WindowStructure& w);

// All connecting partitions of the m*l ground set, RGS order. m*l <= 12.
std::vector<SetPartition> enumerate_connecting_partitions(int m, int l);

// Partitions carrying non-zero coefficient in the expansion of
// E[prod_w (P_w - E P_w)] over products of block cumulants. The surviving
// set is exactly the connecting partitions, with unit coefficient.
std::vector<SetPartition> centered_product_expansion(int m, int l);

EquivalenceClasses equivalence_classes(const SetPartition& pi, const WindowStructure& w);

// Requires a connecting partition (argument_error otherwise).
PartitionClass classify_partition(const SetPartition& pi, const WindowStructure& w);

// Dimension of the solution space of the linear system on R^(m*l) that
// constrains every window sum and every block sum to zero; computed by
// exact integer row reduction.
int dim_L_pi(const SetPartition& pi, const WindowStructure& w);

// E[prod_j T_j] for frequency tuple k, assembled from a cumulant oracle:
// sum over all set partitions of the index positions of the product of
// per-block joint cumulants, each block evaluated on its subtuple of k.
// k.size() <= 12.
double moments_from_cumulants(
    long long N, std::span<const long long> k,
    const std::function<double(long long, std::span<const long long>)>& kappa_oracle);

}  // namespace cuecorr
