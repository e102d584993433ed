#pragma once

#include <utility>
#include <vector>

#include "cuecorr/partitions.hpp"
#include "cuecorr/statistic.hpp"

namespace cuecorr {

// Controls for the deterministic quadratures behind the asymptotic
// functionals. rel_tol == 0 selects the per-arity default: 1e-6 for
// one-variable test functions, 1e-4 for two-variable ones.
struct QuadratureOptions {
    double rel_tol = 0.0;
    long long max_evals = 10'000'000;
};

// Integer parametrization of the zero-sum subspace L_pi attached to a
// partition and window structure: coordinates are reconstructed from the
// free ones by an integral linear map (the constraint systems are totally
// unimodular). Free coordinates never include a window's trailing closure
// coordinate, so they are bounded wherever the test-function transform is.
struct SubspaceParametrization {
    int ambient_dim = 0;
    int rank = 0;
    std::vector<int> free_indices;                        // ascending
    std::vector<std::vector<long long>> reconstruction;   // ambient_dim rows

    int dim() const { return static_cast<int>(free_indices.size()); }

    // Fills t (size ambient_dim) from values of the free coordinates.
    void reconstruct(std::span<const double> free_values, std::span<double> t) const;
};

SubspaceParametrization parametrize_subspace(const SetPartition& pi, const WindowStructure& w);

// Limit M(f) of E S_N(f) / N: a sum over ordered compositions of n+1 with
// multinomial weights, each contributing an integral of the symmetrized
// transform against rescaled-cumulant factors over the composition's
// zero-sum subspace. arity <= 3.
double mean_asymptotic(const TestFunction& f, const QuadratureOptions& opts = {});

// Limit sigma^2(f) of Var S_N(f) / N: a sum over connecting partitions of
// two windows, each contributing an integral of hat_f x hat_f against
// rescaled-cumulant factors over the partition's subspace. arity <= 2.
double variance_asymptotic(const TestFunction& f, const QuadratureOptions& opts = {});

// Per-partition breakdown of variance_asymptotic (same total); used by the
// CLI report and by structure tests.
std::vector<std::pair<SetPartition, double>> variance_asymptotic_terms(
    const TestFunction& f, const QuadratureOptions& opts = {});

// Per-composition breakdown of mean_asymptotic: (composition of n+1, term).
std::vector<std::pair<std::vector<int>, double>> mean_asymptotic_terms(
    const TestFunction& f, const QuadratureOptions& opts = {});

// One-variable variance limit via the explicit three-integral formula
// (quadratic branch, straddling-pair branch, wrap-around branch); fully
// independent of the partition machinery. Requires arity == 1.
double variance_closed_form_pairs(const TestFunction& f, const QuadratureOptions& opts = {});

}  // namespace cuecorr
