#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cuecorr/errors.hpp"

namespace cuecorr {

// Joint cumulants of power traces grow in cost like p! * 2^p; order 7 keeps
// the exact evaluator comfortably in the microsecond range.
inline constexpr int kMaxCumulantOrder = 7;

using FrequencyTuple = std::vector<long long>;

// Scale-free building block of the cumulant formulas. parts is an ordered
// composition (p_1, ..., p_m) of p = t.size(); the value is
//   min(1, max(0, S_1, ..., S_{m-1}) + max(0, -S_1, ..., -S_{m-1}))
// where S_i is the prefix sum of t at the i-th composition breakpoint.
// For m = 1 both maxima are empty and the value is 0.
double j_value(std::span<const int> parts, std::span<const double> t);

// Integer counterpart on frequency tuples with sum zero: the same prefix-sum
// expression capped at N instead of 1. Satisfies
// J_N_value(N, parts, k) == N * j_value(parts, k / N) exactly.
long long J_N_value(long long N, std::span<const int> parts, std::span<const long long> k);

// Joint cumulant kappa_p(k_1, ..., k_p) of the power traces T_{N,k_j} over
// the unitary ensemble, evaluated exactly (the composition sum is carried in
// rational arithmetic and the result is asserted integral).
//   p == 1: N for k = (0), else 0.
//   p >= 2: 0 unless sum(k) == 0 and every k_j != 0.
// k.size() <= kMaxCumulantOrder.
long long kappa_exact(long long N, std::span<const long long> k);

// Closed forms for p <= 4. p in {1,2,3} always produce a value; p == 4 has a
// published closed form only for tuples of the shape {a, -a, b, -b} (as
// multisets) and returns nullopt otherwise. p outside [1,4]: argument_error.
std::optional<long long> kappa_closed_form(long long N, std::span<const long long> k);

// N-free rescaled cumulant c_p(t) = kappa_p(t*N)/N for t on the zero-sum
// hyperplane (|sum t| <= 1e-12 required), extended to real arguments:
// piecewise linear, continuous on the hyperplane for p >= 2. Closed forms
// cover p <= 4 (paired shapes); other inputs go through the composition sum.
// t.size() <= kMaxCumulantOrder.
double c_rescaled(std::span<const double> t);

// The raw composition-permutation sum behind c_rescaled, with no closed-form
// shortcuts. Exposed so tests can pit the shortcuts against it.
double c_rescaled_series(std::span<const double> t);

}  // namespace cuecorr
