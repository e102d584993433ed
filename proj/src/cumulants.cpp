#include "cuecorr/cumulants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "cuecorr/rational.hpp"

namespace cuecorr {

namespace {

// Points are accepted as lying on the zero-sum hyperplane within this
// absolute slack; lattice points k/N and reconstructed subspace coordinates
// land within a few ulps of it.
constexpr double kHyperplaneTol = 1e-12;

constexpr std::array<long long, 8> kFactorial = {1, 1, 2, 6, 24, 120, 720, 5040};

void check_order(std::size_t p, const char* who) {
    if (p < 1) throw argument_error(std::string(who) + ": empty tuple");
    if (p > static_cast<std::size_t>(kMaxCumulantOrder))
        throw capacity_error(std::string(who) + ": order " + std::to_string(p) +
                             " exceeds limit " + std::to_string(kMaxCumulantOrder));
}

void check_parts(std::span<const int> parts, std::size_t p, const char* who) {
    if (parts.empty()) throw argument_error(std::string(who) + ": empty composition");
    long long sum = 0;
    for (int q : parts) {
        if (q < 1) throw argument_error(std::string(who) + ": composition parts must be >= 1");
        sum += q;
    }
    if (sum != static_cast<long long>(p))
        throw argument_error(std::string(who) + ": composition does not sum to tuple length");
}

// Signed weight of a breakpoint subset: the composition with breaks after
// the positions set in mask has m parts of sizes (gaps); its weight in the
// cumulant expansion is (-1)^m / (m * prod(part!)).
Rational mask_weight(int mask, int p) {
    int m = 1, last = 0;
    long long part_factorials = 1;
    for (int i = 0; i < p - 1; ++i) {
        if (mask & (1 << i)) {
            ++m;
            part_factorials *= kFactorial[i + 1 - last];
            last = i + 1;
        }
    }
    part_factorials *= kFactorial[p - last];
    const long long sign = (m % 2 == 0) ? 1 : -1;
    return Rational(sign) / Rational(static_cast<long long>(m) * part_factorials);
}

long long kappa_exact_core(long long N, const std::vector<long long>& sorted_k) {
    const int p = static_cast<int>(sorted_k.size());

    // Each distinct arrangement stands for prod(multiplicity!) identical
    // permutations in the full symmetrization.
    long long mult_factor = 1;
    for (int i = 0, j = 0; i < p; i = j) {
        while (j < p && sorted_k[j] == sorted_k[i]) ++j;
        mult_factor *= kFactorial[j - i];
    }

    const int nmask = 1 << (p - 1);
    std::vector<long long> total(nmask, 0);
    std::vector<long long> arr = sorted_k;
    std::vector<long long> prefix(p - 1);
    do {
        long long run = 0;
        for (int i = 0; i + 1 < p; ++i) {
            run += arr[i];
            prefix[i] = run;
        }
        for (int mask = 1; mask < nmask; ++mask) {
            long long mx = 0, mn = 0;  // max(0, S_i) and max(0, -S_i) over set bits
            for (int i = 0; i + 1 < p; ++i) {
                if (mask & (1 << i)) {
                    if (prefix[i] > mx) mx = prefix[i];
                    if (-prefix[i] > mn) mn = -prefix[i];
                }
            }
            total[mask] += std::min(N, mx + mn);
        }
        // mask == 0 is the one-part composition; its capped value is 0.
    } while (std::next_permutation(arr.begin(), arr.end()));

    Rational acc(0);
    for (int mask = 1; mask < nmask; ++mask) {
        if (total[mask] == 0) continue;
        acc += mask_weight(mask, p) * Rational(total[mask]);
    }
    acc *= Rational(mult_factor);
    if (!acc.is_integer())
        throw consistency_error("kappa_exact: composition sum did not reduce to an integer (" +
                                acc.str() + ")");
    return acc.as_integer();
}

}  // namespace

double j_value(std::span<const int> parts, std::span<const double> t) {
    check_parts(parts, t.size(), "j_value");
    if (parts.size() == 1) return 0.0;
    double run = 0.0, mx = 0.0, mn = 0.0;
    std::size_t idx = 0;
    for (std::size_t b = 0; b + 1 < parts.size(); ++b) {
        for (int i = 0; i < parts[b]; ++i) run += t[idx++];
        mx = std::max(mx, run);
        mn = std::max(mn, -run);
    }
    return std::min(1.0, mx + mn);
}

long long J_N_value(long long N, std::span<const int> parts, std::span<const long long> k) {
    if (N < 1) throw argument_error("J_N_value: N must be >= 1");
    check_parts(parts, k.size(), "J_N_value");
    if (std::accumulate(k.begin(), k.end(), 0LL) != 0)
        throw argument_error("J_N_value: frequency tuple must sum to zero");
    if (parts.size() == 1) return 0;
    long long run = 0, mx = 0, mn = 0;
    std::size_t idx = 0;
    for (std::size_t b = 0; b + 1 < parts.size(); ++b) {
        for (int i = 0; i < parts[b]; ++i) run += k[idx++];
        mx = std::max(mx, run);
        mn = std::max(mn, -run);
    }
    return std::min(N, mx + mn);
}

long long kappa_exact(long long N, std::span<const long long> k) {
    if (N < 1) throw argument_error("kappa_exact: N must be >= 1");
    check_order(k.size(), "kappa_exact");
    const int p = static_cast<int>(k.size());

    if (p == 1) return k[0] == 0 ? N : 0;

    long long sum = 0;
    bool has_zero = false;
    for (long long v : k) {
        sum += v;
        has_zero = has_zero || (v == 0);
    }
    if (sum != 0 || has_zero) return 0;

    // Invariant under permutation and global negation; canonicalize to the
    // lexicographically smaller of the two sorted representatives.
    std::vector<long long> a(k.begin(), k.end());
    std::sort(a.begin(), a.end());
    std::vector<long long> b(a.size());
    std::transform(a.begin(), a.end(), b.rbegin(), [](long long v) { return -v; });
    std::vector<long long>& key = (b < a) ? b : a;

    thread_local std::map<std::pair<long long, std::vector<long long>>, long long> memo;
    const auto mk = std::make_pair(N, key);
    if (auto it = memo.find(mk); it != memo.end()) return it->second;
    const long long val = kappa_exact_core(N, key);
    memo.emplace(mk, val);
    return val;
}

std::optional<long long> kappa_closed_form(long long N, std::span<const long long> k) {
    if (N < 1) throw argument_error("kappa_closed_form: N must be >= 1");
    const int p = static_cast<int>(k.size());
    if (p < 1 || p > 4)
        throw argument_error("kappa_closed_form: closed forms exist for orders 1 to 4 only");

    if (p == 1) return k[0] == 0 ? N : 0;

    long long sum = 0;
    bool has_zero = false;
    for (long long v : k) {
        sum += v;
        has_zero = has_zero || (v == 0);
    }
    if (sum != 0 || has_zero) return 0;

    if (p == 2) return std::min(N, std::llabs(k[0]));

    if (p == 3) {
        // Two of the frequencies share a sign; the third is minus their sum
        // and has the largest magnitude. min |k| is the smaller same-sign one.
        long long big = 0, small = std::llabs(k[0]);
        for (long long v : k) {
            big = std::max(big, std::llabs(v));
            small = std::min(small, std::llabs(v));
        }
        return std::min({std::max(0LL, big - N), small, N});
    }

    std::array<long long, 4> s{k[0], k[1], k[2], k[3]};
    std::sort(s.begin(), s.end());
    if (s[0] != -s[3] || s[1] != -s[2]) return std::nullopt;  // not two cancelling pairs
    const long long a = s[3], b2 = s[2];
    if (a == b2) return std::min(0LL, std::max(-N, N - 2 * a));
    if (a >= N && a - b2 <= N - 1) return a - b2 - N;
    if (a <= N - 1 && a + b2 >= N + 1) return N - a - b2;
    return 0;
}

double c_rescaled_series(std::span<const double> t) {
    check_order(t.size(), "c_rescaled_series");
    const int p = static_cast<int>(t.size());
    if (p == 1) return std::abs(t[0]) <= kHyperplaneTol ? 1.0 : 0.0;
    double sum = 0.0;
    for (double v : t) sum += v;
    if (std::abs(sum) > kHyperplaneTol)
        throw argument_error("c_rescaled_series: point is off the zero-sum hyperplane");

    const int nmask = 1 << (p - 1);
    std::vector<double> weight(nmask, 0.0);
    for (int mask = 1; mask < nmask; ++mask) weight[mask] = mask_weight(mask, p).as_double();

    std::vector<int> idx(p);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> prefix(p - 1);
    double acc = 0.0;
    do {
        double run = 0.0;
        for (int i = 0; i + 1 < p; ++i) {
            run += t[idx[i]];
            prefix[i] = run;
        }
        for (int mask = 1; mask < nmask; ++mask) {
            double mx = 0.0, mn = 0.0;
            for (int i = 0; i + 1 < p; ++i) {
                if (mask & (1 << i)) {
                    mx = std::max(mx, prefix[i]);
                    mn = std::max(mn, -prefix[i]);
                }
            }
            acc += weight[mask] * std::min(1.0, mx + mn);
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
    return acc;
}

double c_rescaled(std::span<const double> t) {
    check_order(t.size(), "c_rescaled");
    const int p = static_cast<int>(t.size());
    if (p == 1) return std::abs(t[0]) <= kHyperplaneTol ? 1.0 : 0.0;

    double sum = 0.0;
    for (double v : t) sum += v;
    if (std::abs(sum) > kHyperplaneTol)
        throw argument_error("c_rescaled: point is off the zero-sum hyperplane");

    if (p == 2) return std::min(1.0, 0.5 * (std::abs(t[0]) + std::abs(t[1])));

    if (p == 3) {
        double big = 0.0, small = std::abs(t[0]);
        for (double v : t) {
            big = std::max(big, std::abs(v));
            small = std::min(small, std::abs(v));
        }
        return std::min({std::max(0.0, big - 1.0), small, 1.0});
    }

    if (p == 4) {
        std::array<double, 4> s{t[0], t[1], t[2], t[3]};
        std::sort(s.begin(), s.end());
        if (std::abs(s[0] + s[3]) <= kHyperplaneTol && std::abs(s[1] + s[2]) <= kHyperplaneTol) {
            const double a = 0.5 * (s[3] - s[0]);
            const double b = 0.5 * (s[2] - s[1]);
            if (a - b <= kHyperplaneTol) return std::clamp(1.0 - (a + b), -1.0, 0.0);
            if (a >= 1.0 && a - b <= 1.0) return a - b - 1.0;
            if (a <= 1.0 && a + b >= 1.0) return 1.0 - (a + b);
            return 0.0;
        }
    }

    return c_rescaled_series(t);
}

}  // namespace cuecorr
