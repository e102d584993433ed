#include "cuecorr/statistic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cuecorr/asymptotics.hpp"
#include "cuecorr/cumulants.hpp"
#include "cuecorr/partitions.hpp"

namespace cuecorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // (2*pi)^(-1/2)

// Cumulative lattice-point budget for the exact mean/variance sums.
constexpr double kLatticeBudget = 2e8;

void check_angles(const EigenangleSample& sample, const char* who) {
    if (sample.size() < 1) throw argument_error(std::string(who) + ": empty sample");
    for (double th : sample.angles)
        if (!(th >= 0.0 && th < kTwoPi))
            throw argument_error(std::string(who) + ": angle outside [0, 2*pi)");
}

void check_test_function(const TestFunction& f, const char* who, int max_arity = 0) {
    if (f.arity < 1) throw argument_error(std::string(who) + ": arity must be >= 1");
    if (max_arity > 0 && f.arity > max_arity)
        throw argument_error(std::string(who) + ": arity " + std::to_string(f.arity) +
                             " exceeds supported maximum " + std::to_string(max_arity));
    if (!f.hat_f) throw argument_error(std::string(who) + ": test function has no transform");
    if (!(f.support_radius > 0.0))
        throw argument_error(std::string(who) + ": support_radius must be positive");
}

long long frequency_cutoff(const TestFunction& f, long long N) {
    return static_cast<long long>(std::floor(f.support_radius * static_cast<double>(N) + 1e-9));
}

// Per-coordinate factor of the scale-N triangle kernel: the 2*pi*N-
// periodization of (2*pi)^(-1/2) a sinc^2(a x / 2). For an integral
// frequency cutoff a*N this is the classical closed form
//   (2*pi)^(-1/2) (N K)^(-1) (sin(K x / (2N)) / sin(x / (2N)))^2,  K = a*N;
// otherwise (or next to the sine's zeros) the finite cosine sum is used.
double triangle_kernel_factor(double x, long long N, double a) {
    const double Nd = static_cast<double>(N);
    const double K = a * Nd;
    const double Kr = std::round(K);
    if (std::abs(K - Kr) <= 1e-9 * std::max(1.0, K)) {
        const double y = 0.5 * x / Nd;
        const double s = std::sin(y);
        if (std::abs(s) > 1e-8) {
            const double r = std::sin(Kr * y) / s;
            return kInvSqrt2Pi * r * r / (Nd * Kr);
        }
    }
    const long long kcap = static_cast<long long>(std::floor(K + 1e-9));
    double acc = 1.0;
    for (long long k = 1; k <= kcap; ++k)
        acc += 2.0 * (1.0 - static_cast<double>(k) / K) *
               std::cos(static_cast<double>(k) * x / Nd);
    return kInvSqrt2Pi * acc / Nd;
}

// Sum of f.direct_f over all (arity+1)-tuples drawn from the index list
// cand, rescaled gaps precomputed against each anchor. Shared by the naive
// and windowed paths; iteration is in ascending candidate order.
double tuple_sum(const TestFunction& f, const EigenangleSample& sample,
                 const std::vector<long long>& anchors,
                 const std::function<void(long long, std::vector<long long>&)>& candidates_of) {
    const int n = f.arity;
    const long long N = sample.size();
    const double Nd = static_cast<double>(N);

    std::vector<long long> cand;
    std::vector<double> gap;  // gap[i] pairs with cand[i]
    std::vector<double> x(n);
    double total = 0.0;

    std::function<double(int)> rec = [&](int dim) -> double {
        if (dim == n) return f.direct_f(x, N);
        double s = 0.0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            x[dim] = gap[i];
            s += rec(dim + 1);
        }
        return s;
    };

    for (long long j1 : anchors) {
        cand.clear();
        candidates_of(j1, cand);
        gap.resize(cand.size());
        for (std::size_t i = 0; i < cand.size(); ++i)
            gap[i] = Nd * circular_difference(sample.angles[cand[i]], sample.angles[j1]);
        total += rec(0);
    }
    return total;
}

}  // namespace

double circular_difference(double x, double y) {
    if (!(x >= 0.0 && x < kTwoPi) || !(y >= 0.0 && y < kTwoPi))
        throw argument_error("circular_difference: arguments must lie in [0, 2*pi)");
    double d = x - y;
    if (d < -std::numbers::pi) d += kTwoPi;
    else if (d >= std::numbers::pi) d -= kTwoPi;
    return d;
}

const std::complex<double>& TraceVector::at(long long s) const {
    if (s < -s_max || s > s_max)
        throw argument_error("TraceVector::at: |s| exceeds s_max = " + std::to_string(s_max));
    return values[static_cast<std::size_t>(s + s_max)];
}

TraceVector power_traces(const EigenangleSample& sample, int s_max) {
    check_angles(sample, "power_traces");
    if (s_max < 0) throw argument_error("power_traces: s_max must be >= 0");

    TraceVector tv;
    tv.N = sample.size();
    tv.s_max = s_max;
    tv.values.assign(2 * static_cast<std::size_t>(s_max) + 1, {0.0, 0.0});
    tv.values[s_max] = {static_cast<double>(tv.N), 0.0};

    for (double th : sample.angles) {
        const std::complex<double> z = std::polar(1.0, th);
        std::complex<double> w = 1.0;
        for (int s = 1; s <= s_max; ++s) {
            w *= z;
            tv.values[s_max + s] += w;
        }
    }
    for (int s = 1; s <= s_max; ++s) tv.values[s_max - s] = std::conj(tv.values[s_max + s]);
    return tv;
}

TestFunction make_gaussian_test_function(int arity, double sigma, double tail_epsilon) {
    if (arity < 1) throw argument_error("make_gaussian_test_function: arity must be >= 1");
    if (!(sigma > 0.0)) throw argument_error("make_gaussian_test_function: sigma must be > 0");
    if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0))
        throw argument_error("make_gaussian_test_function: tail_epsilon must be in (0, 1)");

    TestFunction f;
    f.arity = arity;
    f.tail_epsilon = tail_epsilon;
    // Per-coordinate transform peaks at sigma, the kernel at 1; both radii
    // push the respective factor below tail_epsilon.
    f.support_radius =
        std::sqrt(2.0 * std::log(std::max(sigma, 1.0) / tail_epsilon)) / sigma;
    f.direct_radius = sigma * std::sqrt(2.0 * std::log(1.0 / tail_epsilon));
    f.hat_f = [arity, sigma](std::span<const double> xi) {
        double v = 1.0;
        for (int i = 0; i < arity; ++i) v *= sigma * std::exp(-0.5 * sigma * sigma * xi[i] * xi[i]);
        return v;
    };
    // The scale-N periodization of a unit Gaussian differs from the Gaussian
    // itself by less than exp(-(pi*N)^2 / (2 sigma^2)) on the fundamental
    // domain — far below tail_epsilon for every N where sampling is feasible.
    f.direct_f = [arity, sigma](std::span<const double> x, long long) {
        double v = 1.0;
        for (int i = 0; i < arity; ++i) v *= std::exp(-0.5 * x[i] * x[i] / (sigma * sigma));
        return v;
    };
    return f;
}

TestFunction make_triangle_test_function(int arity, double a, double tail_epsilon) {
    if (arity < 1) throw argument_error("make_triangle_test_function: arity must be >= 1");
    if (!(a > 0.0)) throw argument_error("make_triangle_test_function: a must be > 0");
    if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0))
        throw argument_error("make_triangle_test_function: tail_epsilon must be in (0, 1)");

    TestFunction f;
    f.arity = arity;
    f.tail_epsilon = tail_epsilon;
    f.support_radius = a;  // transform vanishes identically beyond a
    f.direct_radius = std::numeric_limits<double>::infinity();  // 1/x^2 tails never negligible
    f.hat_f = [arity, a](std::span<const double> xi) {
        double v = 1.0;
        for (int i = 0; i < arity; ++i) v *= std::max(0.0, 1.0 - std::abs(xi[i]) / a);
        return v;
    };
    f.direct_f = [arity, a](std::span<const double> x, long long N) {
        double v = 1.0;
        for (int i = 0; i < arity; ++i) v *= triangle_kernel_factor(x[i], N, a);
        return v;
    };
    return f;
}

double statistic_direct_naive(const TestFunction& f, const EigenangleSample& sample) {
    check_test_function(f, "statistic_direct_naive");
    if (!f.direct_f)
        throw unsupported_error("statistic_direct_naive: test function has no real-space evaluator");
    check_angles(sample, "statistic_direct_naive");

    const long long N = sample.size();
    std::vector<long long> anchors(N);
    std::iota(anchors.begin(), anchors.end(), 0LL);
    return tuple_sum(f, sample, anchors, [N](long long, std::vector<long long>& cand) {
        cand.resize(N);
        std::iota(cand.begin(), cand.end(), 0LL);
    });
}

double statistic_direct(const TestFunction& f, const EigenangleSample& sample) {
    check_test_function(f, "statistic_direct");
    if (!f.direct_f)
        throw unsupported_error("statistic_direct: test function has no real-space evaluator");
    check_angles(sample, "statistic_direct");

    const long long N = sample.size();
    const double delta = f.direct_radius / static_cast<double>(N);  // angular half-width
    if (!(delta < std::numbers::pi)) return statistic_direct_naive(f, sample);

    // Angle-sorted view for windowed candidate lookup.
    std::vector<long long> order(N);
    std::iota(order.begin(), order.end(), 0LL);
    std::sort(order.begin(), order.end(), [&](long long i, long long j) {
        return sample.angles[i] < sample.angles[j];
    });
    std::vector<double> sorted_angles(N);
    for (long long i = 0; i < N; ++i) sorted_angles[i] = sample.angles[order[i]];

    auto push_range = [&](double lo, double hi, std::vector<long long>& cand) {
        auto first = std::lower_bound(sorted_angles.begin(), sorted_angles.end(), lo);
        auto last = std::upper_bound(sorted_angles.begin(), sorted_angles.end(), hi);
        for (auto it = first; it != last; ++it)
            cand.push_back(order[it - sorted_angles.begin()]);
    };

    std::vector<long long> anchors(N);
    std::iota(anchors.begin(), anchors.end(), 0LL);
    return tuple_sum(f, sample, anchors, [&](long long j1, std::vector<long long>& cand) {
        const double lo = sample.angles[j1] - delta;
        const double hi = sample.angles[j1] + delta;
        if (lo < 0.0) {
            push_range(0.0, hi, cand);
            push_range(lo + kTwoPi, kTwoPi, cand);
        } else if (hi >= kTwoPi) {
            push_range(0.0, hi - kTwoPi, cand);
            push_range(lo, kTwoPi, cand);
        } else {
            push_range(lo, hi, cand);
        }
        std::sort(cand.begin(), cand.end());
    });
}

double statistic_fourier(const TestFunction& f, const TraceVector& traces) {
    check_test_function(f, "statistic_fourier");
    const int n = f.arity;
    const long long N = traces.N;
    if (N < 1) throw argument_error("statistic_fourier: empty trace vector");

    const long long kmax = frequency_cutoff(f, N);
    const long long required = static_cast<long long>(n) *
        static_cast<long long>(std::ceil(f.support_radius * static_cast<double>(N) - 1e-9));
    if (traces.s_max < required)
        throw argument_error("statistic_fourier: traces.s_max = " + std::to_string(traces.s_max) +
                             " but the frequency box needs " + std::to_string(required));

    std::complex<double> acc = 0.0;
    std::vector<double> xi(n);
    std::function<void(int, std::complex<double>, long long)> rec =
        [&](int dim, std::complex<double> prod, long long sum) {
            if (dim == n) {
                acc += prod * traces.at(-sum) * f.hat_f(xi);
                return;
            }
            for (long long k = -kmax; k <= kmax; ++k) {
                xi[dim] = static_cast<double>(k) / static_cast<double>(N);
                rec(dim + 1, prod * traces.at(k), sum + k);
            }
        };
    rec(0, 1.0, 0);

    const double scale =
        std::pow(kTwoPi, -0.5 * n) * std::pow(static_cast<double>(N), -static_cast<double>(n));
    const double real = acc.real() * scale;
    const double imag = acc.imag() * scale;
    if (std::abs(imag) > 1e-9 * (1.0 + std::abs(real)))
        throw tolerance_error("statistic_fourier: imaginary residue " + std::to_string(imag) +
                              " exceeds bound; trace vector is inconsistent");
    return real;
}

namespace {

// Shared engine of the exact mean (one window) and variance (two connecting
// windows): for each admissible partition of the m*(arity+1) tuple
// positions, sum transform values against rescaled-cumulant factors over
// the integer points of the partition's zero-sum subspace, then weight by
// the appropriate power of N.
double lattice_partition_sum(long long N, const TestFunction& f, int m) {
    const int n = f.arity;
    const int l = n + 1;
    const WindowStructure w{m, l};
    const long long kmax = frequency_cutoff(f, N);
    const double Nd = static_cast<double>(N);

    double total = 0.0;
    double budget_used = 0.0;
    std::vector<double> xi(n), tb;
    std::vector<long long> kfull(w.ground_size());

    for_each_set_partition(w.ground_size(), [&](const SetPartition& pi) {
        if (m == 2 && !is_connecting(pi, w)) return;
        const SubspaceParametrization P = parametrize_subspace(pi, w);
        const int d = P.dim();

        budget_used += std::pow(2.0 * static_cast<double>(kmax) + 1.0, d);
        if (budget_used > kLatticeBudget)
            throw capacity_error("exact moment sum: frequency lattice exceeds budget (cutoff " +
                                 std::to_string(kmax) + ", dimension " + std::to_string(d) + ")");

        double term = 0.0;
        std::vector<long long> u(d, 0);
        std::function<void(int)> walk = [&](int level) {
            if (level < d) {
                for (long long v = -kmax; v <= kmax; ++v) {
                    u[level] = v;
                    walk(level + 1);
                }
                return;
            }
            for (int c = 0; c < w.ground_size(); ++c) {
                long long val = 0;
                for (int j = 0; j < d; ++j) val += P.reconstruction[c][j] * u[j];
                kfull[c] = val;
            }
            double hats = 1.0;
            for (int win = 0; win < m && hats != 0.0; ++win) {
                for (int i = 0; i < n; ++i) {
                    const long long kc = kfull[win * l + i];
                    if (kc < -kmax || kc > kmax) {
                        hats = 0.0;  // transform negligible outside the box
                        break;
                    }
                    xi[i] = static_cast<double>(kc) / Nd;
                }
                if (hats != 0.0) hats *= f.hat_f(xi);
            }
            if (hats == 0.0) return;
            double prod = hats;
            for (const auto& b : pi.blocks) {
                tb.clear();
                for (int e : b) tb.push_back(static_cast<double>(kfull[e]) / Nd);
                prod *= c_rescaled(tb);
                if (prod == 0.0) return;
            }
            term += prod;
        };
        walk(0);
        total += std::pow(Nd, pi.block_count() - m * n) * term;
    });

    return std::pow(kTwoPi, -0.5 * m * n) * total;
}

}  // namespace

double mean_exact(long long N, const TestFunction& f) {
    if (N < 1) throw argument_error("mean_exact: N must be >= 1");
    check_test_function(f, "mean_exact", 3);
    return lattice_partition_sum(N, f, 1);
}

double variance_exact(long long N, const TestFunction& f) {
    if (N < 1) throw argument_error("variance_exact: N must be >= 1");
    check_test_function(f, "variance_exact", 2);
    return lattice_partition_sum(N, f, 2);
}

}  // namespace cuecorr
