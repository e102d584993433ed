#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "cuecorr/errors.hpp"

namespace cuecorr {

// A test function f: R^arity -> R entering the smoothed correlation
// statistic, described primarily by its Fourier transform
//   hat_f(xi) = (2*pi)^(-arity/2) * Integral f(x) e^(-i xi.x) dx.
struct TestFunction {
    int arity = 1;

    std::function<double(std::span<const double>)> hat_f;

    // |hat_f| <= tail_epsilon outside [-support_radius, support_radius]^arity;
    // frequency sums are truncated to that box.
    double support_radius = 0.0;
    double tail_epsilon = 1e-12;

    // Optional real-space evaluator of the scale-N kernel: the exact
    // 2*pi*N-periodization of f (which is what the truncated frequency sum
    // represents), as a function of (x, N). Null when only hat_f is known.
    std::function<double(std::span<const double>, long long)> direct_f;

    // |direct_f| <= tail_epsilon outside [-direct_radius, direct_radius]^arity;
    // infinity means the kernel has no usable real-space decay and direct
    // evaluation must visit every tuple.
    double direct_radius = std::numeric_limits<double>::infinity();
};

// Gaussian family f(x) = prod_i exp(-x_i^2 / (2 sigma^2)), with transform
// hat_f(xi) = prod_i sigma * exp(-sigma^2 xi_i^2 / 2). Radii are derived
// from tail_epsilon.
TestFunction make_gaussian_test_function(int arity, double sigma, double tail_epsilon = 1e-12);

// Triangle family: hat_f(xi) = prod_i max(0, 1 - |xi_i|/a), an exactly
// compactly supported transform; the real-space kernel is a product of
// Fejer-type kernels with no integrable decay (direct_radius = infinity).
TestFunction make_triangle_test_function(int arity, double a, double tail_epsilon = 1e-12);

struct EigenangleSample {
    std::vector<double> angles;  // each in [0, 2*pi)

    long long size() const { return static_cast<long long>(angles.size()); }
};

// Power traces T_s = sum_m e^(i s theta_m) for |s| <= s_max, stored densely.
struct TraceVector {
    long long N = 0;
    int s_max = 0;
    std::vector<std::complex<double>> values;  // index s + s_max

    const std::complex<double>& at(long long s) const;
};

// Signed circular difference of x, y in [0, 2*pi): the representative of
// x - y in [-pi, pi). Arguments outside [0, 2*pi) raise argument_error.
double circular_difference(double x, double y);

TraceVector power_traces(const EigenangleSample& sample, int s_max);

// Direct evaluation of S_N(f) = sum over all (arity+1)-tuples of indices
// (repetitions included) of f evaluated at the N-rescaled circular gaps to
// the tuple's first angle. Uses the real-space evaluator; when the kernel
// decays (finite direct_radius) only tuples inside the window are visited.
// Requires direct_f (unsupported_error otherwise).
double statistic_direct(const TestFunction& f, const EigenangleSample& sample);

// Same sum with no windowing, every tuple visited. Kept separate so the
// window logic can be tested against it.
double statistic_direct_naive(const TestFunction& f, const EigenangleSample& sample);

// Frequency-side evaluation:
//   S_N(f) = (2*pi)^(-n/2) N^(-n) sum_k hat_f(k/N) prod_j T_{k_j},
// summed over k in Z^n with |k_i| <= floor(support_radius * N), the closing
// frequency being -sum(k). Requires traces.s_max >= n * ceil(support_radius
// * N) (argument_error) and a real result: an imaginary residue above
// 1e-9 * (1 + |result|) raises tolerance_error.
double statistic_fourier(const TestFunction& f, const TraceVector& traces);

// Exact ensemble expectation E S_N(f) at finite N, by summing the frequency
// lattice against exact rescaled cumulants over all partitions of the n+1
// tuple positions. arity <= 3.
double mean_exact(long long N, const TestFunction& f);

// Exact ensemble variance Var S_N(f) at finite N: same lattice machinery
// over connecting partitions of two windows. arity <= 2.
double variance_exact(long long N, const TestFunction& f);

}  // namespace cuecorr
