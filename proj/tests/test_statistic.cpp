#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cuecorr/cumulants.hpp"
#include "cuecorr/sampler.hpp"
#include "cuecorr/statistic.hpp"

using namespace cuecorr;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

EigenangleSample fixed_sample(long long N, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    return sample_cue_eigenangles(N, rng);
}

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

}  // namespace

TEST_CASE("circular difference takes the representative in [-pi, pi)") {
    CHECK(circular_difference(0.0, std::numbers::pi) == doctest::Approx(-std::numbers::pi));
    CHECK(circular_difference(std::numbers::pi, 0.0) == doctest::Approx(-std::numbers::pi));
    CHECK(circular_difference(0.1, 6.2) == doctest::Approx(0.1 - 6.2 + kTwoPi));
    CHECK(circular_difference(1.0, 0.25) == doctest::Approx(0.75));
    CHECK_THROWS_AS(circular_difference(-0.1, 0.0), argument_error);
    CHECK_THROWS_AS(circular_difference(0.0, kTwoPi), argument_error);
}

TEST_CASE("power traces: conjugate symmetry and the trivial frequency") {
    const EigenangleSample sample = fixed_sample(6, 17);
    const TraceVector traces = power_traces(sample, 9);
    CHECK(traces.at(0) == std::complex<double>(6.0, 0.0));
    for (long long s = 1; s <= 9; ++s) {
        CHECK(traces.at(-s).real() == doctest::Approx(traces.at(s).real()).epsilon(1e-14));
        CHECK(traces.at(-s).imag() == doctest::Approx(-traces.at(s).imag()).epsilon(1e-14));
    }
    CHECK_THROWS_AS((void)traces.at(10), argument_error);
}

TEST_CASE("triangle kernel closed form equals its cosine expansion") {
    auto cosine_sum = [](double x, long long N, double a) {
        const double K = a * static_cast<double>(N);
        double sum = 1.0;
        for (long long k = 1; k <= static_cast<long long>(std::floor(K)); ++k)
            sum += 2.0 * (1.0 - static_cast<double>(k) / K) *
                   std::cos(static_cast<double>(k) * x / static_cast<double>(N));
        return kInvSqrt2Pi * sum / static_cast<double>(N);
    };

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(-20.0, 20.0);
    for (double a : {0.5, 0.37}) {  // integer and non-integer a*N
        const TestFunction f = make_triangle_test_function(1, a);
        for (int i = 0; i < 100; ++i) {
            const double x = xs(rng);
            const double got = f.direct_f(std::vector<double>{x}, 8);
            CHECK(got == doctest::Approx(cosine_sum(x, 8, a)).epsilon(1e-11));
        }
        // Removable singularity at the origin.
        const double at_zero = f.direct_f(std::vector<double>{0.0}, 8);
        CHECK(at_zero == doctest::Approx(cosine_sum(0.0, 8, a)).epsilon(1e-11));
    }
}

TEST_CASE("gaussian kernel is the plain product up to periodization dust") {
    const TestFunction f = make_gaussian_test_function(2, 1.3);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> xs(-6.0, 6.0);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x = {xs(rng), xs(rng)};
        const double expected =
            std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * 1.3 * 1.3));
        CHECK(f.direct_f(x, 8) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("frequency and real-space paths agree on sampled spectra") {
    for (int arity : {1, 2}) {
        const EigenangleSample sample = fixed_sample(8, 99 + arity);
        for (const TestFunction& f :
             {make_triangle_test_function(arity, 0.5), make_gaussian_test_function(arity, 1.0)}) {
            const auto s_max = static_cast<int>(
                arity * std::ceil(f.support_radius * static_cast<double>(sample.size())));
            const TraceVector traces = power_traces(sample, s_max);
            const double fourier = statistic_fourier(f, traces);
            const double direct = statistic_direct(f, sample);
            CHECK(relative_gap(fourier, direct) <= 1e-7);
        }
    }
}

TEST_CASE("window pruning reproduces the naive tuple sum") {
    const EigenangleSample sample = fixed_sample(16, 31);
    for (int arity : {1, 2}) {
        const TestFunction f = make_gaussian_test_function(arity, 1.0);
        const double windowed = statistic_direct(f, sample);
        const double naive = statistic_direct_naive(f, sample);
        const double slack = 1e-10 * std::abs(naive) +
                             std::pow(16.0, arity + 1) * f.tail_epsilon;
        CHECK(std::abs(windowed - naive) <= slack);
    }
}

TEST_CASE("real-space path requires a kernel evaluator") {
    TestFunction f = make_triangle_test_function(1, 0.5);
    f.direct_f = nullptr;
    const EigenangleSample sample = fixed_sample(4, 7);
    CHECK_THROWS_AS((void)statistic_direct(f, sample), unsupported_error);
}

TEST_CASE("frequency path validates the trace range") {
    const TestFunction f = make_triangle_test_function(1, 0.5);
    const EigenangleSample sample = fixed_sample(8, 12);
    const TraceVector traces = power_traces(sample, 2);  // needs ceil(0.5 * 8) = 4
    CHECK_THROWS_AS((void)statistic_fourier(f, traces), argument_error);
}

TEST_CASE("the statistic is invariant under a global rotation of the spectrum") {
    const EigenangleSample sample = fixed_sample(8, 55);
    EigenangleSample rotated = sample;
    for (double& a : rotated.angles) {
        a += 1.234;
        if (a >= kTwoPi) a -= kTwoPi;
    }
    const TestFunction f = make_triangle_test_function(2, 0.5);
    const TraceVector t1 = power_traces(sample, 8);
    const TraceVector t2 = power_traces(rotated, 8);
    CHECK(relative_gap(statistic_fourier(f, t1), statistic_fourier(f, t2)) <= 1e-10);
}

TEST_CASE("a one-point spectrum makes the statistic deterministic") {
    // With N = 1 every trace product collapses, so the frequency path must
    // equal the ensemble mean no matter the angle.
    for (double angle : {0.0, 0.4, 3.9}) {
        EigenangleSample sample;
        sample.angles = {angle};
        for (const TestFunction& f :
             {make_triangle_test_function(1, 0.5), make_gaussian_test_function(1, 1.0),
              make_triangle_test_function(2, 0.8)}) {
            const auto s_max = static_cast<int>(
                f.arity * std::ceil(f.support_radius));
            const TraceVector traces = power_traces(sample, std::max(1, s_max));
            CHECK(relative_gap(statistic_fourier(f, traces), mean_exact(1, f)) <= 1e-9);
        }
    }
}

TEST_CASE("exact mean against direct quadrature moments at small N") {
    // Assembles E S_N from raw joint trace moments on the frequency lattice,
    // with no cumulant or partition machinery involved.
    const double a = 0.9;

    SUBCASE("one variable, N = 3") {
        const TestFunction f = make_triangle_test_function(1, a);
        const long long N = 3;
        const long long cutoff = static_cast<long long>(std::floor(a * N));
        double expected = 0.0;
        for (long long k = -cutoff; k <= cutoff; ++k) {
            const double hat = f.hat_f(std::vector<double>{static_cast<double>(k) / N});
            expected += hat * brute_force_joint_moment(N, std::vector<long long>{k, -k});
        }
        expected *= kInvSqrt2Pi / static_cast<double>(N);
        CHECK(relative_gap(mean_exact(N, f), expected) <= 1e-9);
    }

    SUBCASE("two variables, N = 2") {
        const TestFunction f = make_triangle_test_function(2, a);
        const long long N = 2;
        const long long cutoff = static_cast<long long>(std::floor(a * N));
        double expected = 0.0;
        for (long long k1 = -cutoff; k1 <= cutoff; ++k1)
            for (long long k2 = -cutoff; k2 <= cutoff; ++k2) {
                const double hat = f.hat_f(std::vector<double>{
                    static_cast<double>(k1) / N, static_cast<double>(k2) / N});
                if (hat == 0.0) continue;
                expected += hat * brute_force_joint_moment(
                                      N, std::vector<long long>{k1, k2, -k1 - k2});
            }
        expected *= kInvSqrt2Pi * kInvSqrt2Pi / static_cast<double>(N * N);
        CHECK(relative_gap(mean_exact(N, f), expected) <= 1e-9);
    }
}

TEST_CASE("exact variance against direct quadrature moments at small N") {
    const double a = 0.9;
    const TestFunction f = make_triangle_test_function(1, a);

    SUBCASE("N = 2 via the single trace magnitude") {
        // Only |T_1|^2 fluctuates: Var S = hat(1/2)^2 (E|T_1|^4 - (E|T_1|^2)^2) / (2 pi).
        const double hat_half = f.hat_f(std::vector<double>{0.5});
        const double m2 = brute_force_joint_moment(2, std::vector<long long>{1, -1});
        const double m4 = brute_force_joint_moment(2, std::vector<long long>{1, 1, -1, -1});
        const double expected = hat_half * hat_half * (m4 - m2 * m2) / kTwoPi;
        CHECK(relative_gap(variance_exact(2, f), expected) <= 1e-9);
    }

    SUBCASE("N = 3 via the full covariance lattice") {
        const long long N = 3;
        const long long cutoff = static_cast<long long>(std::floor(a * N));
        double expected = 0.0;
        for (long long k = -cutoff; k <= cutoff; ++k)
            for (long long q = -cutoff; q <= cutoff; ++q) {
                const double hk = f.hat_f(std::vector<double>{static_cast<double>(k) / N});
                const double hq = f.hat_f(std::vector<double>{static_cast<double>(q) / N});
                if (hk == 0.0 || hq == 0.0) continue;
                const double joint =
                    brute_force_joint_moment(N, std::vector<long long>{k, -k, q, -q});
                const double mk = brute_force_joint_moment(N, std::vector<long long>{k, -k});
                const double mq = brute_force_joint_moment(N, std::vector<long long>{q, -q});
                expected += hk * hq * (joint - mk * mq);
            }
        expected /= kTwoPi * static_cast<double>(N * N);
        CHECK(relative_gap(variance_exact(N, f), expected) <= 1e-9);
    }
}

TEST_CASE("a vanishing transform produces a vanishing variance") {
    TestFunction f = make_triangle_test_function(1, 0.5);
    f.hat_f = [](std::span<const double>) { return 0.0; };
    CHECK(variance_exact(8, f) == 0.0);
}

TEST_CASE("a one-point spectrum has zero variance") {
    for (const TestFunction& f :
         {make_triangle_test_function(1, 0.5), make_gaussian_test_function(1, 1.0)}) {
        CHECK(std::abs(variance_exact(1, f)) <= 1e-10);
    }
}
