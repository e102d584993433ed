#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cuecorr/cumulants.hpp"
#include "cuecorr/sampler.hpp"
#include "test_oracles.hpp"

using namespace cuecorr;

TEST_CASE("prefix-sum building block on pinned examples") {
    const std::vector<int> two_singletons = {1, 1};

    std::vector<double> t = {0.4, -0.4};
    CHECK(j_value(two_singletons, t) == doctest::Approx(0.4));
    t = {0.8, -0.8};
    CHECK(j_value(two_singletons, t) == doctest::Approx(0.8));
    t = {1.7, -1.7};  // capped at 1
    CHECK(j_value(two_singletons, t) == doctest::Approx(1.0));

    // A single part has no breakpoints: both maxima are empty.
    const std::vector<int> one_part = {2};
    t = {0.9, -0.9};
    CHECK(j_value(one_part, t) == 0.0);

    const std::vector<int> two_one = {2, 1};
    t = {0.5, 0.3, -0.8};
    CHECK(j_value(two_one, t) == doctest::Approx(0.8));
}

TEST_CASE("integer and rescaled prefix-sum values are consistent") {
    const std::vector<int> parts = {1, 1};
    std::vector<long long> k = {3, -3};
    CHECK(J_N_value(10, parts, k) == 3);
    k = {8, -8};
    CHECK(J_N_value(5, parts, k) == 5);

    std::mt19937_64 rng(411);
    std::uniform_int_distribution<int> part_pick(1, 3);
    std::uniform_int_distribution<long long> freq(-12, 12);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> ps;
        int p = 0;
        while (p < 4) {
            const int q = std::min(part_pick(rng), 4 - p);
            ps.push_back(q);
            p += q;
        }
        std::vector<long long> kk(static_cast<std::size_t>(p));
        long long sum = 0;
        for (int i = 0; i + 1 < p; ++i) {
            kk[static_cast<std::size_t>(i)] = freq(rng);
            sum += kk[static_cast<std::size_t>(i)];
        }
        kk[static_cast<std::size_t>(p - 1)] = -sum;

        const long long N = 7;
        std::vector<double> scaled(kk.size());
        for (std::size_t i = 0; i < kk.size(); ++i)
            scaled[i] = static_cast<double>(kk[i]) / static_cast<double>(N);
        CHECK(static_cast<double>(J_N_value(N, ps, kk)) ==
              doctest::Approx(static_cast<double>(N) * j_value(ps, scaled)).epsilon(1e-12));
    }
}

TEST_CASE("first- and second-order cumulants") {
    for (long long N : {1LL, 4LL, 9LL}) {
        CHECK(kappa_exact(N, std::vector<long long>{0}) == N);
        CHECK(kappa_exact(N, std::vector<long long>{5}) == 0);
        for (long long k = 1; k <= 2 * N + 3; ++k) {
            CHECK(kappa_exact(N, std::vector<long long>{k, -k}) == std::min(N, k));
            CHECK(kappa_exact(N, std::vector<long long>{-k, k}) == std::min(N, k));
        }
    }
    // Zero frequency or unbalanced sum kills higher cumulants.
    CHECK(kappa_exact(6, std::vector<long long>{0, 3, -3}) == 0);
    CHECK(kappa_exact(6, std::vector<long long>{2, 3, -4}) == 0);
}

TEST_CASE("third- and fourth-order hand values") {
    CHECK(kappa_exact(10, std::vector<long long>{15, 20, -35}) == 10);
    CHECK(kappa_exact(1, std::vector<long long>{1, 1, -2}) == 1);
    CHECK(kappa_exact(5, std::vector<long long>{1, 2, -3}) == 0);  // small-frequency regime
    CHECK(kappa_exact(1, std::vector<long long>{1, -1, 1, -1}) == -1);
    CHECK(kappa_exact(2, std::vector<long long>{3, -3, 2, -2}) == -1);
}

TEST_CASE("closed forms match the exact evaluator on a dense grid") {
    for (long long N = 1; N <= 6; ++N) {
        for (long long a = 1; a <= 6; ++a) {
            const std::vector<long long> triple = {a, a, -2 * a};
            CHECK(kappa_closed_form(N, triple).value() == kappa_exact(N, triple));
            for (long long b = 1; b <= 6; ++b) {
                const std::vector<long long> mixed = {a, b, -(a + b)};
                CHECK(kappa_closed_form(N, mixed).value() == kappa_exact(N, mixed));
                const std::vector<long long> quad = {a, -a, b, -b};
                CAPTURE(N);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(kappa_closed_form(N, quad).value() == kappa_exact(N, quad));
            }
        }
    }
}

TEST_CASE("fourth-order closed form reports unavailability off the paired shape") {
    CHECK(!kappa_closed_form(5, std::vector<long long>{3, 1, -2, -2}).has_value());
    CHECK(kappa_closed_form(5, std::vector<long long>{2, -2, 2, -2}).has_value());
    CHECK_THROWS_AS((void)kappa_closed_form(5, std::vector<long long>{1, 1, 1, -2, -1}),
                    argument_error);
}

TEST_CASE("cumulants agree with Moebius inversion of quadrature moments") {
    // Independent route: joint moments from the eigenangle density, cumulants
    // recovered by partition inversion.
    auto moment = [](long long N) {
        return [N](std::span<const long long> k) { return brute_force_joint_moment(N, k); };
    };
    const std::vector<std::vector<long long>> tuples = {
        {1, -1},         {2, -2},         {3, -3},        {1, 1, -2},
        {2, -1, -1},     {1, 1, 1, -3},   {2, 2, -2, -2}, {1, -1, 2, -2},
        {1, 1, -1, -1},  {3, -1, -1, -1},
    };
    for (long long N = 1; N <= 3; ++N) {
        for (const auto& k : tuples) {
            const double inverted = oracles::cumulant_from_moments(k, moment(N));
            const auto exact = static_cast<double>(kappa_exact(N, k));
            CAPTURE(N);
            CAPTURE(k[0]);
            CHECK(std::abs(inverted - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("rescaled cumulants interpolate the integer ones") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long long> freq(-9, 9);
    for (long long N : {4LL, 9LL}) {
        for (int p = 2; p <= 5; ++p) {
            for (int trial = 0; trial < 60; ++trial) {
                std::vector<long long> k(static_cast<std::size_t>(p));
                long long sum = 0;
                for (int i = 0; i + 1 < p; ++i) {
                    k[static_cast<std::size_t>(i)] = freq(rng);
                    sum += k[static_cast<std::size_t>(i)];
                }
                k[static_cast<std::size_t>(p - 1)] = -sum;

                std::vector<double> t(k.size());
                for (std::size_t i = 0; i < k.size(); ++i)
                    t[i] = static_cast<double>(k[i]) / static_cast<double>(N);
                const double expected = static_cast<double>(kappa_exact(N, k));
                const double got = c_rescaled(t) * static_cast<double>(N);
                CHECK(std::abs(got - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
            }
        }
    }
}

TEST_CASE("rescaled pair cumulant is the clipped absolute value") {
    for (double x : {0.05, 0.4, 0.999, 1.0, 1.7}) {
        const std::vector<double> t = {x, -x};
        CHECK(c_rescaled(t) == doctest::Approx(std::min(x, 1.0)).epsilon(1e-12));
    }
    const std::vector<double> origin = {0.0, 0.0};
    CHECK(c_rescaled(origin) == doctest::Approx(0.0));
}

TEST_CASE("fourth-order closed form matches the raw series near its seams") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> mag(0.05, 1.6);
    const double deltas[] = {0.0, 1e-9, 1e-3};
    for (int trial = 0; trial < 40; ++trial) {
        const double a = mag(rng);
        for (double d : deltas) {
            const double b = a + d;
            for (const std::vector<double>& t :
                 {std::vector<double>{a, -a, b, -b}, std::vector<double>{a, b, -a, -b},
                  std::vector<double>{a, -b, b, -a}}) {
                CHECK(std::abs(c_rescaled(t) - c_rescaled_series(t)) <= 1e-8);
            }
        }
    }
    // Boundary seams of the unequal-magnitude branches.
    for (double a : {1.0, 1.0 + 1e-9, 1.3}) {
        for (double b : {a - 1.0 + 1e-9, 1.0 - a + 1e-3, 0.2}) {
            if (b <= 0.0 || b > a) continue;
            const std::vector<double> t = {a, -a, b, -b};
            CHECK(std::abs(c_rescaled(t) - c_rescaled_series(t)) <= 1e-8);
        }
    }
}

TEST_CASE("degree-one rescaled cumulant is an indicator at the origin") {
    const std::vector<double> zero = {0.0};
    CHECK(c_rescaled(zero) == 1.0);
    const std::vector<double> off = {0.3};
    CHECK(c_rescaled(off) == 0.0);
}

TEST_CASE("rescaled cumulants insist on the zero-sum hyperplane") {
    CHECK_THROWS_AS((void)c_rescaled(std::vector<double>{0.5, 0.1}), argument_error);
}

TEST_CASE("bad values raise argument errors, size overruns capacity errors") {
    CHECK_THROWS_AS((void)kappa_exact(5, std::vector<long long>(8, 0)), capacity_error);
    CHECK_THROWS_AS((void)kappa_exact(0, std::vector<long long>{1, -1}), argument_error);
    CHECK_THROWS_AS((void)c_rescaled(std::vector<double>(8, 0.0)), capacity_error);
}
