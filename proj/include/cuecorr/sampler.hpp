#pragma once

#include <random>
#include <span>
#include <vector>

#include "cuecorr/statistic.hpp"

namespace cuecorr {

// One Haar-unitary spectrum: complex Ginibre matrix, Householder QR with the
// R-diagonal phase correction, then the eigenangles of the resulting unitary.
// Draws whose eigenvalues leave the unit circle by more than 1e-8 are
// discarded and redrawn; *rejections (when non-null) accumulates the count.
EigenangleSample sample_cue_eigenangles(long long N, std::mt19937_64& rng,
                                        long long* rejections = nullptr);

// E[prod_j T_{k_j}] by direct quadrature of the eigenangle density on a
// periodic grid. The integrand is a trigonometric polynomial, so the
// rectangle rule at the chosen resolution is exact up to rounding.
// N <= 3 and k.size() <= 5 (capacity_error beyond); sum(k) need not vanish.
double brute_force_joint_moment(long long N, std::span<const long long> k);

struct ExperimentConfig {
    long long N = 0;
    TestFunction f;
    long long num_samples = 0;
    unsigned long long seed = 0;
};

// Sample moments of S_N(f) with jackknife standard errors. skewness is the
// standardized third central moment m3 / m2^(3/2); kurtosis is m4 / m2^2
// (3 for a Gaussian).
struct MomentReport {
    long long N = 0;
    long long num_samples = 0;
    unsigned long long seed = 0;
    long long rejected_samples = 0;

    double mean = 0, se_mean = 0;
    double variance = 0, se_variance = 0;
    double skewness = 0, se_skewness = 0;
    double kurtosis = 0, se_kurtosis = 0;
};

// Runs the Monte Carlo experiment: per sample, draw a spectrum, build power
// traces, evaluate the statistic through the frequency path. Each sample is
// seeded independently from (seed, sample index) and reductions fold in
// index order, so results are bit-reproducible for a given config across
// thread counts. Jackknife uses blocks of 100 consecutive samples (the
// whole run is split in half when there are fewer than 200).
// If per_sample is non-null it receives the individual statistic values.
MomentReport monte_carlo_clt_experiment(const ExperimentConfig& config,
                                        std::vector<double>* per_sample = nullptr);

}  // namespace cuecorr
