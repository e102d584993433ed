#include "cuecorr/sampler.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "cuecorr/errors.hpp"
#include "cuecorr/threading.hpp"

namespace cuecorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnitCircleTol = 1e-8;
constexpr long long kMaxBruteForceGrid = 200'000'000;  // total grid points

// Weyl weights for one grid resolution: w(g) = prod_{j<l} |e^{i a_j} - e^{i a_l}|^2
// divided by N! M^N, over the lattice a = 2*pi*g/M. Any resolution at least
// the required one integrates the trig-polynomial integrand exactly, so the
// cache keeps only the finest array built per N.
struct WeightGrid {
    long long M = 0;
    std::vector<double> weights;  // size M^N
};

std::shared_ptr<const WeightGrid> weyl_weights(long long N, long long M_needed) {
    static std::mutex mu;
    static std::map<long long, std::shared_ptr<const WeightGrid>> cache;

    std::scoped_lock lock(mu);
    auto it = cache.find(N);
    if (it != cache.end() && it->second->M >= M_needed) return it->second;

    const long long M = M_needed;
    long long total = 1;
    for (long long j = 0; j < N; ++j) {
        if (total > kMaxBruteForceGrid / M)
            throw capacity_error("brute_force_joint_moment: quadrature grid too large");
        total *= M;
    }

    auto grid = std::make_shared<WeightGrid>();
    grid->M = M;
    grid->weights.resize(static_cast<std::size_t>(total));

    double nfact = 1.0;
    for (long long j = 2; j <= N; ++j) nfact *= static_cast<double>(j);
    const double norm = 1.0 / (nfact * std::pow(static_cast<double>(M), static_cast<double>(N)));

    std::vector<double> cos_table(M);
    for (long long g = 0; g < M; ++g) cos_table[g] = std::cos(kTwoPi * g / M);

    std::vector<long long> digits(N, 0);
    for (long long idx = 0; idx < total; ++idx) {
        double w = norm;
        for (long long j = 0; j < N && w != 0.0; ++j)
            for (long long l = j + 1; l < N; ++l) {
                long long diff = digits[j] - digits[l];
                if (diff < 0) diff += M;
                w *= 2.0 - 2.0 * cos_table[diff];
            }
        grid->weights[static_cast<std::size_t>(idx)] = w;
        for (long long j = N - 1; j >= 0; --j) {
            if (++digits[j] < M) break;
            digits[j] = 0;
        }
    }

    cache[N] = grid;
    return grid;
}

}  // namespace

EigenangleSample sample_cue_eigenangles(long long N, std::mt19937_64& rng,
                                        long long* rejections) {
    if (N < 1) throw argument_error("sample_cue_eigenangles: N must be positive");

    std::normal_distribution<double> gauss(0.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto n = static_cast<Eigen::Index>(N);

    for (;;) {
        Eigen::MatrixXcd ginibre(n, n);
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < n; ++r)
                ginibre(r, c) = std::complex<double>(gauss(rng), gauss(rng)) * inv_sqrt2;

        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
        Eigen::MatrixXcd unitary = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);

        // Phase-correct by the R diagonal so the distribution is Haar rather
        // than biased by QR's sign convention.
        bool degenerate = false;
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::complex<double> d = qr.matrixQR()(j, j);
            const double mag = std::abs(d);
            if (mag == 0.0) {
                degenerate = true;
                break;
            }
            unitary.col(j) *= d / mag;
        }

        if (!degenerate) {
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(unitary, false);
            if (solver.info() == Eigen::Success) {
                const auto& lambda = solver.eigenvalues();
                bool on_circle = true;
                for (Eigen::Index j = 0; j < n && on_circle; ++j)
                    on_circle = std::abs(std::abs(lambda(j)) - 1.0) <= kUnitCircleTol;
                if (on_circle) {
                    EigenangleSample sample;
                    sample.angles.resize(static_cast<std::size_t>(N));
                    for (Eigen::Index j = 0; j < n; ++j) {
                        double theta = std::arg(lambda(j));
                        if (theta < 0.0) theta += kTwoPi;
                        if (theta >= kTwoPi) theta = 0.0;
                        sample.angles[static_cast<std::size_t>(j)] = theta;
                    }
                    std::sort(sample.angles.begin(), sample.angles.end());
                    return sample;
                }
            }
        }
        if (rejections) ++*rejections;
    }
}

double brute_force_joint_moment(long long N, std::span<const long long> k) {
    if (N < 1) throw argument_error("brute_force_joint_moment: N must be positive");
    if (N > 3) throw capacity_error("brute_force_joint_moment: N <= 3 only");
    const int p = static_cast<int>(k.size());
    if (p < 1) throw argument_error("brute_force_joint_moment: empty frequency tuple");
    if (p > 5) throw capacity_error("brute_force_joint_moment: at most 5 frequencies");

    std::vector<long long> key(k.begin(), k.end());
    std::sort(key.begin(), key.end());
    thread_local std::map<std::pair<long long, std::vector<long long>>, double> memo;
    if (auto it = memo.find({N, key}); it != memo.end()) return it->second;

    long long abs_sum = 0;
    for (long long kj : k) abs_sum += std::llabs(kj);
    // Per-axis trig degree is at most abs_sum + (N - 1); a factor-4 margin
    // keeps the rule exact with room to spare.
    const long long M_needed = 4 * (abs_sum + N);
    const auto grid = weyl_weights(N, M_needed);
    const long long M = grid->M;

    std::vector<std::vector<std::complex<double>>> tables(key.size());
    for (std::size_t j = 0; j < key.size(); ++j) {
        tables[j].resize(static_cast<std::size_t>(M));
        for (long long g = 0; g < M; ++g)
            tables[j][static_cast<std::size_t>(g)] =
                std::polar(1.0, static_cast<double>(key[j]) * (kTwoPi * g / M));
    }

    long long total = 1;
    for (long long j = 0; j < N; ++j) total *= M;

    std::complex<double> acc(0.0, 0.0);
    std::vector<long long> digits(N, 0);
    for (long long idx = 0; idx < total; ++idx) {
        const double w = grid->weights[static_cast<std::size_t>(idx)];
        if (w != 0.0) {
            std::complex<double> prod(w, 0.0);
            for (const auto& table : tables) {
                std::complex<double> trace(0.0, 0.0);
                for (long long j = 0; j < N; ++j)
                    trace += table[static_cast<std::size_t>(digits[j])];
                prod *= trace;
            }
            acc += prod;
        }
        for (long long j = N - 1; j >= 0; --j) {
            if (++digits[j] < M) break;
            digits[j] = 0;
        }
    }

    memo[{N, key}] = acc.real();
    return acc.real();
}

namespace {

struct BlockSums {
    long long count = 0;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
};

struct MomentSet {
    double mean = 0, variance = 0, skewness = 0, kurtosis = 0;
};

// Central moments from raw power sums of values already shifted by a fixed
// center; `center` restores the reported mean.
MomentSet moments_from_sums(double center, long long count, double s1, double s2, double s3,
                            double s4) {
    const double n = static_cast<double>(count);
    const double mu = s1 / n;
    const double m2 = s2 / n - mu * mu;
    const double m3 = s3 / n - 3.0 * mu * s2 / n + 2.0 * mu * mu * mu;
    const double m4 =
        s4 / n - 4.0 * mu * s3 / n + 6.0 * mu * mu * s2 / n - 3.0 * mu * mu * mu * mu;

    MomentSet out;
    out.mean = center + mu;
    out.variance = count > 1 ? m2 * n / (n - 1.0) : 0.0;
    out.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    out.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    return out;
}

}  // namespace

MomentReport monte_carlo_clt_experiment(const ExperimentConfig& config,
                                        std::vector<double>* per_sample) {
    if (config.N < 1) throw argument_error("monte_carlo_clt_experiment: N must be positive");
    if (config.num_samples < 1)
        throw argument_error("monte_carlo_clt_experiment: num_samples must be positive");
    if (!config.f.hat_f)
        throw argument_error("monte_carlo_clt_experiment: test function has no transform");

    const long long N = config.N;
    const int n = config.f.arity;
    const long long s_max =
        static_cast<long long>(n) *
        static_cast<long long>(std::ceil(config.f.support_radius * static_cast<double>(N) - 1e-9));

    std::vector<double> values(static_cast<std::size_t>(config.num_samples));
    std::atomic<long long> rejected{0};

    parallel_for(config.num_samples, [&](long long i) {
        std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                          static_cast<std::uint32_t>(config.seed >> 32),
                          static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(static_cast<unsigned long long>(i) >> 32)};
        std::mt19937_64 rng(seq);
        long long local_rejections = 0;
        const EigenangleSample sample = sample_cue_eigenangles(N, rng, &local_rejections);
        if (local_rejections) rejected.fetch_add(local_rejections, std::memory_order_relaxed);
        const TraceVector traces = power_traces(sample, s_max);
        values[static_cast<std::size_t>(i)] = statistic_fourier(config.f, traces);
    });

    if (per_sample) *per_sample = values;

    // Delete-block jackknife on consecutive blocks.
    const long long count = config.num_samples;
    const long long block_len = count >= 200 ? 100 : std::max<long long>(1, (count + 1) / 2);
    const long long num_blocks = (count + block_len - 1) / block_len;

    double center = 0.0;
    for (double v : values) center += v;
    center /= static_cast<double>(count);

    std::vector<BlockSums> blocks(static_cast<std::size_t>(num_blocks));
    for (long long i = 0; i < count; ++i) {
        BlockSums& b = blocks[static_cast<std::size_t>(i / block_len)];
        const double d = values[static_cast<std::size_t>(i)] - center;
        b.count += 1;
        b.s1 += d;
        const double d2 = d * d;
        b.s2 += d2;
        b.s3 += d2 * d;
        b.s4 += d2 * d2;
    }

    BlockSums all;
    for (const BlockSums& b : blocks) {
        all.count += b.count;
        all.s1 += b.s1;
        all.s2 += b.s2;
        all.s3 += b.s3;
        all.s4 += b.s4;
    }

    const MomentSet full = moments_from_sums(center, all.count, all.s1, all.s2, all.s3, all.s4);

    MomentReport report;
    report.N = N;
    report.num_samples = config.num_samples;
    report.seed = config.seed;
    report.rejected_samples = rejected.load();
    report.mean = full.mean;
    report.variance = full.variance;
    report.skewness = full.skewness;
    report.kurtosis = full.kurtosis;

    if (num_blocks >= 2) {
        std::vector<MomentSet> loo(static_cast<std::size_t>(num_blocks));
        for (long long b = 0; b < num_blocks; ++b) {
            const BlockSums& blk = blocks[static_cast<std::size_t>(b)];
            loo[static_cast<std::size_t>(b)] =
                moments_from_sums(center, all.count - blk.count, all.s1 - blk.s1,
                                  all.s2 - blk.s2, all.s3 - blk.s3, all.s4 - blk.s4);
        }
        auto jackknife_se = [&](auto member) {
            double avg = 0.0;
            for (const MomentSet& m : loo) avg += m.*member;
            avg /= static_cast<double>(num_blocks);
            double ss = 0.0;
            for (const MomentSet& m : loo) {
                const double d = m.*member - avg;
                ss += d * d;
            }
            const double nb = static_cast<double>(num_blocks);
            return std::sqrt((nb - 1.0) / nb * ss);
        };
        report.se_mean = jackknife_se(&MomentSet::mean);
        report.se_variance = jackknife_se(&MomentSet::variance);
        report.se_skewness = jackknife_se(&MomentSet::skewness);
        report.se_kurtosis = jackknife_se(&MomentSet::kurtosis);
    }

    return report;
}

}  // namespace cuecorr
