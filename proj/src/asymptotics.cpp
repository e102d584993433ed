#include "cuecorr/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "cuecorr/cumulants.hpp"
#include "cuecorr/linear.hpp"

namespace cuecorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Convergence is declared when a refinement changes the running value by at
// most tol * max(kScaleFloor, |value|); the floor keeps near-zero terms from
// demanding unattainable relative accuracy.
constexpr double kScaleFloor = 1e-2;

constexpr double kCoefEps = 1e-12;

double effective_tol(const QuadratureOptions& opts, int arity) {
    if (opts.rel_tol > 0.0) return opts.rel_tol;
    return arity <= 1 ? 1e-6 : 1e-4;
}

struct QuadWork {
    long long max_evals = 0;
    long long evals = 0;
    const char* context = "";

    void tick() {
        if (++evals > max_evals)
            throw tolerance_error(std::string(context) +
                                  ": integrand evaluation budget exhausted (" +
                                  std::to_string(max_evals) + ")");
    }
};

constexpr std::array<double, 4> kGL8Node = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGL8Weight = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

double gl8_panel(const std::function<double(double)>& g, double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += kGL8Weight[i] * (g(c - h * kGL8Node[i]) + g(c + h * kGL8Node[i]));
    return s * h;
}

// Composite Gauss panels split at the supplied interior points, then halved
// globally until two consecutive refinements agree within tol.
double adaptive_composite(const std::function<double(double)>& g, double lo, double hi,
                          std::vector<double> interior, double tol, int max_level,
                          QuadWork& work, const char* what) {
    if (!(hi > lo)) return 0.0;

    std::vector<double> cuts;
    cuts.push_back(lo);
    std::sort(interior.begin(), interior.end());
    const double sep = 1e-12 * std::max(1.0, hi - lo);
    for (double c : interior)
        if (c > lo + sep && c < hi - sep && c > cuts.back() + sep) cuts.push_back(c);
    cuts.push_back(hi);

    double prev = 0.0;
    for (int level = 0;; ++level) {
        const int pieces = 1 << level;
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double w = (cuts[i + 1] - cuts[i]) / pieces;
            for (int p = 0; p < pieces; ++p)
                total += gl8_panel(g, cuts[i] + p * w, cuts[i] + (p + 1) * w);
        }
        if (level > 0 && std::abs(total - prev) <= tol * std::max(kScaleFloor, std::abs(total)))
            return total;
        if (level >= max_level)
            throw tolerance_error(std::string(work.context) + ": " + what +
                                  " did not converge (last delta " +
                                  std::to_string(std::abs(total - prev)) + " after " +
                                  std::to_string(work.evals) + " evaluations)");
        prev = total;
    }
}

// A kink locus of the integrand: the hyperplane coef . u == level in the
// free coordinates. Quadrature panels are aligned to these so that every
// panel sees a smooth piece.
struct LinearForm {
    std::vector<double> coef;
    double level = 0.0;
};

struct SubspaceIntegrand {
    int dim = 0;
    double box = 0.0;  // integration domain is [-box, box]^dim
    std::vector<LinearForm> forms;
    std::function<double(std::span<const double>)> eval;
};

double integrate_rec(const SubspaceIntegrand& si, int level, std::vector<double>& pt,
                     double tol, QuadWork& work);

// Integrates out coordinate `level` with the remaining coordinates handled
// recursively. For the innermost coordinate the kink forms restrict to exact
// breakpoints; for the second-innermost the projected kinks (verticals,
// pairwise intersections, box-edge crossings) are exact as well. Outer
// coordinates of deeper integrals rely on global halving.
double integrate_rec(const SubspaceIntegrand& si, int level, std::vector<double>& pt,
                     double tol, QuadWork& work) {
    const int remaining = si.dim - level;
    if (remaining == 0) {
        work.tick();
        return si.eval(pt);
    }

    // Restriction of each form to the coordinates not yet fixed.
    auto restricted = [&](const LinearForm& f, double& c0, double& c1, double& base) {
        base = f.level;
        for (int j = 0; j < level; ++j) base -= f.coef[j] * pt[j];
        c0 = f.coef[level];
        c1 = (remaining >= 2) ? f.coef[level + 1] : 0.0;
    };

    std::vector<double> cuts;
    if (remaining == 1) {
        for (const auto& f : si.forms) {
            double c0, c1, base;
            restricted(f, c0, c1, base);
            if (std::abs(c0) > kCoefEps) cuts.push_back(base / c0);
        }
    } else if (remaining == 2) {
        struct R2 {
            double c0, c1, base;
        };
        std::vector<R2> rf;
        rf.reserve(si.forms.size());
        for (const auto& f : si.forms) {
            double c0, c1, base;
            restricted(f, c0, c1, base);
            rf.push_back({c0, c1, base});
        }
        for (const auto& f : rf) {
            if (std::abs(f.c1) <= kCoefEps) {
                if (std::abs(f.c0) > kCoefEps) cuts.push_back(f.base / f.c0);  // vertical kink
            } else if (std::abs(f.c0) > kCoefEps) {
                // Kink line meets the inner-coordinate box edges.
                cuts.push_back((f.base - f.c1 * si.box) / f.c0);
                cuts.push_back((f.base + f.c1 * si.box) / f.c0);
            }
        }
        for (std::size_t i = 0; i < rf.size(); ++i) {
            for (std::size_t j = i + 1; j < rf.size(); ++j) {
                const double det = rf[i].c0 * rf[j].c1 - rf[j].c0 * rf[i].c1;
                if (std::abs(det) > kCoefEps)
                    cuts.push_back((rf[i].base * rf[j].c1 - rf[j].base * rf[i].c1) / det);
            }
        }
    } else {
        cuts.push_back(0.0);
        for (const auto& f : si.forms) {
            double c0, c1, base;
            restricted(f, c0, c1, base);
            bool deeper = false;
            for (int j = level + 1; j < si.dim; ++j)
                deeper = deeper || std::abs(f.coef[j]) > kCoefEps;
            if (!deeper && std::abs(c0) > kCoefEps) cuts.push_back(base / c0);
        }
    }

    const double inner_tol = remaining == 1 ? tol : (remaining == 2 ? tol / 64.0 : tol / 8.0);
    const int max_level = remaining == 1 ? 18 : (remaining == 2 ? 14 : 8);
    const char* what = remaining == 1 ? "innermost integral" : "outer integral";

    return adaptive_composite(
        [&](double u) {
            pt[level] = u;
            return integrate_rec(si, level + 1, pt, inner_tol, work);
        },
        -si.box, si.box, std::move(cuts), tol, max_level, work, what);
}

double integrate_subspace(const SubspaceIntegrand& si, double tol, QuadWork& work) {
    if (si.dim == 0) {
        work.tick();
        return si.eval({});
    }
    std::vector<double> pt(si.dim, 0.0);
    return integrate_rec(si, 0, pt, tol, work);
}

// Kink hyperplanes of a partition-term integrand, expressed in the free
// coordinates: every proper subset sum of a block crosses {-1, 0, 1} (the
// rescaled-cumulant pieces change there), and for a transform with corners
// (the triangle family) every transform argument crosses {-a, 0, a}.
std::vector<LinearForm> collect_kink_forms(const SubspaceParametrization& P,
                                           const SetPartition& pi,
                                           const std::vector<int>& hat_coords,
                                           bool hat_has_corners, double a) {
    const int d = P.dim();
    std::vector<LinearForm> forms;
    auto push = [&](const std::vector<double>& coef, std::initializer_list<double> levels) {
        bool nonzero = false;
        for (double c : coef) nonzero = nonzero || std::abs(c) > kCoefEps;
        if (!nonzero) return;
        for (double lvl : levels) forms.push_back({coef, lvl});
    };

    for (const auto& b : pi.blocks) {
        if (b.size() < 2) continue;
        const int q = static_cast<int>(b.size());
        for (int mask = 1; mask < (1 << q) - 1; ++mask) {
            std::vector<double> coef(d, 0.0);
            for (int i = 0; i < q; ++i)
                if (mask & (1 << i))
                    for (int j = 0; j < d; ++j) coef[j] += P.reconstruction[b[i]][j];
            push(coef, {-1.0, 0.0, 1.0});
        }
    }
    if (hat_has_corners) {
        for (int c : hat_coords) {
            std::vector<double> coef(d, 0.0);
            for (int j = 0; j < d; ++j) coef[j] = static_cast<double>(P.reconstruction[c][j]);
            push(coef, {-a, 0.0, a});
        }
    }
    return forms;
}

void check_asymptotic_input(const TestFunction& f, const char* who, int max_arity) {
    if (f.arity < 1 || f.arity > max_arity)
        throw argument_error(std::string(who) + ": arity must be between 1 and " +
                             std::to_string(max_arity));
    if (!f.hat_f) throw argument_error(std::string(who) + ": test function has no transform");
    if (!(f.support_radius > 0.0))
        throw argument_error(std::string(who) + ": support_radius must be positive");
}

// The triangle family is the only built-in with transform corners; detect
// corners generically by probing nothing and keying on direct_radius being
// infinite would be fragile, so kink cuts at {-a, 0, a} are emitted for
// every transform. For smooth transforms the extra cuts are harmless.
constexpr bool kAlwaysEmitHatCorners = true;

void for_each_composition(int total, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> comp;
    std::function<void(int)> rec = [&](int remaining) {
        if (remaining == 0) {
            fn(comp);
            return;
        }
        for (int first = 1; first <= remaining; ++first) {
            comp.push_back(first);
            rec(remaining - first);
            comp.pop_back();
        }
    };
    rec(total);
}

SetPartition consecutive_partition(const std::vector<int>& comp) {
    SetPartition pi;
    pi.ground_size = std::accumulate(comp.begin(), comp.end(), 0);
    int next = 0;
    for (int q : comp) {
        std::vector<int> b(q);
        std::iota(b.begin(), b.end(), next);
        next += q;
        pi.blocks.push_back(std::move(b));
    }
    return pi;
}

double factorial_d(int n) {
    double v = 1.0;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

}  // namespace

void SubspaceParametrization::reconstruct(std::span<const double> free_values,
                                          std::span<double> t) const {
    if (static_cast<int>(free_values.size()) != dim() ||
        static_cast<int>(t.size()) != ambient_dim)
        throw argument_error("SubspaceParametrization::reconstruct: size mismatch");
    for (int c = 0; c < ambient_dim; ++c) {
        double v = 0.0;
        for (int j = 0; j < dim(); ++j)
            v += static_cast<double>(reconstruction[c][j]) * free_values[j];
        t[c] = v;
    }
}

SubspaceParametrization parametrize_subspace(const SetPartition& pi, const WindowStructure& w) {
    if (w.m < 1 || w.l < 1)
        throw argument_error("parametrize_subspace: window structure must have m, l >= 1");
    if (pi.ground_size != w.ground_size())
        throw argument_error("parametrize_subspace: partition does not match window structure");

    const auto sys =
        detail::reduce_constraints(detail::window_block_constraints(pi, w), w.ground_size());

    SubspaceParametrization P;
    P.ambient_dim = sys.cols;
    P.rank = sys.rank;
    P.free_indices = sys.free_cols;
    P.reconstruction = sys.reconstruction;

    // Right-to-left pivoting keeps every window's trailing closure
    // coordinate pivotal; integrators depend on that to bound the free
    // coordinates by the transform's support box.
    for (int win = 0; win < w.m; ++win) {
        const int closure = (win + 1) * w.l - 1;
        if (std::find(P.free_indices.begin(), P.free_indices.end(), closure) !=
            P.free_indices.end())
            throw consistency_error("parametrize_subspace: closure coordinate came out free");
    }
    return P;
}

std::vector<std::pair<std::vector<int>, double>> mean_asymptotic_terms(
    const TestFunction& f, const QuadratureOptions& opts) {
    check_asymptotic_input(f, "mean_asymptotic", 3);
    const int n = f.arity;
    const double a = f.support_radius;
    const double tol = effective_tol(opts, n);
    QuadWork work{opts.max_evals, 0, "mean_asymptotic"};

    // Average of the transform over all placements of the tuple positions.
    // The per-composition integral form assumes a fully exchangeable test
    // function; a merely tensor-product one must be symmetrized explicitly
    // (the equivalent sum over set partitions with the plain transform needs
    // no symmetrization and backs this up in the tests).
    std::vector<std::vector<int>> perms;
    {
        std::vector<int> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        do {
            perms.push_back(idx);
        } while (std::next_permutation(idx.begin(), idx.end()));
    }

    const WindowStructure w{1, n + 1};
    const double prefactor = std::pow(kTwoPi, -0.5 * n);
    std::vector<std::pair<std::vector<int>, double>> out;

    for_each_composition(n + 1, [&](const std::vector<int>& comp) {
        const int m = static_cast<int>(comp.size());
        double weight = factorial_d(n + 1) / factorial_d(m);
        for (int q : comp) weight /= factorial_d(q);

        const SetPartition pi = consecutive_partition(comp);
        const SubspaceParametrization P = parametrize_subspace(pi, w);

        std::vector<int> all_coords(n + 1);
        std::iota(all_coords.begin(), all_coords.end(), 0);

        SubspaceIntegrand si;
        si.dim = P.dim();
        // A permuted transform argument can be any coordinate, including the
        // closure one, which ranges over n times the support box.
        si.box = static_cast<double>(n) * a;
        si.forms = collect_kink_forms(P, pi, all_coords, kAlwaysEmitHatCorners, a);

        std::vector<double> t(n + 1), xi(n), tb;
        si.eval = [&](std::span<const double> u) {
            P.reconstruct(u, t);
            double hat_sym = 0.0;
            for (const auto& perm : perms) {
                for (int i = 0; i < n; ++i) xi[i] = t[perm[i]];
                hat_sym += f.hat_f(xi);
            }
            hat_sym /= static_cast<double>(perms.size());
            if (hat_sym == 0.0) return 0.0;
            double prod = hat_sym;
            for (const auto& b : pi.blocks) {
                tb.clear();
                for (int e : b) tb.push_back(t[e]);
                prod *= c_rescaled(tb);
                if (prod == 0.0) break;
            }
            return prod;
        };

        const double integral = integrate_subspace(si, tol, work);
        out.emplace_back(comp, prefactor * weight * integral);
    });
    return out;
}

double mean_asymptotic(const TestFunction& f, const QuadratureOptions& opts) {
    double total = 0.0;
    for (const auto& [comp, value] : mean_asymptotic_terms(f, opts)) total += value;
    return total;
}

std::vector<std::pair<SetPartition, double>> variance_asymptotic_terms(
    const TestFunction& f, const QuadratureOptions& opts) {
    check_asymptotic_input(f, "variance_asymptotic", 2);
    const int n = f.arity;
    const int l = n + 1;
    const double a = f.support_radius;
    const double tol = effective_tol(opts, n);
    QuadWork work{opts.max_evals, 0, "variance_asymptotic"};

    const WindowStructure w{2, l};
    const double prefactor = std::pow(kTwoPi, -static_cast<double>(n));

    std::vector<int> hat_coords;
    for (int win = 0; win < 2; ++win)
        for (int i = 0; i < n; ++i) hat_coords.push_back(win * l + i);

    std::vector<std::pair<SetPartition, double>> out;
    for (const SetPartition& pi : enumerate_connecting_partitions(2, l)) {
        const SubspaceParametrization P = parametrize_subspace(pi, w);

        SubspaceIntegrand si;
        si.dim = P.dim();
        si.box = a;  // free coordinates are transform arguments
        si.forms = collect_kink_forms(P, pi, hat_coords, kAlwaysEmitHatCorners, a);

        std::vector<double> t(2 * l), xi(n), tb;
        si.eval = [&](std::span<const double> u) {
            P.reconstruct(u, t);
            double hats = 1.0;
            for (int win = 0; win < 2 && hats != 0.0; ++win) {
                for (int i = 0; i < n; ++i) xi[i] = t[win * l + i];
                hats *= f.hat_f(xi);
            }
            if (hats == 0.0) return 0.0;
            double prod = hats;
            for (const auto& b : pi.blocks) {
                tb.clear();
                for (int e : b) tb.push_back(t[e]);
                prod *= c_rescaled(tb);
                if (prod == 0.0) break;
            }
            return prod;
        };

        const double integral = integrate_subspace(si, tol, work);
        out.emplace_back(pi, prefactor * integral);
    }
    return out;
}

double variance_asymptotic(const TestFunction& f, const QuadratureOptions& opts) {
    double total = 0.0;
    for (const auto& [pi, value] : variance_asymptotic_terms(f, opts)) total += value;
    return total;
}

double variance_closed_form_pairs(const TestFunction& f, const QuadratureOptions& opts) {
    if (f.arity != 1)
        throw argument_error("variance_closed_form_pairs: defined for arity 1 only");
    check_asymptotic_input(f, "variance_closed_form_pairs", 1);

    const double a = f.support_radius;
    const double tol = effective_tol(opts, 1);
    QuadWork work{opts.max_evals, 0, "variance_closed_form_pairs"};
    const double inner_tol = tol / 64.0;

    auto hat = [&](double x) {
        work.tick();
        return f.hat_f(std::span<const double>(&x, 1));
    };

    // Quadratic branch: transform squared against the clipped parabola.
    const double t1 = adaptive_composite(
        [&](double t) {
            const double h = hat(t);
            const double m = std::min(std::abs(t), 1.0);
            return h * h * m * m;
        },
        -a, a, {-1.0, 0.0, 1.0}, tol, 18, work, "quadratic branch");

    // Straddling-pair branch: pairs (s, t) = (t + d, t) with gap |d| <= 1 and
    // at least one coordinate outside (-1, 1). Written as (full line) minus
    // (both inside) for each gap d.
    const double t2 = adaptive_composite(
        [&](double d) {
            auto cross = [&](double t) { return hat(t) * hat(t + d); };
            auto segment = [&](double lo, double hi, const char* what) {
                if (!(hi > lo)) return 0.0;
                std::vector<double> cuts = {0.0, -d, a - d, -a - d};
                return adaptive_composite(cross, lo, hi, std::move(cuts), inner_tol, 12, work,
                                          what);
            };
            const double full =
                segment(std::max(-a, -a - d), std::min(a, a - d), "gap cross-correlation");
            const double both_inside =
                segment(std::max({-1.0, -1.0 - d, -a, -a - d}),
                        std::min({1.0, 1.0 - d, a, a - d}), "interior cross-correlation");
            return (1.0 - std::abs(d)) * (full - both_inside);
        },
        -1.0, 1.0, {0.0, 1.0 - a, a - 1.0}, tol, 16, work, "straddling-pair branch");

    // Wrap-around branch: same-sign pairs with |s|, |t| <= 1 and |s + t| > 1,
    // integrated along the excess u = |s + t| - 1. The quadrant with both
    // coordinates negative enters through the mirrored product.
    const double t3 = adaptive_composite(
        [&](double u) {
            const double lo = std::max({u, -a, 1.0 + u - a});
            const double hi = std::min({1.0, a, 1.0 + u + a});
            if (!(hi > lo)) return 0.0;
            auto g = [&](double s) {
                const double t = 1.0 + u - s;
                return hat(s) * hat(t) + hat(-s) * hat(-t);
            };
            std::vector<double> cuts = {0.0, a, 1.0 + u - a, 1.0 + u};
            return u * adaptive_composite(g, lo, hi, std::move(cuts), inner_tol, 12, work,
                                          "wrap-around cross-correlation");
        },
        0.0, 1.0, {a, 1.0 - a, 2.0 * a - 1.0}, tol, 16, work, "wrap-around branch");

    return (t1 - t2 - t3) / std::numbers::pi;
}

}  // namespace cuecorr
