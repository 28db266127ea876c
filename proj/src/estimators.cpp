#include "tailsum/estimators.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "tailsum/errors.hpp"
#include "tailsum/radial.hpp"
#include "tailsum/samplers.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tailsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kBlock = 1024;  // draws per RNG substream

bool is_survival(const TailProblem& p) { return p.mode == Mode::survival_y; }

// u-level of a threshold: F_i (copula mode) or SF_i (survival mode).
double level_u(const TailProblem& p, int i, double level) {
    return is_survival(p) ? p.marginals[i]->survival(level) : p.marginals[i]->cdf(level);
}

// copula coordinate -> component value.
double u_to_value(const TailProblem& p, int i, double u) {
    return is_survival(p) ? p.marginals[i]->survival_quantile(u) : p.marginals[i]->quantile(u);
}

double order_stat_of(std::span<const double> vals, OrderStat stat) {
    const int n = static_cast<int>(vals.size());
    std::array<double, 32> buf;
    if (n > 32) throw capability_error("closed_radius_bound: dimension exceeds 32");
    std::copy(vals.begin(), vals.end(), buf.begin());
    int idx = 0;
    switch (stat) {
        case OrderStat::min: idx = 0; break;
        case OrderStat::second_min: idx = 1; break;
        case OrderStat::second_max: idx = n - 2; break;
        case OrderStat::max: idx = n - 1; break;
    }
    if (idx < 0 || idx >= n) throw domain_error("closed_radius_bound: order statistic out of range");
    std::nth_element(buf.begin(), buf.begin() + idx, buf.begin() + n);
    return buf[idx];
}

// Conditional component CDF from the precomputed sum of the other
// coordinates' generator-inverse transforms.
double cond_cdf_from_sums(const TailProblem& p, int i, double t_others, double x) {
    const int k = p.dim() - 1;
    const double log_den = p.gen.log_abs_phi_deriv(k, t_others);
    if (!std::isfinite(log_den))
        throw numerical_error("conditional_component_cdf: degenerate conditioning values");
    const double u = level_u(p, i, x);
    const double t = p.gen.phi_inverse(u);
    double ratio = t == kInf ? 0.0 : std::exp(p.gen.log_abs_phi_deriv(k, t_others + t) - log_den);
    ratio = std::clamp(ratio, 0.0, 1.0);
    return is_survival(p) ? 1.0 - ratio : ratio;
}

struct Workspace {
    std::vector<double> u;     // copula coordinates, length n
    std::vector<double> w;     // simplex point, length n
    std::vector<double> usub;  // NR3 subvector, length n-1
    std::vector<double> ratio;

    explicit Workspace(int n) : u(n), w(n), usub(std::max(n - 1, 1)), ratio(n) {}
};

// Everything a draw needs that does not change across replications.
struct DrawContext {
    const TailProblem& p;
    EstimatorKind kind;
    int n;
    bool survival;
    double s;
    double max_tail;
    double lambda = 0.0;
    double kappa = 0.0;
    double cut = 0.0;  // lambda*s or kappa*s

    std::optional<RadialCdf> radial;           // dim n
    std::optional<RadialCdf> radial_sub;       // dim n-1 (NR3, n >= 3)
    std::optional<KendallConditional> kendall; // NR1 / NR4 band draws

    std::vector<double> t_s;    // Phi^-1 of the level-s transforms
    std::vector<double> t_cut;  // same at the cut level
    std::vector<double> band_lo, band_hi, band_w;

    DrawContext(const TailProblem& problem, EstimatorKind k, const EstimatorParams& params)
        : p(problem), kind(k), n(problem.dim()), survival(is_survival(problem)),
          s(problem.s), max_tail(max_tail_prob(problem)) {
        if (n < 2 && kind != EstimatorKind::plain_mc)
            throw domain_error("conditional estimators require dimension >= 2");
        if (n >= 2) radial.emplace(p.gen, n);

        const bool needs_bands = kind == EstimatorKind::nr1 || kind == EstimatorKind::nr4;
        const bool needs_cut = kind == EstimatorKind::nr3 || kind == EstimatorKind::nr4;
        const bool needs_level = kind != EstimatorKind::nr1 && kind != EstimatorKind::plain_mc;

        if (kind == EstimatorKind::nr3) {
            if (!params.lambda) throw domain_error("NR3 requires lambda");
            lambda = *params.lambda;
            if (!(lambda > 0.0) || !(lambda < 1.0 / n))
                throw domain_error("NR3 lambda must lie in (0, 1/n)");
            cut = lambda * s;
            if (n >= 3) radial_sub.emplace(p.gen, n - 1);
        }
        if (kind == EstimatorKind::nr4) {
            if (!params.kappa) throw domain_error("NR4 requires kappa");
            kappa = *params.kappa;
            if (!(kappa > 1.0 / n) || !(kappa < 1.0))
                throw domain_error("NR4 kappa must lie in (1/n, 1)");
            cut = kappa * s;
        }
        if (needs_bands) {
            kendall.emplace(p.gen, n);
            const double lower = kind == EstimatorKind::nr1 ? s / n : cut;
            band_lo.resize(n);
            band_hi.resize(n);
            band_w.resize(n);
            for (int i = 0; i < n; ++i) {
                const auto& m = *p.marginals[i];
                band_w[i] = m.survival(lower) - m.survival(s);
                if (survival) {
                    band_lo[i] = m.survival(s);
                    band_hi[i] = m.survival(lower);
                } else {
                    band_lo[i] = m.cdf(lower);
                    band_hi[i] = m.cdf(s);
                }
            }
        }
        if (needs_level) {
            t_s.resize(n);
            for (int i = 0; i < n; ++i) t_s[i] = p.gen.phi_inverse(level_u(p, i, s));
        }
        if (needs_cut) {
            t_cut.resize(n);
            for (int i = 0; i < n; ++i) t_cut[i] = p.gen.phi_inverse(level_u(p, i, cut));
        }
    }
};

// Root of the monotone radius equation given the simplex point.
double radius_root(const TailProblem& p, std::span<const double> w) {
    const int n = p.dim();
    const bool surv = is_survival(p);
    const double s = p.s;
    auto eval = [&](double r) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = u_to_value(p, i, p.gen.phi(r * w[i]));
            total += v;
            if (total == kInf) break;
        }
        return total;
    };
    // copula mode: decreasing from +inf to 0; survival mode: increasing from 0.
    double lo = 0.0;
    double hi = 1.0;
    if (surv) {
        while (eval(hi) < s) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e307) throw numerical_error("solve_radius_root: bracket growth exhausted");
        }
    } else {
        while (eval(hi) > s) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e307) throw numerical_error("solve_radius_root: bracket growth exhausted");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = eval(mid);
        const bool go_right = surv ? (g < s) : (g > s);
        if (go_right)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double order_stat_over_w(std::span<const double> t, std::span<const double> w, OrderStat stat,
                         std::span<double> scratch) {
    const int n = static_cast<int>(t.size());
    for (int i = 0; i < n; ++i) scratch[i] = t[i] / w[i];
    return order_stat_of(scratch.first(n), stat);
}

// Radial interval mass sf(lo) - sf(hi); negative only when a capped endpoint
// crossed the other one (empty event) or from terminal rounding.
double radial_mass(const RadialCdf& radial, double lo, double hi, std::uint64_t* clamps) {
    const double diff = radial.sf(lo) - radial.sf(hi);
    if (diff < 0.0) {
        if (clamps) ++*clamps;
        return 0.0;
    }
    return diff;
}

double draw_nr1_impl(const DrawContext& ctx, RngStream& rng, Workspace& ws) {
    double value = ctx.max_tail;
    const int n = ctx.n;
    for (int i = 0; i < n; ++i) {
        if (!(ctx.band_lo[i] < ctx.band_hi[i])) continue;  // band collapsed in double precision
        sample_conditional_band(*ctx.kendall, i, ctx.band_lo[i], ctx.band_hi[i], rng, ws.u);
        double total = 0.0;
        double best = -kInf;
        int arg = -1;
        for (int j = 0; j < n; ++j) {
            const double v = u_to_value(ctx.p, j, ws.u[j]);
            total += v;
            if (v > best) {
                best = v;
                arg = j;
            }
        }
        if (total > ctx.s && arg == i) value += ctx.band_w[i];
    }
    return value;
}

double draw_nr2_impl(const DrawContext& ctx, RngStream& rng, Workspace& ws, std::uint64_t* clamps) {
    sample_simplex(ctx.n, rng, ws.w);
    double lo, hi;
    if (ctx.survival) {
        lo = radius_root(ctx.p, ws.w);
        hi = order_stat_over_w(ctx.t_s, ws.w, OrderStat::min, ws.ratio);
    } else {
        lo = order_stat_over_w(ctx.t_s, ws.w, OrderStat::max, ws.ratio);
        hi = radius_root(ctx.p, ws.w);
    }
    // L <= U holds analytically for NR2; only terminal rounding can invert it.
    return ctx.max_tail + radial_mass(*ctx.radial, lo, hi, clamps);
}

double draw_nr3_impl(const DrawContext& ctx, RngStream& rng, Workspace& ws, std::uint64_t* clamps) {
    const int n = ctx.n;
    sample_simplex(n, rng, ws.w);
    double lo, hi;
    if (ctx.survival) {
        const double root = radius_root(ctx.p, ws.w);
        const double cap = order_stat_over_w(ctx.t_cut, ws.w, OrderStat::second_min, ws.ratio);
        lo = std::max(root, cap);
        hi = order_stat_over_w(ctx.t_s, ws.w, OrderStat::min, ws.ratio);
    } else {
        const double root = radius_root(ctx.p, ws.w);
        const double cap = order_stat_over_w(ctx.t_cut, ws.w, OrderStat::second_max, ws.ratio);
        lo = order_stat_over_w(ctx.t_s, ws.w, OrderStat::max, ws.ratio);
        hi = std::min(root, cap);
    }
    const double part2 = radial_mass(*ctx.radial, lo, hi, clamps);

    double part1 = 0.0;
    for (int i = 0; i < n; ++i) {
        double t_others = 0.0;
        double total = 0.0;
        double best = -kInf;
        if (n == 2) {
            // one remaining coordinate: the 1-dimensional copula is uniform
            const double u = rng.uniform01();
            const int j = i == 0 ? 1 : 0;
            const double v = u_to_value(ctx.p, j, u);
            total = v;
            best = v;
            t_others = ctx.p.gen.phi_inverse(u);
        } else {
            sample_archimedean_mn(*ctx.radial_sub, rng, ws.usub);
            int idx = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double u = ws.usub[idx++];
                const double v = u_to_value(ctx.p, j, u);
                total += v;
                best = std::max(best, v);
                t_others += ctx.p.gen.phi_inverse(u);
            }
        }
        if (best <= ctx.cut) {
            const double rest = ctx.s - total;  // > 0 since best <= lambda*s, lambda < 1/n
            const double f_hi = cond_cdf_from_sums(ctx.p, i, t_others, ctx.s);
            const double f_lo = cond_cdf_from_sums(ctx.p, i, t_others, rest);
            part1 += std::max(f_hi - f_lo, 0.0);
        }
    }
    return ctx.max_tail + part1 + part2;
}

double draw_nr4_impl(const DrawContext& ctx, RngStream& rng, Workspace& ws, std::uint64_t* clamps) {
    const int n = ctx.n;
    double value = ctx.max_tail;
    // (a) indicator sum over the (kappa*s, s] band, as in NR1
    for (int i = 0; i < n; ++i) {
        if (!(ctx.band_lo[i] < ctx.band_hi[i])) continue;
        sample_conditional_band(*ctx.kendall, i, ctx.band_lo[i], ctx.band_hi[i], rng, ws.u);
        double total = 0.0;
        double best = -kInf;
        int arg = -1;
        for (int j = 0; j < n; ++j) {
            const double v = u_to_value(ctx.p, j, ws.u[j]);
            total += v;
            if (v > best) {
                best = v;
                arg = j;
            }
        }
        if (total > ctx.s && arg == i) value += ctx.band_w[i];
    }
    // (b) radial mass of {S > s, max <= kappa*s}, as in NR2 with the shifted bound
    sample_simplex(n, rng, ws.w);
    double lo, hi;
    if (ctx.survival) {
        lo = radius_root(ctx.p, ws.w);
        hi = order_stat_over_w(ctx.t_cut, ws.w, OrderStat::min, ws.ratio);
    } else {
        lo = order_stat_over_w(ctx.t_cut, ws.w, OrderStat::max, ws.ratio);
        hi = radius_root(ctx.p, ws.w);
    }
    value += radial_mass(*ctx.radial, lo, hi, clamps);
    return value;
}

double draw_plain_mc_impl(const DrawContext& ctx, RngStream& rng, Workspace& ws) {
    const int n = ctx.n;
    double total = 0.0;
    if (n == 1) {
        total = u_to_value(ctx.p, 0, rng.uniform01());
    } else {
        sample_archimedean_mn(*ctx.radial, rng, ws.u);
        for (int j = 0; j < n; ++j) total += u_to_value(ctx.p, j, ws.u[j]);
    }
    return total > ctx.s ? 1.0 : 0.0;
}

double draw_one(const DrawContext& ctx, RngStream& rng, Workspace& ws, std::uint64_t* clamps) {
    switch (ctx.kind) {
        case EstimatorKind::nr1: return draw_nr1_impl(ctx, rng, ws);
        case EstimatorKind::nr2: return draw_nr2_impl(ctx, rng, ws, clamps);
        case EstimatorKind::nr3: return draw_nr3_impl(ctx, rng, ws, clamps);
        case EstimatorKind::nr4: return draw_nr4_impl(ctx, rng, ws, clamps);
        case EstimatorKind::plain_mc: return draw_plain_mc_impl(ctx, rng, ws);
    }
    throw domain_error("unknown estimator kind");
}

struct KahanSum {
    double total = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = total + y;
        carry = (t - total) - y;
        total = t;
    }
};

struct BlockStat {
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t clamps = 0;
};

}  // namespace

const char* estimator_name(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::nr1: return "nr1";
        case EstimatorKind::nr2: return "nr2";
        case EstimatorKind::nr3: return "nr3";
        case EstimatorKind::nr4: return "nr4";
        case EstimatorKind::plain_mc: return "mc";
    }
    return "?";
}

double max_tail_prob(const TailProblem& p) {
    const int n = p.dim();
    if (!is_survival(p)) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            total += p.gen.phi_inverse(p.marginals[i]->cdf(p.s));
            if (total == kInf) break;
        }
        return p.gen.one_minus_phi(total);  // 1 - C(F_1(s),...,F_n(s)), no cancellation
    }
    // 1 - SF_C(u) as the inclusion-exclusion sum over nonempty subsets, which
    // keeps full relative precision when every u_i is tiny.
    if (n > 20) throw capability_error("max_tail_prob: dimension exceeds 20");
    std::array<double, 20> t;
    for (int i = 0; i < n; ++i) t[i] = p.gen.phi_inverse(p.marginals[i]->survival(p.s));
    double total = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double arg = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) arg += t[i];
        const double term = p.gen.phi(arg);
        total += (std::popcount(mask) % 2 == 1) ? term : -term;
    }
    return std::clamp(total, 0.0, 1.0);
}

double solve_radius_root(const TailProblem& p, std::span<const double> w) {
    if (static_cast<int>(w.size()) != p.dim())
        throw domain_error("solve_radius_root: simplex point has wrong dimension");
    return radius_root(p, w);
}

double closed_radius_bound(const TailProblem& p, std::span<const double> w, double level,
                           OrderStat stat) {
    const int n = p.dim();
    if (static_cast<int>(w.size()) != n)
        throw domain_error("closed_radius_bound: simplex point has wrong dimension");
    if (!(level > 0.0) || level > p.s)
        throw domain_error("closed_radius_bound: level must lie in (0, s]");
    std::array<double, 32> vals;
    if (n > 32) throw capability_error("closed_radius_bound: dimension exceeds 32");
    for (int i = 0; i < n; ++i) vals[i] = p.gen.phi_inverse(level_u(p, i, level)) / w[i];
    return order_stat_of(std::span<const double>(vals.data(), n), stat);
}

double conditional_component_cdf(const TailProblem& p, int i, std::span<const double> others,
                                 double x) {
    const int n = p.dim();
    if (i < 0 || i >= n) throw domain_error("conditional_component_cdf: index out of range");
    if (static_cast<int>(others.size()) != n - 1)
        throw domain_error("conditional_component_cdf: expected n-1 conditioning values");
    double t_others = 0.0;
    int idx = 0;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        t_others += p.gen.phi_inverse(level_u(p, j, others[idx++]));
    }
    return cond_cdf_from_sums(p, i, t_others, x);
}

double draw_nr1(const TailProblem& p, RngStream& rng) {
    DrawContext ctx(p, EstimatorKind::nr1, {});
    Workspace ws(p.dim());
    return draw_nr1_impl(ctx, rng, ws);
}

double draw_nr2(const TailProblem& p, RngStream& rng) {
    DrawContext ctx(p, EstimatorKind::nr2, {});
    Workspace ws(p.dim());
    return draw_nr2_impl(ctx, rng, ws, nullptr);
}

double draw_nr3(const TailProblem& p, double lambda, RngStream& rng) {
    EstimatorParams params;
    params.lambda = lambda;
    DrawContext ctx(p, EstimatorKind::nr3, params);
    Workspace ws(p.dim());
    return draw_nr3_impl(ctx, rng, ws, nullptr);
}

double draw_nr4(const TailProblem& p, double kappa, RngStream& rng) {
    EstimatorParams params;
    params.kappa = kappa;
    DrawContext ctx(p, EstimatorKind::nr4, params);
    Workspace ws(p.dim());
    return draw_nr4_impl(ctx, rng, ws, nullptr);
}

double draw_plain_mc(const TailProblem& p, RngStream& rng) {
    DrawContext ctx(p, EstimatorKind::plain_mc, {});
    Workspace ws(p.dim());
    return draw_plain_mc_impl(ctx, rng, ws);
}

double EstimatorReport::std_error() const {
    return reps > 0 ? std::sqrt(variance / static_cast<double>(reps)) : 0.0;
}

int resolve_workers(int requested) {
    if (requested >= 1) return requested;
    if (const char* env = std::getenv("TAILSUM_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

EstimatorReport run_replications(const TailProblem& p, EstimatorKind kind,
                                 const EstimatorParams& params, std::uint64_t reps,
                                 std::uint64_t seed, int workers) {
    if (reps < 2) throw domain_error("run_replications: need at least 2 replications");
    const DrawContext ctx(p, kind, params);
    const std::uint64_t nblocks = (reps + kBlock - 1) / kBlock;
    std::vector<BlockStat> partials(nblocks);

    auto run_block = [&](std::uint64_t b) {
        RngStream rng(seed, b);
        Workspace ws(ctx.n);
        const std::uint64_t first = b * kBlock;
        const std::uint64_t last = std::min(reps, first + kBlock);
        BlockStat st;
        for (std::uint64_t k = first; k < last; ++k) {
            const double z = draw_one(ctx, rng, ws, &st.clamps);
            st.sum += z;
            st.sumsq += z * z;
        }
        partials[b] = st;
    };

    const int nworkers = resolve_workers(workers);
    if (nworkers <= 1) {
        // serial reference path; identical partials and merge order as below
        for (std::uint64_t b = 0; b < nblocks; ++b) run_block(b);
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nworkers)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b)
            run_block(static_cast<std::uint64_t>(b));
#else
        for (std::uint64_t b = 0; b < nblocks; ++b) run_block(b);
#endif
    }

    KahanSum sum, sumsq;
    std::uint64_t clamps = 0;
    for (const auto& st : partials) {  // fixed merge order: block index
        sum.add(st.sum);
        sumsq.add(st.sumsq);
        clamps += st.clamps;
    }
    const double nrep = static_cast<double>(reps);
    EstimatorReport rep;
    rep.reps = reps;
    rep.seed = seed;
    rep.mean = sum.total / nrep;
    const double second_moment = sumsq.total / nrep;
    rep.variance = std::max(0.0, (second_moment - rep.mean * rep.mean) * nrep / (nrep - 1.0));
    rep.cv = rep.mean > 0.0 ? std::sqrt(rep.variance) / rep.mean : 0.0;
    rep.rms_re = rep.mean > 0.0 ? std::sqrt(second_moment) / rep.mean : 0.0;
    rep.clamp_rate = static_cast<double>(clamps) / nrep;
    return rep;
}

std::vector<double> default_tuning_grid(EstimatorKind kind, int n) {
    std::vector<double> grid;
    grid.reserve(9);
    if (kind == EstimatorKind::nr3) {
        for (int k = 1; k <= 9; ++k) grid.push_back(static_cast<double>(k) / (10.0 * n));
    } else if (kind == EstimatorKind::nr4) {
        const double lo = 1.0 / n;
        for (int k = 1; k <= 9; ++k) grid.push_back(lo + k * (1.0 - lo) / 10.0);
    } else {
        throw domain_error("only NR3 and NR4 have a tunable parameter");
    }
    return grid;
}

double tune_parameter(const TailProblem& p, EstimatorKind kind, std::span<const double> grid,
                      std::uint64_t pilot_reps, std::uint64_t seed) {
    if (grid.empty()) throw domain_error("tune_parameter: empty grid");
    if (kind != EstimatorKind::nr3 && kind != EstimatorKind::nr4)
        throw domain_error("tune_parameter: only NR3 and NR4 have a tunable parameter");
    const int n = p.dim();
    const double lo = kind == EstimatorKind::nr3 ? 0.0 : 1.0 / n;
    const double hi = kind == EstimatorKind::nr3 ? 1.0 / n : 1.0;
    const double mid = 0.5 * (lo + hi);
    for (double g : grid)
        if (!(g > lo) || !(g < hi))
            throw domain_error("tune_parameter: grid value outside the legal interval");

    double best = grid[0];
    double best_var = kInf;
    for (double g : grid) {
        EstimatorParams params;
        if (kind == EstimatorKind::nr3)
            params.lambda = g;
        else
            params.kappa = g;
        const auto rep = run_replications(p, kind, params, pilot_reps, seed);
        const bool better = rep.variance < best_var ||
                            (rep.variance == best_var &&
                             std::abs(g - mid) < std::abs(best - mid));
        if (better) {
            best = g;
            best_var = rep.variance;
        }
    }
    return best;
}

}  // namespace tailsum
