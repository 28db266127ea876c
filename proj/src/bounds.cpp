#include "tailsum/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tailsum/errors.hpp"
#include "tailsum/estimators.hpp"  // resolve_workers

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tailsum {

namespace {

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

// Phi^-1 of the marginal transform on the uniform grid {0, s/N, ..., s}.
// Copula mode feeds F_i (so index 0 maps to +inf and drops the cell to 0);
// survival mode feeds SF_i (index 0 maps to 0 and drops the coordinate).
std::vector<double> grid_transform(const TailProblem& p, int i, std::int64_t cells) {
    const double step = p.s / static_cast<double>(cells);
    std::vector<double> t(cells + 1);
    const bool surv = p.mode == Mode::survival_y;
    const auto& m = *p.marginals[i];
    const auto& gen = p.gen;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t j = 0; j <= cells; ++j) {
        const double x = static_cast<double>(j) * step;
        t[j] = gen.phi_inverse(surv ? m.survival(x) : m.cdf(x));
    }
    return t;
}

// Chunked deterministic reduction: partials are produced per fixed chunk
// (possibly in parallel) and merged in chunk order, so the result does not
// depend on the worker count.
template <typename RowSum>
double ordered_chunk_sum(std::int64_t first, std::int64_t last, std::int64_t chunk, int workers,
                         RowSum&& row_sum) {
    const std::int64_t count = last - first;
    if (count <= 0) return 0.0;
    const std::int64_t nchunks = (count + chunk - 1) / chunk;
    std::vector<double> partials(nchunks);
    auto run_chunk = [&](std::int64_t c) {
        const std::int64_t lo = first + c * chunk;
        const std::int64_t hi = std::min(last, lo + chunk);
        KahanSum acc;
        for (std::int64_t i = lo; i < hi; ++i) acc.add(row_sum(i));
        partials[c] = acc.total;
    };
    if (workers <= 1) {
        for (std::int64_t c = 0; c < nchunks; ++c) run_chunk(c);
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (std::int64_t c = 0; c < nchunks; ++c) run_chunk(c);
#else
        for (std::int64_t c = 0; c < nchunks; ++c) run_chunk(c);
#endif
    }
    KahanSum acc;
    for (double v : partials) acc.add(v);
    return acc.total;
}

BoundsPair bounds_n2(const TailProblem& p, int m, int workers) {
    const std::int64_t N = std::int64_t{1} << m;
    const auto T1 = grid_transform(p, 0, N);
    const auto T2 = grid_transform(p, 1, N);
    const auto& gen = p.gen;
    const double* t1 = T1.data();
    const double* t2 = T2.data();
    constexpr std::int64_t kChunk = 16384;

    BoundsPair out;
    out.m = m;
    if (p.mode == Mode::copula_x) {
        // A^(l,m) and A^(u,m) on the CDF of X; tail bracket is the complement.
        const double a_lo = ordered_chunk_sum(1, N, kChunk, workers, [&](std::int64_t i) {
            return gen.phi(t1[i] + t2[N - i]) - gen.phi(t1[i - 1] + t2[N - i]);
        });
        const double a_up = ordered_chunk_sum(1, N + 1, kChunk, workers, [&](std::int64_t i) {
            return gen.phi(t1[i] + t2[N + 1 - i]) - gen.phi(t1[i - 1] + t2[N + 1 - i]);
        });
        out.lower = 1.0 - a_up;
        out.upper = 1.0 - a_lo;
    } else {
        // B^(l,m) and B^(u,m) directly on the joint survival of Y.
        const double b_up = ordered_chunk_sum(1, N, kChunk, workers, [&](std::int64_t i) {
            return gen.phi(t1[i - 1] + t2[N - i]) - gen.phi(t1[i] + t2[N - i]);
        });
        const double b_lo = ordered_chunk_sum(1, N + 1, kChunk, workers, [&](std::int64_t i) {
            return gen.phi(t1[i - 1] + t2[N + 1 - i]) - gen.phi(t1[i] + t2[N + 1 - i]);
        });
        out.lower = b_lo + gen.phi(t1[N]);          // + SF_Y(s, 0)
        out.upper = b_up + gen.phi(t1[N - 1]);      // + SF_Y((N-1)s/N, 0)
    }
    return out;
}

BoundsPair bounds_n3(const TailProblem& p, int m, int workers) {
    std::int64_t N = 1;
    for (int i = 0; i < m; ++i) N *= 3;
    const auto T1 = grid_transform(p, 0, N);
    const auto T2 = grid_transform(p, 1, N);
    const auto T3 = grid_transform(p, 2, N);
    const auto& gen = p.gen;
    const double* t1 = T1.data();
    const double* t2 = T2.data();
    const double* t3 = T3.data();

    // Four-corner difference of the grid function at cell (i1, i2) and plane k.
    auto cell = [&](std::int64_t i1, std::int64_t i2, std::int64_t k) {
        const double base = t3[k];
        return gen.phi(t1[i1] + t2[i2] + base) - gen.phi(t1[i1 - 1] + t2[i2] + base) -
               gen.phi(t1[i1] + t2[i2 - 1] + base) + gen.phi(t1[i1 - 1] + t2[i2 - 1] + base);
    };
    // Double sums organized by i1 rows; each row is one reduction chunk.
    auto lower_form = [&]() {
        return ordered_chunk_sum(1, N - 1, 1, workers, [&](std::int64_t i1) {
            KahanSum row;
            for (std::int64_t i2 = 1; i2 <= N - 1 - i1; ++i2) row.add(cell(i1, i2, N - i1 - i2));
            return row.total;
        });
    };
    auto upper_form = [&]() {
        return ordered_chunk_sum(1, N + 1, 1, workers, [&](std::int64_t i1) {
            KahanSum row;
            for (std::int64_t i2 = 1; i2 <= N + 1 - i1; ++i2)
                row.add(cell(i1, i2, N + 2 - i1 - i2));
            return row.total;
        });
    };

    BoundsPair out;
    out.m = m;
    if (p.mode == Mode::copula_x) {
        out.lower = 1.0 - upper_form();
        out.upper = 1.0 - lower_form();
    } else {
        // Boundary rows restore the probability mass the four-corner
        // differences drop when rewriting the CDF sums in survival terms.
        KahanSum b_up;
        b_up.add(lower_form());
        for (std::int64_t i1 = 1; i1 <= N - 2; ++i1)
            b_up.add(gen.phi(t1[i1 - 1] + t2[N - 1 - i1]) - gen.phi(t1[i1] + t2[N - 1 - i1]));
        b_up.add(gen.phi(t1[N - 2]));
        KahanSum b_lo;
        b_lo.add(upper_form());
        for (std::int64_t i1 = 1; i1 <= N; ++i1)
            b_lo.add(gen.phi(t1[i1 - 1] + t2[N + 1 - i1]) - gen.phi(t1[i1] + t2[N + 1 - i1]));
        b_lo.add(gen.phi(t1[N]));
        out.lower = b_lo.total;
        out.upper = b_up.total;
    }
    return out;
}

}  // namespace

double joint_cdf_x(const TailProblem& p, std::span<const double> x) {
    if (p.mode != Mode::copula_x)
        throw domain_error("joint_cdf_x: problem is not in copula mode");
    if (static_cast<int>(x.size()) != p.dim())
        throw domain_error("joint_cdf_x: wrong dimension");
    double total = 0.0;
    for (int i = 0; i < p.dim(); ++i) {
        total += p.gen.phi_inverse(p.marginals[i]->cdf(x[i]));
        if (total == std::numeric_limits<double>::infinity()) return 0.0;
    }
    return p.gen.phi(total);
}

double joint_sf_y(const TailProblem& p, std::span<const double> y) {
    if (p.mode != Mode::survival_y)
        throw domain_error("joint_sf_y: problem is not in survival mode");
    if (static_cast<int>(y.size()) != p.dim())
        throw domain_error("joint_sf_y: wrong dimension");
    double total = 0.0;
    for (int i = 0; i < p.dim(); ++i) total += p.gen.phi_inverse(p.marginals[i]->survival(y[i]));
    return p.gen.phi(total);
}

BoundsPair bounds_tail(const TailProblem& p, int m, const BoundsOptions& opts) {
    const int n = p.dim();
    if (n != 2 && n != 3)
        throw capability_error("bounds_tail: rectangle bounds are implemented for n in {2,3}");
    if (m < 1) throw domain_error("bounds_tail: m must be >= 1");
    const int guard = n == 2 ? 22 : 10;
    if (m > guard && !opts.allow_large_m)
        throw capability_error("bounds_tail: m = " + std::to_string(m) + " exceeds the n = " +
                               std::to_string(n) + " cost guard (" + std::to_string(guard) +
                               "); pass the override flag to force it");
    const int workers = resolve_workers(opts.workers);
    BoundsPair out = n == 2 ? bounds_n2(p, m, workers) : bounds_n3(p, m, workers);
    out.lower = std::clamp(out.lower, 0.0, 1.0);
    out.upper = std::clamp(out.upper, 0.0, 1.0);
    out.upper = std::max(out.upper, out.lower);
    return out;
}

}  // namespace tailsum
