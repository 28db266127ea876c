#pragma once

#include "tailsum/problem.hpp"
#include "tailsum/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace tailsum {

enum class EstimatorKind { nr1, nr2, nr3, nr4, plain_mc };

const char* estimator_name(EstimatorKind k);

struct EstimatorParams {
    std::optional<double> lambda;  // NR3 split point, in (0, 1/n)
    std::optional<double> kappa;   // NR4 split point, in (1/n, 1)
};

// Pr(max > s): 1 - C(F_1(s),...,F_n(s)) in copula mode,
// 1 - SF_C(SF_1(s),...,SF_n(s)) in survival mode. Exact (no simulation).
double max_tail_prob(const TailProblem& p);

// Root of sum_i F_i^-1(Phi(r w_i)) = s (copula mode; the sum is strictly
// decreasing in r) or of sum_i SF_i^-1(Phi(r w_i)) = s (survival mode;
// strictly increasing). Bracketed bisection to relative tolerance 1e-10.
double solve_radius_root(const TailProblem& p, std::span<const double> w);

enum class OrderStat { min, second_min, second_max, max };

// The requested order statistic of { Phi^-1(F_i(level)) / w_i } (copula mode)
// or { Phi^-1(SF_i(level)) / w_i } (survival mode); level is s, lambda*s or
// kappa*s depending on the caller.
double closed_radius_bound(const TailProblem& p, std::span<const double> w, double level,
                           OrderStat stat);

// Conditional CDF of component i given the realized values of the others:
//   copula mode:   Phi^(n-1)(t(x) + T_others) / Phi^(n-1)(T_others)
//   survival mode: 1 - the same ratio with survival transforms,
// where t(.) maps a value through its marginal and the generator inverse.
double conditional_component_cdf(const TailProblem& p, int i, std::span<const double> others,
                                 double x);

// Single realizations of the four conditional estimators and the plain
// Monte Carlo baseline. All draws are nonnegative and unbiased for z(s).
double draw_nr1(const TailProblem& p, RngStream& rng);
double draw_nr2(const TailProblem& p, RngStream& rng);
double draw_nr3(const TailProblem& p, double lambda, RngStream& rng);
double draw_nr4(const TailProblem& p, double kappa, RngStream& rng);
double draw_plain_mc(const TailProblem& p, RngStream& rng);

struct EstimatorReport {
    double mean = 0.0;
    double variance = 0.0;  // sample variance of the draws
    double cv = 0.0;        // sqrt(variance) / mean
    double rms_re = 0.0;    // sqrt(E[Z^2]) / mean, >= 1 by Jensen
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    double clamp_rate = 0.0;  // fraction of draws whose capped radial term clamped at 0

    double std_error() const;  // sqrt(variance / reps)
};

// Streaming replication engine. Draws are partitioned into fixed blocks of
// 1024, each block owning RngStream(seed, block_index); block partials are
// merged in block order with compensated summation, so the report is
// bit-identical for every worker count (workers = 1 runs the serial
// reference loop, workers = 0 picks the TAILSUM_WORKERS / OpenMP default).
EstimatorReport run_replications(const TailProblem& p, EstimatorKind kind,
                                 const EstimatorParams& params, std::uint64_t reps,
                                 std::uint64_t seed, int workers = 0);

// Pilot-run grid search for lambda (NR3) or kappa (NR4): smallest pilot
// sample variance wins, ties broken toward the midpoint of the legal
// interval. Every grid point reuses the same seed (common random numbers).
double tune_parameter(const TailProblem& p, EstimatorKind kind, std::span<const double> grid,
                      std::uint64_t pilot_reps, std::uint64_t seed);

// Default 9-point tuning grid inside the legal interval of the estimator.
std::vector<double> default_tuning_grid(EstimatorKind kind, int n);

// Worker count resolution: explicit > TAILSUM_WORKERS env > OpenMP default.
int resolve_workers(int requested);

}  // namespace tailsum
