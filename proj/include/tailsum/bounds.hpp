#pragma once

#include "tailsum/problem.hpp"

#include <span>

namespace tailsum {

// Deterministic bracket of z(s) at grid refinement m: 2^m intervals per axis
// for n = 2, 3^m for n = 3. Refining m never widens the bracket.
struct BoundsPair {
    double lower = 0.0;
    double upper = 1.0;
    int m = 0;
};

// Pr(X_1 <= x_1, ..., X_n <= x_n) = C(F_1(x_1),...,F_n(x_n)). Copula mode only.
double joint_cdf_x(const TailProblem& p, std::span<const double> x);

// Pr(Y_1 > y_1, ..., Y_n > y_n) = C(SF_1(y_1),...,SF_n(y_n)). Survival mode only.
double joint_sf_y(const TailProblem& p, std::span<const double> y);

struct BoundsOptions {
    bool allow_large_m = false;  // lift the n = 3 cost guard (m <= 10)
    int workers = 0;             // 0 = default; 1 = serial reference kernel
};

// Rectangle-decomposition bounds on z(s) for n in {2,3}. Copula mode sums the
// joint-CDF forms and returns (1 - upper CDF bound, 1 - lower CDF bound);
// survival mode evaluates the joint-survival rewrite directly, which keeps
// full relative precision when z(s) is tiny. All partial sums are compensated.
BoundsPair bounds_tail(const TailProblem& p, int m, const BoundsOptions& opts = {});

}  // namespace tailsum
