#pragma once

#include "tailsum/generator.hpp"

#include <vector>

namespace tailsum {

// Distribution of the radial part R in the l1-norm symmetric representation
// (Phi^-1(U_1),...,Phi^-1(U_n)) = R * W:
//
//   SF_R(x) = sum_{j=0}^{n-1} (-1)^j x^j / j! * Phi^(j)(x)
//
// Complete monotonicity makes every summand positive, so the survival form
// has no cancellation; each term is assembled in log space and is <= 1.
class RadialCdf {
public:
    RadialCdf(ArchimedeanGenerator gen, int dim);

    const ArchimedeanGenerator& generator() const { return gen_; }
    int dim() const { return dim_; }

    double cdf(double x) const;
    double sf(double x) const;

private:
    ArchimedeanGenerator gen_;
    int dim_;
    std::vector<double> log_fact_;  // log j! for j < dim
};

// Conditional Kendall distribution F_{Z|U1} of Z = C(U) given the first
// coordinate, plus the per-coordinate step of the Kendall-inverse sampler.
class KendallConditional {
public:
    KendallConditional(ArchimedeanGenerator gen, int dim);

    const ArchimedeanGenerator& generator() const { return gen_; }
    int dim() const { return dim_; }

    // F_{Z|U1}(z | u1) = (Phi^-1)'(u1) sum_{j=0}^{n-2} (-1)^j/j!
    //                    (Phi^-1(z) - Phi^-1(u1))^j Phi^(j+1)(Phi^-1(z)).
    // Returns 0 for z <= 0 and 1 for z >= u1.
    double cond_cdf(double z, double u1) const;

    // Quantile of cond_cdf(. | u1) at level v, by bisection on (0, u1)
    // (relative tolerance 1e-12 in z, at most 200 halvings).
    double invert(double u1, double v) const;

private:
    ArchimedeanGenerator gen_;
    int dim_;
    std::vector<double> log_fact_;
};

// Step 3 of the Kendall-inverse sampler: the conditional draw
//   u_j = Phi((1 - v^(1/(n-j))) (Phi^-1(z) - sum_{k<j} Phi^-1(u_k))).
// The j = n exponent is undefined; the last coordinate is the forced
// residual Phi(z_inv - partial_sum), which is the formula's limit.
double kendall_cond_u_step(const ArchimedeanGenerator& gen, int n, int j, double v,
                           double z_inv, double partial_sum);

}  // namespace tailsum
