#include "tailsum/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailsum/errors.hpp"

namespace tailsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_factorials(int count) {
    std::vector<double> lf(count, 0.0);
    for (int j = 2; j < count; ++j) lf[j] = lf[j - 1] + std::log(static_cast<double>(j));
    return lf;
}

}  // namespace

RadialCdf::RadialCdf(ArchimedeanGenerator gen, int dim)
    : gen_(gen), dim_(dim), log_fact_(log_factorials(std::max(dim, 1))) {
    if (dim < 2) throw domain_error("RadialCdf: dimension must be >= 2");
    if (dim - 1 > gen_.max_order())
        throw capability_error("RadialCdf: generator lacks derivatives up to order " +
                               std::to_string(dim - 1));
}

double RadialCdf::sf(double x) const {
    if (x < 0.0 || std::isnan(x)) throw domain_error("RadialCdf: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x == kInf) return 0.0;
    const double logx = std::log(x);
    double total = 0.0;
    for (int j = 0; j < dim_; ++j) {
        const double lt = j * logx - log_fact_[j] + gen_.log_abs_phi_deriv(j, x);
        total += std::exp(lt);
    }
    return std::clamp(total, 0.0, 1.0);
}

double RadialCdf::cdf(double x) const {
    if (x == 0.0) return 0.0;
    return std::clamp(1.0 - sf(x), 0.0, 1.0);
}

KendallConditional::KendallConditional(ArchimedeanGenerator gen, int dim)
    : gen_(gen), dim_(dim), log_fact_(log_factorials(std::max(dim - 1, 1))) {
    if (dim < 2) throw domain_error("KendallConditional: dimension must be >= 2");
    if (dim - 1 > gen_.max_order())
        throw capability_error("KendallConditional: generator lacks derivatives up to order " +
                               std::to_string(dim - 1));
}

double KendallConditional::cond_cdf(double z, double u1) const {
    if (!(u1 > 0.0) || !(u1 < 1.0)) throw domain_error("cond_cdf: u1 must lie in (0,1)");
    if (z <= 0.0) return 0.0;
    if (z >= u1) return 1.0;
    const double big = gen_.phi_inverse(z);   // T >= c since z < u1
    const double c = gen_.phi_inverse(u1);
    if (big == kInf) return 0.0;
    const double gap = std::max(big - c, 0.0);
    const double log_gap = gap > 0.0 ? std::log(gap) : -kInf;
    // (Phi^-1)'(u1) = 1 / Phi'(c); all summands are positive and <= 1.
    const double log_pref = -gen_.log_abs_phi_deriv(1, c);
    double total = 0.0;
    for (int j = 0; j <= dim_ - 2; ++j) {
        double lt = log_pref - log_fact_[j] + gen_.log_abs_phi_deriv(j + 1, big);
        if (j > 0) {
            if (gap == 0.0) break;
            lt += j * log_gap;
        }
        total += std::exp(lt);
    }
    return std::clamp(total, 0.0, 1.0);
}

double KendallConditional::invert(double u1, double v) const {
    if (!(u1 > 0.0) || !(u1 < 1.0)) throw domain_error("invert: u1 must lie in (0,1)");
    if (!(v > 0.0) || !(v < 1.0)) throw domain_error("invert: v must lie in (0,1)");
    double lo = 0.0;
    double hi = u1;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cond_cdf(mid, u1) < v)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double kendall_cond_u_step(const ArchimedeanGenerator& gen, int n, int j, double v,
                           double z_inv, double partial_sum) {
    if (j < 2 || j > n) throw domain_error("kendall_cond_u_step: j must lie in [2,n]");
    if (partial_sum > z_inv * (1.0 + 1e-9) + 1e-300)
        throw numerical_error("kendall_cond_u_step: partial sum exceeds Phi^-1(z)");
    const double rem = std::max(z_inv - partial_sum, 0.0);
    if (j == n) return gen.phi(rem);
    if (!(v > 0.0) || !(v < 1.0)) throw domain_error("kendall_cond_u_step: v must lie in (0,1)");
    const double frac = 1.0 - std::pow(v, 1.0 / static_cast<double>(n - j));
    return gen.phi(frac * rem);
}

}  // namespace tailsum
