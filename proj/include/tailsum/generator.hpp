#pragma once

#include <limits>
#include <span>
#include <vector>

namespace tailsum {

enum class Family { clayton, gumbel };

const char* family_name(Family f);

// Archimedean generator Phi with its inverse and higher derivatives.
//
// Clayton (theta > 0):   Phi(t) = (1 + t/theta)^-theta
// Gumbel  (b in (0,1)):  Phi(t) = exp(-t^b)
//
// Both families are completely monotone, so (-1)^k Phi^(k)(t) > 0 for all
// orders; every |Phi^(k)| is evaluated in log space so that arguments up to
// ~1e300 (which arise for small Clayton theta at extreme thresholds) neither
// overflow nor lose the tail.
class ArchimedeanGenerator {
public:
    ArchimedeanGenerator(Family family, double param);

    Family family() const { return family_; }
    double param() const { return param_; }

    // Highest supported derivative order: unbounded for Clayton (closed form
    // for every k), 4 for Gumbel (closed forms up to order four).
    int max_order() const { return max_order_; }

    double phi(double t) const;

    // 1 - Phi(t), accurate for small t where Phi is close to 1.
    double one_minus_phi(double t) const;

    // Generalized inverse; phi_inverse(1) = 0, phi_inverse(0) = +infinity
    // (documented sentinel; root solvers bracket around it).
    double phi_inverse(double u) const;

    // k-th derivative Phi^(k)(t), k = 0 meaning Phi itself.
    double phi_deriv(int k, double t) const;

    // log |Phi^(k)(t)|; the sign is (-1)^k. Safe over the whole double range.
    double log_abs_phi_deriv(int k, double t) const;

    // C(u) = Phi(sum Phi^-1(u_i)). A zero component forces 0; ones drop out.
    double copula_cdf(std::span<const double> u) const;

    // Pr(U_1 > u_1, ..., U_n > u_n) by inclusion-exclusion over the 2^n
    // subsets; n <= 20, result clamped to [0,1] against cancellation.
    double survival_prob(std::span<const double> u) const;

private:
    Family family_;
    double param_;
    int max_order_;
};

// Invert Kendall's tau: Clayton theta = (1-tau)/(2*tau), Gumbel b = 1 - tau.
double tau_to_param(Family family, double tau);

}  // namespace tailsum
