#include "tailsum/generator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "tailsum/errors.hpp"

namespace tailsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -log(u) with full relative accuracy near u = 1 (u - 1 is exact there).
double neg_log(double u) {
    return u >= 0.5 ? -std::log1p(u - 1.0) : -std::log(u);
}

}  // namespace

const char* family_name(Family f) {
    return f == Family::clayton ? "clayton" : "gumbel";
}

ArchimedeanGenerator::ArchimedeanGenerator(Family family, double param)
    : family_(family), param_(param) {
    if (!(param > 0.0) || !std::isfinite(param))
        throw domain_error("generator parameter must be positive and finite");
    if (family == Family::gumbel) {
        if (!(param < 1.0))
            throw domain_error("gumbel parameter b must lie in (0,1)");
        max_order_ = 4;
    } else {
        max_order_ = std::numeric_limits<int>::max();
    }
}

double ArchimedeanGenerator::phi(double t) const {
    if (t < 0.0 || std::isnan(t)) throw domain_error("phi: t must be >= 0");
    if (t == kInf) return 0.0;
    if (family_ == Family::clayton)
        return std::exp(-param_ * std::log1p(t / param_));
    return std::exp(-std::pow(t, param_));
}

double ArchimedeanGenerator::one_minus_phi(double t) const {
    if (t < 0.0 || std::isnan(t)) throw domain_error("one_minus_phi: t must be >= 0");
    if (t == kInf) return 1.0;
    if (family_ == Family::clayton)
        return -std::expm1(-param_ * std::log1p(t / param_));
    return -std::expm1(-std::pow(t, param_));
}

double ArchimedeanGenerator::phi_inverse(double u) const {
    if (!(u >= 0.0) || u > 1.0) throw domain_error("phi_inverse: u must lie in (0,1]");
    if (u == 0.0) return kInf;
    if (family_ == Family::clayton) {
        // theta * (u^(-1/theta) - 1) = theta * expm1(-log(u)/theta)
        return param_ * std::expm1(neg_log(u) / param_);
    }
    return std::pow(neg_log(u), 1.0 / param_);
}

double ArchimedeanGenerator::log_abs_phi_deriv(int k, double t) const {
    if (k < 0) throw domain_error("log_abs_phi_deriv: k must be >= 0");
    if (k > max_order_)
        throw capability_error(std::string(family_name(family_)) +
                               " generator supplies derivatives up to order " +
                               std::to_string(max_order_));
    if (t < 0.0 || std::isnan(t)) throw domain_error("log_abs_phi_deriv: t must be >= 0");

    if (family_ == Family::clayton) {
        // |Phi^(k)(t)| = prod_{j=1}^{k-1}(1 + j/theta) * (1 + t/theta)^(-theta-k)
        double pref = 0.0;
        for (int j = 1; j < k; ++j) pref += std::log1p(static_cast<double>(j) / param_);
        return pref - (param_ + k) * std::log1p(t / param_);
    }

    // Gumbel: |Phi^(k)(t)| = exp(-t^b) * sum_j c_j t^(j*b - k) with all c_j > 0.
    const double b = param_;
    double coef[4];
    int nterms = 0;
    switch (k) {
        case 0:
            return -std::pow(t, b);
        case 1:
            coef[0] = b;
            nterms = 1;
            break;
        case 2:
            coef[0] = b * (1.0 - b);
            coef[1] = b * b;
            nterms = 2;
            break;
        case 3:
            coef[0] = b * (1.0 - b) * (2.0 - b);
            coef[1] = 3.0 * b * b * (1.0 - b);
            coef[2] = b * b * b;
            nterms = 3;
            break;
        case 4:
            coef[0] = b * (1.0 - b) * (2.0 - b) * (3.0 - b);
            coef[1] = b * b * (1.0 - b) * (11.0 - 7.0 * b);
            coef[2] = 6.0 * b * b * b * (1.0 - b);
            coef[3] = b * b * b * b;
            nterms = 4;
            break;
        default:
            throw capability_error("gumbel derivatives available up to order 4");
    }
    if (t == 0.0) return kInf;  // t^(b-k) diverges at the origin for b < 1
    const double logt = std::log(t);
    double lt[4];
    double m = -kInf;
    for (int j = 0; j < nterms; ++j) {
        lt[j] = std::log(coef[j]) + ((j + 1) * b - k) * logt;
        m = std::max(m, lt[j]);
    }
    if (m == -kInf) return -kInf;
    double s = 0.0;
    for (int j = 0; j < nterms; ++j) s += std::exp(lt[j] - m);
    return -std::pow(t, b) + m + std::log(s);
}

double ArchimedeanGenerator::phi_deriv(int k, double t) const {
    if (k == 0) return phi(t);
    const double la = log_abs_phi_deriv(k, t);
    const double mag = std::exp(la);
    return (k % 2 == 0) ? mag : -mag;
}

double ArchimedeanGenerator::copula_cdf(std::span<const double> u) const {
    double total = 0.0;
    for (double ui : u) {
        if (!(ui >= 0.0) || ui > 1.0)
            throw domain_error("copula_cdf: components must lie in [0,1]");
        if (ui == 0.0) return 0.0;
        total += phi_inverse(ui);
    }
    return phi(total);
}

double ArchimedeanGenerator::survival_prob(std::span<const double> u) const {
    const int n = static_cast<int>(u.size());
    if (n > 20) throw capability_error("survival_prob: dimension exceeds 20 (2^n terms)");
    std::vector<double> t(u.size());
    for (int i = 0; i < n; ++i) {
        if (!(u[i] >= 0.0) || u[i] > 1.0)
            throw domain_error("survival_prob: components must lie in [0,1]");
        t[i] = phi_inverse(u[i]);
    }
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double arg = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) arg += t[i];
        const double term = phi(arg);
        total += (std::popcount(mask) % 2 == 0) ? term : -term;
    }
    return std::clamp(total, 0.0, 1.0);
}

double tau_to_param(Family family, double tau) {
    if (!(tau > 0.0) || !(tau < 1.0)) throw domain_error("tau must lie in (0,1)");
    if (family == Family::clayton) return (1.0 - tau) / (2.0 * tau);
    return 1.0 - tau;
}

}  // namespace tailsum
