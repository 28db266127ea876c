#pragma once

#include <memory>
#include <string>
#include <vector>

namespace tailsum {

// Regularly varying marginal distribution on [0, infinity). The four
// transforms are the only surface the estimators and bounds touch.
class Marginal {
public:
    virtual ~Marginal() = default;

    virtual double cdf(double x) const = 0;
    virtual double survival(double x) const = 0;
    // quantile(p) = F^-1(p); quantile(1) = +infinity sentinel.
    virtual double quantile(double p) const = 0;
    // survival_quantile(q) = SF^-1(q); survival_quantile(0) = +infinity sentinel.
    virtual double survival_quantile(double q) const = 0;
    virtual double tail_index() const = 0;
};

// Pareto(alpha, 1): survival(x) = (1+x)^-alpha for x >= 0.
class ParetoMarginal final : public Marginal {
public:
    explicit ParetoMarginal(double alpha);

    double alpha() const { return alpha_; }

    double cdf(double x) const override;
    double survival(double x) const override;
    double quantile(double p) const override;
    double survival_quantile(double q) const override;
    double tail_index() const override { return alpha_; }

private:
    double alpha_;
};

using MarginalPtr = std::shared_ptr<const Marginal>;

// Parses a marginal spec string of the form "pareto:a1,a2,...,an".
std::vector<MarginalPtr> parse_marginals(const std::string& spec);

}  // namespace tailsum
