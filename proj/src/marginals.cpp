#include "tailsum/marginals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tailsum/errors.hpp"

namespace tailsum {

ParetoMarginal::ParetoMarginal(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw domain_error("pareto tail index alpha must be positive and finite");
}

double ParetoMarginal::cdf(double x) const {
    if (std::isnan(x)) throw domain_error("cdf: NaN argument");
    if (x <= 0.0) return 0.0;
    return -std::expm1(-alpha_ * std::log1p(x));
}

double ParetoMarginal::survival(double x) const {
    if (std::isnan(x)) throw domain_error("survival: NaN argument");
    if (x <= 0.0) return 1.0;
    return std::exp(-alpha_ * std::log1p(x));
}

double ParetoMarginal::quantile(double p) const {
    if (!(p >= 0.0) || p > 1.0) throw domain_error("quantile: p must lie in [0,1]");
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    // (1-p)^(-1/alpha) - 1
    return std::expm1(-std::log1p(-p) / alpha_);
}

double ParetoMarginal::survival_quantile(double q) const {
    if (!(q >= 0.0) || q > 1.0) throw domain_error("survival_quantile: q must lie in [0,1]");
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    // q^(-1/alpha) - 1
    const double nl = q >= 0.5 ? -std::log1p(q - 1.0) : -std::log(q);
    return std::expm1(nl / alpha_);
}

std::vector<MarginalPtr> parse_marginals(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos || spec.substr(0, colon) != "pareto")
        throw domain_error("marginal spec must look like \"pareto:a1,a2,...\", got \"" + spec + "\"");
    std::vector<MarginalPtr> out;
    std::stringstream body(spec.substr(colon + 1));
    std::string item;
    while (std::getline(body, item, ',')) {
        std::size_t used = 0;
        double alpha = 0.0;
        try {
            alpha = std::stod(item, &used);
        } catch (const std::exception&) {
            throw domain_error("marginal spec: cannot parse alpha \"" + item + "\"");
        }
        if (used != item.size())
            throw domain_error("marginal spec: trailing junk in \"" + item + "\"");
        out.push_back(std::make_shared<ParetoMarginal>(alpha));
    }
    if (out.empty()) throw domain_error("marginal spec lists no tail indices");
    return out;
}

}  // namespace tailsum
