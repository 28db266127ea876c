#include "tailsum/problem.hpp"

#include <cmath>
#include <string>

#include "tailsum/errors.hpp"

namespace tailsum {

const char* mode_name(Mode m) {
    return m == Mode::copula_x ? "copula" : "survival";
}

TailProblem::TailProblem(Mode mode_, ArchimedeanGenerator gen_,
                         std::vector<MarginalPtr> marginals_, double s_)
    : mode(mode_), gen(gen_), marginals(std::move(marginals_)), s(s_) {
    if (marginals.empty()) throw domain_error("TailProblem: at least one marginal required");
    for (const auto& m : marginals)
        if (!m) throw domain_error("TailProblem: null marginal");
    if (!(s > 0.0) || !std::isfinite(s)) throw domain_error("TailProblem: s must be positive");
    const int n = dim();
    if (n - 1 > gen.max_order())
        throw capability_error("TailProblem: dimension " + std::to_string(n) +
                               " needs generator derivatives up to order " +
                               std::to_string(n - 1));
}

}  // namespace tailsum
