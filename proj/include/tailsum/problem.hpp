#pragma once

#include "tailsum/generator.hpp"
#include "tailsum/marginals.hpp"

#include <vector>

namespace tailsum {

// CopulaX: the Archimedean copula is the copula of X (X_i = F_i^-1(U_i)).
// SurvivalY: it is the survival copula of Y (Y_i = SF_i^-1(U_i)).
enum class Mode { copula_x, survival_y };

const char* mode_name(Mode m);

// One exceedance problem: z(s) = Pr(X_1 + ... + X_n > s) under the chosen
// dependence mode. Immutable after construction; safe to share across workers.
struct TailProblem {
    Mode mode;
    ArchimedeanGenerator gen;
    std::vector<MarginalPtr> marginals;
    double s;

    TailProblem(Mode mode_, ArchimedeanGenerator gen_, std::vector<MarginalPtr> marginals_,
                double s_);

    int dim() const { return static_cast<int>(marginals.size()); }
};

}  // namespace tailsum
