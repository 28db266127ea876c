#include "tailsum/presets.hpp"

#include "tailsum/errors.hpp"

namespace tailsum {

TailProblem Scenario::problem(double s) const {
    std::vector<MarginalPtr> marginals;
    marginals.reserve(alphas.size());
    for (double a : alphas) marginals.push_back(std::make_shared<ParetoMarginal>(a));
    return TailProblem(mode, ArchimedeanGenerator(family, tau_to_param(family, tau)),
                       std::move(marginals), s);
}

std::vector<std::string> preset_names() {
    return {"table1", "table2", "table3", "table4", "table5", "table6"};
}

std::vector<Scenario> preset_scenarios(const std::string& name) {
    auto single = [](Family f, Mode mode, double tau, std::vector<double> alphas,
                     std::vector<double> s, int m) {
        Scenario sc;
        sc.family = f;
        sc.mode = mode;
        sc.tau = tau;
        sc.alphas = std::move(alphas);
        sc.s_values = std::move(s);
        sc.bounds_m = m;
        return std::vector<Scenario>{sc};
    };
    if (name == "table1")
        return single(Family::clayton, Mode::copula_x, 3.0 / 8.0, {0.9, 1.8},
                      {1.0, 1e2, 1e4, 1e6}, 20);
    if (name == "table2")
        return single(Family::clayton, Mode::copula_x, 1.0 / 6.0, {0.9, 1.8, 2.6},
                      {1.0, 1e2, 1e4, 1e6}, 8);
    if (name == "table3")
        return single(Family::clayton, Mode::survival_y, 0.5, {2.5, 2.5}, {1.0, 1e2, 1e3, 1e4},
                      20);
    if (name == "table4")
        return single(Family::clayton, Mode::survival_y, 0.5, {2.5, 2.5, 2.5},
                      {1.0, 1e2, 1e3, 1e4}, 8);
    if (name == "table5" || name == "table6") {
        const double s = name == "table5" ? 20.0 : 200.0;
        std::vector<Scenario> out;
        for (double tau : {0.1, 0.5, 0.9}) {
            for (Family f : {Family::clayton, Family::gumbel}) {
                for (Mode mode : {Mode::copula_x, Mode::survival_y}) {
                    Scenario sc;
                    sc.family = f;
                    sc.mode = mode;
                    sc.tau = tau;
                    sc.alphas = std::vector<double>(5, 2.5);
                    sc.s_values = {s};
                    out.push_back(std::move(sc));
                }
            }
        }
        return out;
    }
    throw domain_error("unknown preset \"" + name + "\"; known presets: table1 ... table6");
}

}  // namespace tailsum
