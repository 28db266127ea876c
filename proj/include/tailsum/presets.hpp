#pragma once

#include "tailsum/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tailsum {

// One experiment scenario: a dependence structure, marginal tail indices and
// a list of thresholds, optionally with a bounds precision m.
struct Scenario {
    Family family = Family::clayton;
    Mode mode = Mode::copula_x;
    double tau = 0.5;
    std::vector<double> alphas;
    std::vector<double> s_values;
    std::optional<int> bounds_m;  // set when the preset reproduces bound columns

    TailProblem problem(double s) const;
};

// Named presets reproducing the six benchmark tables:
//   table1  n=2 copula,   Clayton tau=3/8, alpha=(0.9,1.8),      s in {1,1e2,1e4,1e6}, m=20
//   table2  n=3 copula,   Clayton tau=1/6, alpha=(0.9,1.8,2.6),  s in {1,1e2,1e4,1e6}, m=8
//   table3  n=2 survival, Clayton tau=1/2, alpha=(2.5,2.5),      s in {1,1e2,1e3,1e4}, m=20
//   table4  n=3 survival, Clayton tau=1/2, alpha=(2.5,2.5,2.5),  s in {1,1e2,1e3,1e4}, m=8
//   table5  n=5, alpha=2.5^5, s=20,  12 blocks: {Clayton,Gumbel} x {copula,survival} x tau {0.1,0.5,0.9}
//   table6  same as table5 at s=200
std::vector<Scenario> preset_scenarios(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace tailsum
