#pragma once

#include "tailsum/radial.hpp"
#include "tailsum/rng.hpp"

#include <span>
#include <vector>

namespace tailsum {

// W_i = E_i / sum(E) with iid standard exponentials: uniform on the unit
// simplex. All components are strictly positive.
void sample_simplex(int n, RngStream& rng, std::span<double> out);
std::vector<double> sample_simplex(int n, RngStream& rng);

// Inverse-CDF draw of the radial part. The bracket [0, hi] is grown by
// doubling until F_R(hi) covers the target level, then bisected to relative
// tolerance 1e-12. Doubling may legitimately need to reach ~1e300 for
// heavy-tailed Clayton generators (small theta), so the growth cap is the
// double range rather than a fixed iteration count.
double sample_radial(const RadialCdf& radial, RngStream& rng);

// McNeil/Neslehova engine: U_i = Phi(R W_i).
void sample_archimedean_mn(const RadialCdf& radial, RngStream& rng, std::span<double> out);
std::vector<double> sample_archimedean_mn(const ArchimedeanGenerator& gen, int n, RngStream& rng);

// Kendall-inverse engine: U_1 uniform, Z | U_1 by bisection of the
// conditional Kendall CDF, then the closed-form conditional chain.
void sample_archimedean_brechmann(const KendallConditional& kendall, RngStream& rng,
                                  std::span<double> out);
std::vector<double> sample_archimedean_brechmann(const ArchimedeanGenerator& gen, int n,
                                                 RngStream& rng);

// Draw of (U | U_index in [a,b]). Conditioning on an arbitrary index reduces
// to conditioning on the first coordinate because the copula is exchangeable.
void sample_conditional_band(const KendallConditional& kendall, int index, double a, double b,
                             RngStream& rng, std::span<double> out);
std::vector<double> sample_conditional_band(const ArchimedeanGenerator& gen, int n, int index,
                                            double a, double b, RngStream& rng);

}  // namespace tailsum
