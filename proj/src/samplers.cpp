#include "tailsum/samplers.hpp"

#include <array>
#include <cmath>

#include "tailsum/errors.hpp"

namespace tailsum {

void sample_simplex(int n, RngStream& rng, std::span<double> out) {
    if (n < 1 || static_cast<int>(out.size()) != n)
        throw domain_error("sample_simplex: output span must have length n >= 1");
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        out[i] = rng.exponential();
        total += out[i];
    }
    for (int i = 0; i < n; ++i) out[i] /= total;
}

std::vector<double> sample_simplex(int n, RngStream& rng) {
    std::vector<double> w(n);
    sample_simplex(n, rng, w);
    return w;
}

double sample_radial(const RadialCdf& radial, RngStream& rng) {
    const double v = rng.uniform01();
    double lo = 0.0;
    double hi = 1.0;
    while (radial.cdf(hi) < v) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e307)
            throw numerical_error("sample_radial: bracket growth exhausted (defective generator?)");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (radial.cdf(mid) < v)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void sample_archimedean_mn(const RadialCdf& radial, RngStream& rng, std::span<double> out) {
    const int n = radial.dim();
    if (static_cast<int>(out.size()) != n)
        throw domain_error("sample_archimedean_mn: output span must have length n");
    sample_simplex(n, rng, out);
    const double r = sample_radial(radial, rng);
    for (int i = 0; i < n; ++i) out[i] = radial.generator().phi(r * out[i]);
}

std::vector<double> sample_archimedean_mn(const ArchimedeanGenerator& gen, int n, RngStream& rng) {
    std::vector<double> u(n);
    sample_archimedean_mn(RadialCdf(gen, n), rng, u);
    return u;
}

namespace {

// Shared tail of the Kendall-inverse chain: given u1 (already stored in
// out[slots[0]]), draw Z | U1 and fill the remaining slots. Tracking the
// Phi^-1 partial sums directly avoids re-inverting each freshly drawn u_j.
void brechmann_chain(const KendallConditional& kendall, double u1, RngStream& rng,
                     std::span<double> out, std::span<const int> slots) {
    const auto& gen = kendall.generator();
    const int n = kendall.dim();
    const double z = kendall.invert(u1, rng.uniform01());
    const double z_inv = gen.phi_inverse(z);
    double partial = gen.phi_inverse(u1);
    for (int j = 2; j <= n; ++j) {
        const double rem = std::max(z_inv - partial, 0.0);
        double frac = 1.0;
        if (j < n) frac = 1.0 - std::pow(rng.uniform01(), 1.0 / static_cast<double>(n - j));
        const double arg = frac * rem;
        out[slots[j - 1]] = gen.phi(arg);
        partial += arg;
    }
}

}  // namespace

void sample_archimedean_brechmann(const KendallConditional& kendall, RngStream& rng,
                                  std::span<double> out) {
    const int n = kendall.dim();
    if (static_cast<int>(out.size()) != n)
        throw domain_error("sample_archimedean_brechmann: output span must have length n");
    std::array<int, 32> slots;
    if (n > 32) throw capability_error("sample_archimedean_brechmann: dimension exceeds 32");
    for (int i = 0; i < n; ++i) slots[i] = i;
    const double u1 = rng.uniform01();
    out[0] = u1;
    brechmann_chain(kendall, u1, rng, out, std::span<const int>(slots.data(), n));
}

std::vector<double> sample_archimedean_brechmann(const ArchimedeanGenerator& gen, int n,
                                                 RngStream& rng) {
    std::vector<double> u(n);
    sample_archimedean_brechmann(KendallConditional(gen, n), rng, u);
    return u;
}

void sample_conditional_band(const KendallConditional& kendall, int index, double a, double b,
                             RngStream& rng, std::span<double> out) {
    const int n = kendall.dim();
    if (static_cast<int>(out.size()) != n)
        throw domain_error("sample_conditional_band: output span must have length n");
    if (index < 0 || index >= n) throw domain_error("sample_conditional_band: index out of range");
    if (!(a >= 0.0) || !(b <= 1.0) || !(a < b))
        throw domain_error("sample_conditional_band: need 0 <= a < b <= 1");
    // Permute the conditioned index into the first chain position.
    std::array<int, 32> slots;
    if (n > 32) throw capability_error("sample_conditional_band: dimension exceeds 32");
    slots[0] = index;
    int next = 1;
    for (int i = 0; i < n; ++i)
        if (i != index) slots[next++] = i;
    double u1 = rng.uniform(a, b);
    // Keep the conditioning coordinate strictly inside (0,1) for the chain.
    u1 = std::min(std::max(u1, 1e-300), 1.0 - 1e-16);
    out[index] = u1;
    brechmann_chain(kendall, u1, rng, out, std::span<const int>(slots.data(), n));
}

std::vector<double> sample_conditional_band(const ArchimedeanGenerator& gen, int n, int index,
                                            double a, double b, RngStream& rng) {
    std::vector<double> u(n);
    sample_conditional_band(KendallConditional(gen, n), index, a, b, rng, u);
    return u;
}

}  // namespace tailsum
