#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tailsum {

// Seeded random stream. A (seed, stream_id) pair fully determines the draw
// sequence; distinct stream ids give independently seeded generators, which is
// how replication blocks are decorrelated across workers.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream_id),
            static_cast<std::uint32_t>(stream_id >> 32),
        };
        gen_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Uniform on the open interval (0,1): never returns 0 or 1, so log() and
    // quantile transforms stay finite.
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard exponential via inversion.
    double exponential() { return -std::log(uniform01()); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 gen_;
};

}  // namespace tailsum
