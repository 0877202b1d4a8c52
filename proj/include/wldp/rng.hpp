#pragma once
#include <cmath>
#include <cstdint>

namespace wldp::num {

/**
 * Counter-based deterministic RNG stream.
 *
 * A splitmix64 walk seeded from (seed, stream_id): the state advances by a
 * fixed odd constant and every output is a full avalanche of the counter, so
 * the sequence for a given (seed, stream_id) is identical across runs and
 * thread schedules. Distinct stream ids give statistically independent
 * streams, which is what the Monte Carlo workers rely on (worker k draws
 * from stream k).
 *
 * Single-owner: do not share one stream between threads.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(mix(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream_id ^ 0xbf58476d1ce4e5b9ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) {
        return a + uniform() * (b - a);
    }

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed, stream_id);
}

} // namespace wldp::num
