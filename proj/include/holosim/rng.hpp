#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <random>

namespace holosim {

// Seed mixing for named sub-streams.  Both functions are fixed-width integer
// arithmetic only, so stream derivation is identical on every platform.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// A deterministic random stream.  mt19937_64 has a standardized output
// sequence; the floating-point mappings below are written out explicitly
// because the std::*_distribution classes are implementation-defined and
// would break byte-identical replay across standard libraries.
class RngStream {
public:
    RngStream() : engine_(0) {}
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t run_seed, std::string_view stream_name)
        : engine_(splitmix64(run_seed ^ fnv1a64(stream_name))) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    std::size_t pick_index(std::size_t n) {
        return static_cast<std::size_t>(below(static_cast<std::uint64_t>(n)));
    }

    // Box-Muller without a cached spare: two draws per sample keeps the
    // stream position a pure function of the call count.
    double normal(double mean, double stddev) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        return mean + stddev * r * std::cos(theta);
    }

    // Derive an independent child stream, e.g. per (member, week, day).
    RngStream fork(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
        const std::uint64_t base = next_u64();
        return RngStream(splitmix64(base ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c)))));
    }

private:
    std::mt19937_64 engine_;
};

// The named streams used by one simulation run.  Each phase draws from its
// own stream so that a change in one phase's draw count cannot shift the
// randomness seen by the others.
struct RngSet {
    RngStream members;
    RngStream tasks;
    RngStream allocation;
    RngStream planning;
    RngStream dynamics;

    explicit RngSet(std::uint64_t run_seed)
        : members(run_seed, "members"),
          tasks(run_seed, "tasks"),
          allocation(run_seed, "allocation"),
          planning(run_seed, "planning"),
          dynamics(run_seed, "dynamics") {}
};

} // namespace holosim
