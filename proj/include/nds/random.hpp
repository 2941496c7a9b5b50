#pragma once

#include <cstdint>
#include <random>

#include "nds/types.hpp"

namespace nds {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-run seed derived from (master seed, run index). Runs can execute in any
// order (or concurrently) and still see the same stream.
inline std::uint64_t derive_run_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// mt19937_64 has standard-specified output; doubles are produced by hand so
// results do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

private:
    std::mt19937_64 engine_;
};

// Random initial condition for a neuron run: x, y in [-0.5, 0.5], u between
// the reset value and the threshold so the run starts sub-threshold.
inline State3 random_initial_state(Rng& rng, const NDSParams& p = NDSParams{}) {
    State3 s;
    s.x = rng.uniform(-0.5, 0.5);
    s.y = rng.uniform(-0.5, 0.5);
    s.u = rng.uniform(p.eta0, p.theta);
    return s;
}

}  // namespace nds
