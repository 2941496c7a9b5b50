#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "nds/errors.hpp"

namespace nds {

// Internal state of the Rossler system / NDS neuron. The third variable is
// named u throughout; it plays the role of Rossler's z (the discrete model
// renames it when the threshold/reset mechanism is attached).
struct State3 {
    double x = 0.0;
    double y = 0.0;
    double u = 0.0;
};

inline bool is_finite(const State3& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.u);
}

inline double sup_norm(const State3& s) {
    return std::max({std::fabs(s.x), std::fabs(s.y), std::fabs(s.u)});
}

inline double sup_dist(const State3& a, const State3& b) {
    return std::max({std::fabs(a.x - b.x), std::fabs(a.y - b.y), std::fabs(a.u - b.u)});
}

inline bool operator==(const State3& a, const State3& b) {
    return a.x == b.x && a.y == b.y && a.u == b.u;
}

// Continuous Rossler parameters. Defaults are the familiar chaotic setting.
struct RosslerParams {
    double a = 0.2;
    double b = 0.2;
    double c = 5.7;
};

// Discrete NDS neuron parameters. b, c, d are the per-variable scaling steps
// of the discretization; theta is the spike threshold and eta0 the reset
// value of u. Defaults are the original model constants.
struct NDSParams {
    double a = 0.002;
    double v = 0.002;
    double b = 0.03;
    double c = 0.03;
    double d = 0.8;
    double k = -0.057;
    double theta = -0.01;
    double eta0 = -0.7;
};

inline RosslerParams default_rossler_params() { return RosslerParams{}; }
inline NDSParams default_nds_params() { return NDSParams{}; }

inline void validate(const RosslerParams& p) {
    if (!(std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.c)))
        throw InvalidParams("RosslerParams: non-finite field");
}

inline void validate(const NDSParams& p) {
    const bool ok = std::isfinite(p.a) && std::isfinite(p.v) && std::isfinite(p.b) &&
                    std::isfinite(p.c) && std::isfinite(p.d) && std::isfinite(p.k) &&
                    std::isfinite(p.theta) && std::isfinite(p.eta0);
    if (!ok) throw InvalidParams("NDSParams: non-finite field");
}

// One weighted delayed self-connection: contributes w * gamma(t - tau).
struct FeedbackConnection {
    double w = 0.0;
    std::size_t tau = 1;  // delay in time steps, >= 1
};

struct FeedbackConfig {
    std::vector<FeedbackConnection> connections;  // may be empty: F(t) == 0
};

inline void validate(const FeedbackConfig& fb) {
    for (const auto& c : fb.connections) {
        if (!std::isfinite(c.w)) throw InvalidParams("FeedbackConfig: non-finite weight");
        if (c.tau < 1) throw InvalidParams("FeedbackConfig: tau must be >= 1");
    }
}

// External binary spike trains; In(t) is their unweighted sum.
struct InputTrains {
    std::vector<std::vector<std::uint8_t>> trains;
};

inline void validate(const InputTrains& in) {
    for (const auto& train : in.trains) {
        if (train.size() != in.trains.front().size())
            throw InvalidParams("InputTrains: trains must have equal length");
        for (auto v : train)
            if (v > 1) throw InvalidParams("InputTrains: entries must be 0 or 1");
    }
}

// Time-indexed state sequence plus the binary spike output, same length.
// Entry i corresponds to time index start_index + i. States stored here are
// always finite; divergence is reported through DivergenceError instead.
class Trace {
public:
    std::vector<State3> states;
    std::vector<std::uint8_t> spikes;
    long start_index = 0;

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }

    void reserve(std::size_t n) {
        states.reserve(n);
        spikes.reserve(n);
    }

    void append(const State3& s, std::uint8_t spike) {
        if (!is_finite(s)) throw InvalidParams("Trace: non-finite state");
        if (spike > 1) throw InvalidParams("Trace: spike must be 0 or 1");
        states.push_back(s);
        spikes.push_back(spike);
    }

    const State3& state(std::size_t i) const { return states[i]; }
    std::uint8_t spike(std::size_t i) const { return spikes[i]; }
};

// A trajectory is declared divergent once its sup-norm exceeds this; far
// outside any attractor scale and well below floating-point overflow.
inline constexpr double divergence_threshold = 1e6;

// Thrown when a trajectory leaves the divergence threshold. Carries the step
// index at which it happened and the finite prefix of the trace.
struct DivergenceError : Error {
    std::size_t step = 0;
    Trace partial;

    explicit DivergenceError(std::size_t at, Trace prefix = {})
        : Error("trajectory diverged at step " + std::to_string(at)),
          step(at),
          partial(std::move(prefix)) {}
};

}  // namespace nds
