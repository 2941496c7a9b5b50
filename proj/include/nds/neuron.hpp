#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "nds/errors.hpp"
#include "nds/integrators.hpp"
#include "nds/random.hpp"
#include "nds/types.hpp"

namespace nds {

// Full configuration of one neuron run. When s0 is absent the initial state
// is drawn from the seeded generator; feedback is gated off for the first
// transient_steps steps.
struct NeuronRunConfig {
    NDSParams params;
    FeedbackConfig feedback;
    InputTrains inputs;
    std::optional<State3> s0;
    std::size_t transient_steps = 1000;
    std::size_t total_steps = 10000;
    std::uint64_t seed = 0;
};

inline void validate(const NeuronRunConfig& cfg) {
    validate(cfg.params);
    validate(cfg.feedback);
    validate(cfg.inputs);
    if (cfg.transient_steps > cfg.total_steps)
        throw InvalidParams("NeuronRunConfig: transient_steps must be <= total_steps");
    if (cfg.total_steps < 1) throw InvalidParams("NeuronRunConfig: total_steps must be >= 1");
    if (cfg.s0 && !is_finite(*cfg.s0))
        throw InvalidParams("NeuronRunConfig: non-finite initial state");
}

// Delayed self-feedback F(t) = sum_j w_j * gamma(t - tau_j); spike history
// before index 0 reads as no spike.
inline double feedback_signal(const Trace& spike_history, const FeedbackConfig& feedback,
                              std::size_t t) {
    double f = 0.0;
    for (const auto& conn : feedback.connections) {
        if (t < conn.tau) continue;
        const std::size_t idx = t - conn.tau;
        if (idx >= spike_history.size()) continue;
        f += conn.w * static_cast<double>(spike_history.spike(idx));
    }
    return f;
}

// External input In(t) = sum_j I_j(t); indices past a train's end read as 0.
inline double input_signal(const InputTrains& inputs, std::size_t t) {
    double sum = 0.0;
    for (const auto& train : inputs.trains)
        if (t < train.size()) sum += static_cast<double>(train[t]);
    return sum;
}

struct NeuronStep {
    State3 state;
    std::uint8_t spike;
};

// One update of the spiking neuron map. x and y advance identically in both
// branches; u either resets to eta0 (emitting a spike) when it exceeded the
// threshold, or follows the sub-threshold map plus F and In.
inline NeuronStep nds_step(const State3& s, const NDSParams& p, double F, double In) {
    NeuronStep r;
    r.state.x = s.x + p.b * (-s.y - s.u);
    r.state.y = s.y + p.c * (s.x + p.a * s.y);
    if (s.u > p.theta) {
        r.state.u = p.eta0;
        r.spike = 1;
    } else {
        r.state.u = s.u + p.d * (p.v + s.u * (-s.x) + p.k * s.u) + F + In;
        r.spike = 0;
    }
    if (!is_finite(r.state) || sup_norm(r.state) > divergence_threshold)
        throw DivergenceError(0);
    return r;
}

// Runs the closed-loop neuron for cfg.total_steps time indices. The trace
// holds states and spikes for t = 0 .. total_steps-1, with the initial state
// (gamma = 0) at t = 0; feedback reads the run's own spike history once
// t >= transient_steps. Divergence carries the step index and the finite
// prefix of the trace.
inline Trace run_neuron(const NeuronRunConfig& cfg) {
    validate(cfg);

    State3 s;
    if (cfg.s0) {
        s = *cfg.s0;
    } else {
        Rng rng(cfg.seed);
        s = random_initial_state(rng, cfg.params);
    }

    Trace trace;
    trace.reserve(cfg.total_steps);
    trace.append(s, 0);
    for (std::size_t t = 0; t + 1 < cfg.total_steps; ++t) {
        const double F =
            (t >= cfg.transient_steps) ? feedback_signal(trace, cfg.feedback, t) : 0.0;
        const double In = input_signal(cfg.inputs, t);
        try {
            const NeuronStep r = nds_step(s, cfg.params, F, In);
            s = r.state;
            trace.append(s, r.spike);
        } catch (DivergenceError&) {
            throw DivergenceError(t + 1, std::move(trace));
        }
    }
    return trace;
}

}  // namespace nds
