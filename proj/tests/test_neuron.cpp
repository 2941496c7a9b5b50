#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "nds/neuron.hpp"
#include "nds/presets.hpp"

using namespace nds;

namespace {

Trace history_with_spikes(const std::vector<std::uint8_t>& spikes) {
    Trace t;
    for (auto s : spikes) t.append(State3{}, s);
    return t;
}

}  // namespace

TEST_CASE("feedback signal") {
    SECTION("single connection reads gamma(t - tau)") {
        const Trace h = history_with_spikes({0, 0, 1, 0, 0, 0});
        const FeedbackConfig fb{{{1.0, 3}}};
        CHECK(feedback_signal(h, fb, 5) == 1.0);  // gamma(2) == 1
        CHECK(feedback_signal(h, fb, 4) == 0.0);
    }
    SECTION("empty config sums to zero") {
        const Trace h = history_with_spikes({1, 1, 1});
        CHECK(feedback_signal(h, FeedbackConfig{}, 2) == 0.0);
    }
    SECTION("weights add linearly") {
        const Trace h = history_with_spikes({1, 0, 0, 1, 0, 0});
        const FeedbackConfig fb{{{0.5, 2}, {0.25, 5}}};
        // t=5: gamma(3)=1 and gamma(0)=1
        CHECK(feedback_signal(h, fb, 5) == 0.75);
    }
    SECTION("history before t=0 reads as no spike") {
        const Trace h = history_with_spikes({1, 1});
        const FeedbackConfig fb{{{1.0, 5}}};
        CHECK(feedback_signal(h, fb, 1) == 0.0);
    }
    SECTION("doubling every weight doubles the signal") {
        const Trace h = history_with_spikes({1, 0, 1, 1, 0, 1, 0, 1});
        FeedbackConfig fb{{{0.3, 1}, {0.2, 4}, {0.7, 6}}};
        FeedbackConfig doubled = fb;
        for (auto& c : doubled.connections) c.w *= 2.0;
        for (std::size_t t = 0; t < 8; ++t)
            CHECK(feedback_signal(h, doubled, t) == Approx(2.0 * feedback_signal(h, fb, t)));
    }
}

TEST_CASE("input signal") {
    SECTION("no trains") { CHECK(input_signal(InputTrains{}, 0) == 0.0); }
    SECTION("sums the firing trains") {
        const InputTrains in{{{1, 0, 1}, {0, 0, 1}, {1, 0, 0}}};
        CHECK(input_signal(in, 0) == 2.0);
        CHECK(input_signal(in, 1) == 0.0);
        CHECK(input_signal(in, 2) == 2.0);
    }
    SECTION("past the end reads as zero") {
        const InputTrains in{{{1, 1}}};
        CHECK(input_signal(in, 2) == 0.0);
        CHECK(input_signal(in, 100) == 0.0);
    }
}

TEST_CASE("single neuron update") {
    const NDSParams p;

    SECTION("reset branch fires and resets u") {
        const NeuronStep r = nds_step(State3{0, 0, 0.5}, p, 0.0, 0.0);
        CHECK(r.state.u == -0.7);
        CHECK(r.spike == 1);
    }
    SECTION("sub-threshold branch, direct substitution") {
        const NeuronStep r = nds_step(State3{0, 0, -0.5}, p, 0.0, 0.0);
        // u' = -0.5 + 0.8*(0.002 + 0 + (-0.057)*(-0.5))
        const double expected = -0.5 + 0.8 * (0.002 + (-0.5) * (-0.0) + (-0.057) * (-0.5));
        CHECK(r.state.u == Approx(expected).margin(1e-15));
        CHECK(r.state.u == Approx(-0.47560).margin(1e-10));
        CHECK(r.spike == 0);
    }
    SECTION("x and y updates are branch-independent") {
        // same (x, y, u) fed to both branches by toggling the threshold
        const State3 s{1, 2, -0.5};
        NDSParams reset_params = p;
        reset_params.theta = -0.6;  // forces the reset branch for u = -0.5
        const NeuronStep sub = nds_step(s, p, 0.0, 0.0);
        const NeuronStep reset = nds_step(s, reset_params, 0.0, 0.0);
        CHECK(sub.state.x == reset.state.x);
        CHECK(sub.state.y == reset.state.y);
        CHECK(sub.spike == 0);
        CHECK(reset.spike == 1);

        CHECK(sub.state.x == Approx(0.955).margin(1e-15));
        CHECK(sub.state.y == Approx(2.0 + 0.03 * (1.0 + 0.002 * 2.0)).margin(1e-15));
    }
    SECTION("F and In enter only the sub-threshold branch") {
        const NeuronStep reset = nds_step(State3{0, 0, 0.5}, p, 10.0, 10.0);
        CHECK(reset.state.u == -0.7);
        const NeuronStep sub = nds_step(State3{0, 0, -0.5}, p, 0.25, 0.5);
        const NeuronStep base = nds_step(State3{0, 0, -0.5}, p, 0.0, 0.0);
        CHECK(sub.state.u == Approx(base.state.u + 0.75).margin(1e-15));
    }
}

TEST_CASE("neuron run") {
    SECTION("config validation") {
        NeuronRunConfig cfg;
        cfg.transient_steps = 11;
        cfg.total_steps = 10;
        CHECK_THROWS_AS(validate(cfg), InvalidParams);
    }
    SECTION("trace length equals total steps and starts un-spiked") {
        NeuronRunConfig cfg;
        cfg.transient_steps = 0;
        cfg.total_steps = 500;
        cfg.seed = 3;
        const Trace tr = run_neuron(cfg);
        CHECK(tr.size() == 500);
        CHECK(tr.spike(0) == 0);
        CHECK(tr.start_index == 0);
    }
    SECTION("reset and sub-threshold invariants hold along the trace") {
        for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
            NeuronRunConfig cfg;
            cfg.seed = seed;
            cfg.feedback = calibrated_feedback();
            const Trace tr = run_neuron(cfg);
            const NDSParams p;
            for (std::size_t t = 0; t + 1 < tr.size(); ++t) {
                if (tr.spike(t + 1) == 1) {
                    CHECK(tr.state(t).u > p.theta);
                    CHECK(tr.state(t + 1).u == p.eta0);
                } else {
                    CHECK(tr.state(t).u <= p.theta);
                }
            }
        }
    }
    SECTION("free runs are bit-deterministic") {
        NeuronRunConfig cfg;
        cfg.seed = 99;
        const Trace a = run_neuron(cfg);
        const Trace b = run_neuron(cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.state(i) == b.state(i));
            CHECK(a.spike(i) == b.spike(i));
        }
    }
    SECTION("transient equal to total steps behaves as a free run") {
        NeuronRunConfig with_fb;
        with_fb.seed = 5;
        with_fb.feedback = calibrated_feedback();
        with_fb.transient_steps = with_fb.total_steps;

        NeuronRunConfig free = with_fb;
        free.feedback = FeedbackConfig{};

        const Trace a = run_neuron(with_fb);
        const Trace b = run_neuron(free);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.state(i) == b.state(i));
    }
    SECTION("free run is bounded, spikes, and has irregular intervals") {
        NeuronRunConfig cfg;
        cfg.seed = 42;
        const Trace tr = run_neuron(cfg);
        double peak = 0.0;
        for (const auto& s : tr.states) peak = std::max(peak, sup_norm(s));
        CHECK(peak < 100.0);

        std::vector<std::size_t> spike_times;
        for (std::size_t t = 0; t < tr.size(); ++t)
            if (tr.spike(t)) spike_times.push_back(t);
        REQUIRE(spike_times.size() >= 2);

        bool constant = true;
        for (std::size_t i = 2; i < spike_times.size(); ++i)
            if (spike_times[i] - spike_times[i - 1] != spike_times[1] - spike_times[0])
                constant = false;
        CHECK_FALSE(constant);
    }
    SECTION("external input enters the run") {
        NeuronRunConfig cfg;
        cfg.s0 = State3{0, 0, -0.5};
        cfg.transient_steps = 0;
        cfg.total_steps = 3;
        NeuronRunConfig with_input = cfg;
        with_input.inputs.trains = {{1, 0, 0}};
        const Trace quiet = run_neuron(cfg);
        const Trace driven = run_neuron(with_input);
        CHECK(driven.state(1).u == Approx(quiet.state(1).u + 1.0).margin(1e-15));
    }
}
