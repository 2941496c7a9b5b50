#include <catch2/catch.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "nds/presets.hpp"
#include "nds/random.hpp"
#include "nds/upo.hpp"

using namespace nds;

namespace {

Trace cycle_trace(const std::vector<State3>& cycle, std::size_t length,
                  double noise_amp = 0.0, std::uint64_t noise_seed = 0) {
    Rng rng(noise_seed);
    Trace t;
    for (std::size_t i = 0; i < length; ++i) {
        State3 s = cycle[i % cycle.size()];
        if (noise_amp > 0.0) {
            s.x += rng.uniform(-noise_amp, noise_amp);
            s.y += rng.uniform(-noise_amp, noise_amp);
            s.u += rng.uniform(-noise_amp, noise_amp);
        }
        t.append(s, 0);
    }
    return t;
}

// Independent brute-force scan: no early exits, full window for every p.
std::optional<std::size_t> brute_force_period(const Trace& trace, std::size_t window,
                                              std::size_t p_max, double eps) {
    const std::size_t n = trace.size();
    for (std::size_t p = 1; p <= p_max; ++p) {
        bool ok = true;
        for (std::size_t t = n - window; t < n; ++t)
            ok = ok && sup_dist(trace.state(t), trace.state(t - p)) < eps;
        if (ok) return p;
    }
    return std::nullopt;
}

bool recurs_at(const Trace& trace, std::size_t window, std::size_t p, double eps) {
    const std::size_t n = trace.size();
    for (std::size_t t = n - window; t < n; ++t)
        if (sup_dist(trace.state(t), trace.state(t - p)) >= eps) return false;
    return true;
}

std::vector<State3> random_cycle(Rng& rng, std::size_t k) {
    std::vector<State3> cycle;
    for (std::size_t i = 0; i < k; ++i)
        cycle.push_back(State3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    return cycle;
}

}  // namespace

TEST_CASE("period detection") {
    SECTION("constant trace has period 1") {
        const Trace t = cycle_trace({State3{0.5, 0.5, 0.5}}, 400);
        const PeriodDetection det = detect_period(t, 100, 50, 1e-3);
        REQUIRE(det.period.has_value());
        CHECK(*det.period == 1);
        CHECK(det.residual < 1e-3);
        CHECK(det.window == 100);
    }
    SECTION("alternating trace has period 2") {
        const Trace t = cycle_trace({State3{0, 0, 0}, State3{1, 1, 1}}, 400);
        const PeriodDetection det = detect_period(t, 100, 50, 1e-3);
        REQUIRE(det.period.has_value());
        CHECK(*det.period == 2);
    }
    SECTION("free-running neuron shows no period up to 200") {
        NeuronRunConfig cfg;
        cfg.seed = 42;
        const Trace tr = run_neuron(cfg);
        const PeriodDetection det = detect_period(tr, 1000, 200, 1e-3);
        CHECK_FALSE(det.period.has_value());
        CHECK(std::isinf(det.residual));
    }
    SECTION("short traces are rejected") {
        const Trace t = cycle_trace({State3{}}, 100);
        CHECK_THROWS_AS(detect_period(t, 80, 50, 1e-3), TraceTooShort);
    }
    SECTION("returned period is minimal and multiples also recur") {
        Rng rng(555);
        for (std::size_t k : {1u, 3u, 7u, 20u, 50u}) {
            const Trace t = cycle_trace(random_cycle(rng, k), 600, 2.5e-4, k);
            const PeriodDetection det = detect_period(t, 100, 120, 1e-3);
            const auto oracle = brute_force_period(t, 100, 120, 1e-3);
            REQUIRE(det.period == oracle);
            REQUIRE(det.period.has_value());
            for (std::size_t q = 1; q < *det.period; ++q)
                CHECK_FALSE(recurs_at(t, 100, q, 1e-3));
            if (2 * *det.period <= 120) CHECK(recurs_at(t, 100, 2 * *det.period, 1e-3));
        }
    }
}

TEST_CASE("orbit signatures") {
    SECTION("processing the same trace twice gives equal signatures") {
        Rng rng(8);
        const Trace t = cycle_trace(random_cycle(rng, 5), 300);
        CHECK(orbit_signature(t, 5) == orbit_signature(t, 5));
    }
    SECTION("different periods give unequal signatures") {
        Rng rng(9);
        const auto cycle = random_cycle(rng, 4);
        const Trace t = cycle_trace(cycle, 300);
        const OrbitSignature a = orbit_signature(t, 4);
        OrbitSignature b = a;
        b.period = 8;
        CHECK_FALSE(a == b);
    }
    SECTION("phase rotation does not change the signature") {
        Rng rng(10);
        auto cycle = random_cycle(rng, 6);
        const Trace t1 = cycle_trace(cycle, 302);
        std::rotate(cycle.begin(), cycle.begin() + 2, cycle.end());
        const Trace t2 = cycle_trace(cycle, 302);
        CHECK(orbit_signature(t1, 6) == orbit_signature(t2, 6));
    }
    SECTION("the same stabilized orbit reached from two initial conditions") {
        // seeds 1 and 22 both lock onto the calibrated period-199 orbit
        OrbitSignature sigs[2];
        std::size_t idx = 0;
        for (std::uint64_t seed : {1ull, 22ull}) {
            NeuronRunConfig cfg;
            cfg.feedback = calibrated_feedback();
            cfg.seed = seed;
            const Trace tr = run_neuron(cfg);
            const PeriodDetection det = detect_period(tr, 1000, 200, 1e-3);
            REQUIRE(det.period.has_value());
            sigs[idx++] = orbit_signature(tr, *det.period);
        }
        CHECK(sigs[0] == sigs[1]);
        CHECK(sigs[0].period == sigs[1].period);
    }
}

TEST_CASE("ensembles") {
    const auto grid = ensemble_feedback_grid();

    SECTION("a single run reproduces run_neuron + detect_period") {
        const EnsembleResult res = run_ensemble(NDSParams{}, grid, 1, 2024, {}, "one");

        NeuronRunConfig cfg;
        cfg.params = NDSParams{};
        cfg.feedback.connections = {grid[0]};
        cfg.seed = derive_run_seed(2024, 0);
        const Trace tr = run_neuron(cfg);
        const PeriodDetection det = detect_period(tr, 1000, 200, 1e-3);

        CHECK(res.runs == 1);
        CHECK(res.diverged_runs == 0);
        if (det.period) {
            CHECK(res.stabilized_runs == 1);
            CHECK(res.distinct_upos == 1);
            CHECK(res.period_histogram.at(*det.period) == 1);
        } else {
            CHECK(res.stabilized_runs == 0);
            CHECK(res.distinct_upos == 0);
        }
    }
    SECTION("identical inputs give identical results") {
        const EnsembleResult a = run_ensemble(NDSParams{}, grid, 120, 42, {}, "setup07");
        const EnsembleResult b = run_ensemble(NDSParams{}, grid, 120, 42, {}, "setup07");
        CHECK(a == b);
    }
    SECTION("stabilized counts bound distinct orbit counts") {
        const EnsembleResult res = run_ensemble(NDSParams{}, grid, 150, 7, {}, "setup07");
        CHECK(res.distinct_upos <= res.stabilized_runs);
        CHECK(res.stabilized_runs + res.diverged_runs <= res.runs);
        std::size_t hist_total = 0;
        for (const auto& [period, count] : res.period_histogram) hist_total += count;
        CHECK(hist_total == res.stabilized_runs);
    }
    SECTION("divergent runs contribute no signatures") {
        const EnsembleResult res =
            run_ensemble(rossler_in_nds_params(), grid, 60, 11, {}, "rossler-in-nds");
        CHECK(res.runs == 60);
        CHECK(res.stabilized_runs == 0);
        CHECK(res.distinct_upos == 0);
        CHECK(res.diverged_runs == 60);
    }
    SECTION("runs must be positive") {
        CHECK_THROWS_AS(run_ensemble(NDSParams{}, grid, 0, 1), InvalidArgument);
    }
}

TEST_CASE("parameter sweeps") {
    SECTION("d values inside the reported range are valid") {
        const auto points = sweep_parameter(NDSParams{}, "d", {0.8, 0.85, 0.9}, 2, 17);
        REQUIRE(points.size() == 3);
        for (const auto& pt : points) CHECK(pt.valid);
    }
    SECTION("the default b=c setting is valid") {
        const auto points = sweep_parameter(NDSParams{}, "bc", {0.03}, 2, 17);
        REQUIRE(points.size() == 1);
        CHECK(points[0].valid);
        CHECK(points[0].value == 0.03);
    }
    SECTION("the k endpoints used by the setups are valid") {
        const auto points = sweep_parameter(NDSParams{}, "k", {-0.055, -0.058}, 2, 17);
        for (const auto& pt : points) CHECK(pt.valid);
    }
    SECTION("a setting with no attractor is invalid") {
        const auto points = sweep_parameter(NDSParams{}, "bc", {0.07}, 2, 17);
        CHECK_FALSE(points[0].valid);
    }
    SECTION("unknown axes are rejected") {
        CHECK_THROWS_AS(sweep_parameter(NDSParams{}, "theta", {0.1}, 2, 17), UnknownParameter);
        CHECK_THROWS_AS(sweep_parameter(NDSParams{}, "d", {0.8}, 0, 17), InvalidArgument);
    }
    SECTION("joint axes move both members of the pair") {
        const NDSParams p = with_axis_value(NDSParams{}, SweepAxis::av, 0.05);
        CHECK(p.a == 0.05);
        CHECK(p.v == 0.05);
        const NDSParams q = with_axis_value(NDSParams{}, SweepAxis::bc, 0.02);
        CHECK(q.b == 0.02);
        CHECK(q.c == 0.02);
    }
}

TEST_CASE("feedback calibration finds a 4-spike orbit") {
    // reduced grid around the calibrated pair; the full scan runs in the
    // acceptance suite
    std::vector<std::size_t> taus;
    for (std::size_t t = 30; t <= 40; ++t) taus.push_back(t);
    const auto hits =
        calibrate_feedback(NDSParams{}, {calibrated_feedback_w}, taus, 4, calibration_seed);
    REQUIRE_FALSE(hits.empty());
    CHECK(hits.front().w == calibrated_feedback_w);
    CHECK(hits.front().tau == calibrated_feedback_tau);
    CHECK(hits.front().spikes == 4);
    CHECK(hits.front().period == 199);
}
