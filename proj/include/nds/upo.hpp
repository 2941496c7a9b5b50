#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nds/errors.hpp"
#include "nds/neuron.hpp"
#include "nds/random.hpp"
#include "nds/types.hpp"

namespace nds {

// Recurrence-based period detection settings. The defaults separate exact
// post-reset cycles from chaotic wandering at desk scale; all overridable.
struct DetectionSettings {
    std::size_t check_window = 1000;
    std::size_t p_max = 200;
    double eps = 1e-3;
};

struct PeriodDetection {
    std::optional<std::size_t> period;
    double residual = std::numeric_limits<double>::infinity();
    std::size_t window = 0;
};

// Smallest p in [1, p_max] such that every state in the final check_window
// indices recurs within eps (sup-norm) of the state p steps earlier. The
// residual of a detected period is its worst recurrence distance over the
// window; when nothing recurs the residual stays infinite.
inline PeriodDetection detect_period(const Trace& trace, std::size_t check_window,
                                     std::size_t p_max, double eps) {
    if (check_window < 1 || p_max < 1)
        throw InvalidArgument("detect_period: window and p_max must be >= 1");
    if (!(eps > 0.0)) throw InvalidArgument("detect_period: eps must be > 0");
    const std::size_t n = trace.size();
    if (n < check_window + p_max)
        throw TraceTooShort("detect_period: trace shorter than check_window + p_max");

    PeriodDetection result;
    result.window = check_window;
    for (std::size_t p = 1; p <= p_max; ++p) {
        double worst = 0.0;
        bool ok = true;
        for (std::size_t t = n - check_window; t < n; ++t) {
            const double d = sup_dist(trace.state(t), trace.state(t - p));
            worst = std::max(worst, d);
            if (d >= eps) {
                ok = false;
                break;
            }
        }
        if (ok) {
            result.period = p;
            result.residual = worst;
            return result;
        }
    }
    return result;
}

inline PeriodDetection detect_period(const Trace& trace, const DetectionSettings& ds) {
    return detect_period(trace, ds.check_window, ds.p_max, ds.eps);
}

// Coordinates are snapped to this grid (milli-units) when building orbit
// signatures; coarser than the recurrence eps so one stabilized orbit maps
// to one signature.
inline constexpr double signature_grid = 1e-3;

// Canonical rounded one-period sample of a stabilized orbit, used to count
// distinct orbits. Signatures of the same orbit started from different
// initial conditions (hence different phases) compare equal.
struct OrbitSignature {
    std::size_t period = 0;
    std::vector<std::array<std::int64_t, 3>> samples;  // grid units

    friend bool operator==(const OrbitSignature& a, const OrbitSignature& b) {
        return a.period == b.period && a.samples == b.samples;
    }
    friend bool operator<(const OrbitSignature& a, const OrbitSignature& b) {
        if (a.period != b.period) return a.period < b.period;
        return a.samples < b.samples;
    }
};

// Extracts the final full period of the trace, rotated so index 0 is a spike
// step (the minimum-u step if the period contains no spike) and rounded to
// the signature grid. Among several spike steps the rotation giving the
// lexicographically smallest rounded sequence is the canonical one.
inline OrbitSignature orbit_signature(const Trace& trace, std::size_t period) {
    if (period < 1 || trace.size() < period)
        throw InvalidArgument("orbit_signature: period must be in [1, trace length]");

    const std::size_t begin = trace.size() - period;
    auto rounded = [&](std::size_t offset) {
        std::vector<std::array<std::int64_t, 3>> seq;
        seq.reserve(period);
        for (std::size_t i = 0; i < period; ++i) {
            const State3& s = trace.state(begin + (offset + i) % period);
            seq.push_back({std::llround(s.x / signature_grid),
                           std::llround(s.y / signature_grid),
                           std::llround(s.u / signature_grid)});
        }
        return seq;
    };

    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < period; ++i)
        if (trace.spike(begin + i) == 1) starts.push_back(i);
    if (starts.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < period; ++i)
            if (trace.state(begin + i).u < trace.state(begin + best).u) best = i;
        starts.push_back(best);
    }

    OrbitSignature sig;
    sig.period = period;
    sig.samples = rounded(starts.front());
    for (std::size_t i = 1; i < starts.size(); ++i) {
        auto candidate = rounded(starts[i]);
        if (candidate < sig.samples) sig.samples = std::move(candidate);
    }
    return sig;
}

// Number of spikes inside the final detected period of the trace.
inline std::size_t spikes_per_period(const Trace& trace, std::size_t period) {
    std::size_t count = 0;
    for (std::size_t i = trace.size() - period; i < trace.size(); ++i)
        if (trace.spike(i) == 1) ++count;
    return count;
}

// The single-neuron stabilization protocol: random start, feedback gated on
// after the transient, recurrence check on the final window.
struct EnsembleProtocol {
    std::size_t transient_steps = 1000;
    std::size_t total_steps = 10000;
    DetectionSettings detection;
};

struct EnsembleResult {
    std::string setup_name;
    std::size_t runs = 0;
    std::size_t stabilized_runs = 0;
    std::size_t distinct_upos = 0;
    std::map<std::size_t, std::size_t> period_histogram;
    std::size_t diverged_runs = 0;

    friend bool operator==(const EnsembleResult& a, const EnsembleResult& b) {
        return a.setup_name == b.setup_name && a.runs == b.runs &&
               a.stabilized_runs == b.stabilized_runs && a.distinct_upos == b.distinct_upos &&
               a.period_histogram == b.period_histogram && a.diverged_runs == b.diverged_runs;
    }
};

// Runs `runs` independent stabilization attempts: per-run seeds derive from
// (seed, run index), the feedback connection cycles through the grid, and
// stabilized runs contribute their period and canonical orbit signature.
// Divergent runs are counted, never fatal.
inline EnsembleResult run_ensemble(const NDSParams& setup,
                                   const std::vector<FeedbackConnection>& feedback_grid,
                                   std::size_t runs, std::uint64_t seed,
                                   const EnsembleProtocol& protocol = {},
                                   std::string setup_name = {}) {
    if (runs < 1) throw InvalidArgument("run_ensemble: runs must be >= 1");
    validate(setup);

    EnsembleResult result;
    result.setup_name = std::move(setup_name);
    result.runs = runs;
    std::set<OrbitSignature> signatures;

    for (std::size_t i = 0; i < runs; ++i) {
        NeuronRunConfig cfg;
        cfg.params = setup;
        if (!feedback_grid.empty())
            cfg.feedback.connections = {feedback_grid[i % feedback_grid.size()]};
        cfg.transient_steps = protocol.transient_steps;
        cfg.total_steps = protocol.total_steps;
        cfg.seed = derive_run_seed(seed, i);
        try {
            const Trace trace = run_neuron(cfg);
            const PeriodDetection det = detect_period(trace, protocol.detection);
            if (det.period) {
                ++result.stabilized_runs;
                ++result.period_histogram[*det.period];
                signatures.insert(orbit_signature(trace, *det.period));
            }
        } catch (const DivergenceError&) {
            ++result.diverged_runs;
        }
    }
    result.distinct_upos = signatures.size();
    return result;
}

// Axes of the single-parameter tuning experiments; a/v and b/c vary jointly.
enum class SweepAxis { av, bc, d, k };

inline SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "av" || name == "a&v") return SweepAxis::av;
    if (name == "bc" || name == "b&c") return SweepAxis::bc;
    if (name == "d") return SweepAxis::d;
    if (name == "k") return SweepAxis::k;
    throw UnknownParameter("sweep_parameter: unknown axis '" + name + "'");
}

inline const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::av: return "av";
        case SweepAxis::bc: return "bc";
        case SweepAxis::d: return "d";
        case SweepAxis::k: return "k";
    }
    return "?";
}

inline NDSParams with_axis_value(NDSParams base, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::av: base.a = base.v = value; break;
        case SweepAxis::bc: base.b = base.c = value; break;
        case SweepAxis::d: base.d = value; break;
        case SweepAxis::k: base.k = value; break;
    }
    return base;
}

struct SweepPoint {
    double value = 0.0;
    bool valid = false;
};

// A probe run is "valid" when an attractor exists: bounded well inside the
// divergence threshold, still spiking after the transient, and not collapsed
// onto a fixed point. Near the edges of the valid ranges the attractor
// coexists with divergent initial conditions, so a probe run resamples a
// divergent start (up to max_ic_attempts draws from its seed stream) before
// judging the setting; a setting with no attractor fails every draw.
struct SweepValidity {
    double bound = 100.0;
    std::size_t min_spikes = 2;
    double variance_floor = 1e-8;
    std::size_t max_ic_attempts = 20;
};

namespace detail {

inline bool probe_valid(const Trace& trace, std::size_t transient, const SweepValidity& v) {
    double peak = 0.0;
    for (const auto& s : trace.states) peak = std::max(peak, sup_norm(s));
    if (peak >= v.bound) return false;

    std::size_t spikes = 0;
    for (std::size_t t = transient; t < trace.size(); ++t)
        if (trace.spike(t) == 1) ++spikes;
    if (spikes < v.min_spikes) return false;

    State3 mean{};
    const std::size_t n = trace.size() - transient;
    for (std::size_t t = transient; t < trace.size(); ++t) {
        mean.x += trace.state(t).x;
        mean.y += trace.state(t).y;
        mean.u += trace.state(t).u;
    }
    mean.x /= static_cast<double>(n);
    mean.y /= static_cast<double>(n);
    mean.u /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t t = transient; t < trace.size(); ++t) {
        const State3& s = trace.state(t);
        var += (s.x - mean.x) * (s.x - mean.x) + (s.y - mean.y) * (s.y - mean.y) +
               (s.u - mean.u) * (s.u - mean.u);
    }
    var /= static_cast<double>(n);
    return var > v.variance_floor;
}

}  // namespace detail

// Varies one parameter axis over `values`, keeping everything else at
// `base`; each value is probed with probe_runs free runs from seeded random
// initial conditions and marked valid only if every probe run is.
inline std::vector<SweepPoint> sweep_parameter(const NDSParams& base, const std::string& param_name,
                                               const std::vector<double>& values,
                                               std::size_t probe_runs, std::uint64_t seed,
                                               const EnsembleProtocol& protocol = {},
                                               const SweepValidity& validity = {}) {
    if (probe_runs < 1) throw InvalidArgument("sweep_parameter: probe_runs must be >= 1");
    const SweepAxis axis = parse_sweep_axis(param_name);

    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        const NDSParams params = with_axis_value(base, axis, values[vi]);
        bool valid = true;
        for (std::size_t j = 0; j < probe_runs && valid; ++j) {
            const std::uint64_t probe_seed = derive_run_seed(derive_run_seed(seed, vi), j);
            bool found = false;
            for (std::size_t attempt = 0; attempt < validity.max_ic_attempts; ++attempt) {
                NeuronRunConfig cfg;
                cfg.params = params;
                cfg.transient_steps = protocol.transient_steps;
                cfg.total_steps = protocol.total_steps;
                cfg.seed = derive_run_seed(probe_seed, attempt);
                try {
                    const Trace trace = run_neuron(cfg);
                    found = detail::probe_valid(trace, protocol.transient_steps, validity);
                    break;  // non-divergent trajectory decides the probe
                } catch (const DivergenceError&) {
                    continue;
                }
            }
            valid = found;
        }
        points.push_back(SweepPoint{values[vi], valid});
    }
    return points;
}

struct CalibrationHit {
    double w = 0.0;
    std::size_t tau = 0;
    std::size_t period = 0;
    std::size_t spikes = 0;  // spikes inside one period
};

// Scans (w, tau) in ascending lexicographic order for feedback connections
// that stabilize an orbit with exactly `target_spikes` spikes per period
// (period-4 in the model's sense means 4 spikes per orbit). Every probe
// starts from the same seeded initial condition so the scan varies only the
// connection. Stops at the first hit unless find_all is set.
inline std::vector<CalibrationHit> calibrate_feedback(
    const NDSParams& params, const std::vector<double>& w_grid,
    const std::vector<std::size_t>& tau_grid, std::size_t target_spikes, std::uint64_t seed,
    const EnsembleProtocol& protocol = {}, bool find_all = false) {
    std::vector<CalibrationHit> hits;
    for (double w : w_grid) {
        for (std::size_t tau : tau_grid) {
            NeuronRunConfig cfg;
            cfg.params = params;
            cfg.feedback.connections = {FeedbackConnection{w, tau}};
            cfg.transient_steps = protocol.transient_steps;
            cfg.total_steps = protocol.total_steps;
            cfg.seed = seed;
            try {
                const Trace trace = run_neuron(cfg);
                const PeriodDetection det = detect_period(trace, protocol.detection);
                if (det.period && spikes_per_period(trace, *det.period) == target_spikes) {
                    hits.push_back(CalibrationHit{w, tau, *det.period,
                                                  spikes_per_period(trace, *det.period)});
                    if (!find_all) return hits;
                }
            } catch (const DivergenceError&) {
                continue;
            }
        }
    }
    return hits;
}

}  // namespace nds
