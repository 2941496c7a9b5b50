#pragma once

#include <cstddef>
#include <utility>

#include "nds/errors.hpp"
#include "nds/types.hpp"

namespace nds {

// Positive time step for the discretized systems.
struct StepSize {
    double ts;

    explicit StepSize(double step) : ts(step) {
        if (!(step > 0.0)) throw InvalidArgument("StepSize: ts must be > 0");
    }
};

// Rossler vector field with u in the z role:
//   x' = -y - u
//   y' = x + a*y
//   u' = b + u*(x - c)
inline State3 rossler_derivative(const State3& s, const RosslerParams& p) {
    State3 d;
    d.x = -s.y - s.u;
    d.y = s.x + p.a * s.y;
    d.u = p.b + s.u * (s.x - p.c);
    return d;
}

// One Euler-forward step of the discretized Rossler system,
// x(t+1) = x(t) + TS*(-y - u), etc. Written as s + TS*f(s) so the step is
// bit-exactly the Euler form of rossler_derivative.
inline State3 euler_discrete_rossler_step(const State3& s, const RosslerParams& p,
                                          const StepSize& ts) {
    const State3 d = rossler_derivative(s, p);
    return State3{s.x + ts.ts * d.x, s.y + ts.ts * d.y, s.u + ts.ts * d.u};
}

// The NDS-form map without any reset mechanism:
//   x(t+1) = x + b*(-y - u)
//   y(t+1) = y + c*(x + a*y)
//   u(t+1) = u + d*(v + u*(-x + k))
// This is the sub-threshold branch of the neuron update with F = In = 0, and
// differs from the Euler-discretized Rossler map only in the sign of the
// (x - c) bracket of the third component.
inline State3 nds_form_step(const State3& s, const NDSParams& p) {
    State3 n;
    n.x = s.x + p.b * (-s.y - s.u);
    n.y = s.y + p.c * (s.x + p.a * s.y);
    n.u = s.u + p.d * (p.v + s.u * (-s.x + p.k));
    return n;
}

// Preferred simulation time step for a system whose linearization has
// largest absolute eigenvalue lambda_max_abs: TS <= 0.1 / |lambda|max.
inline double ts_bound(double lambda_max_abs) {
    if (!(lambda_max_abs > 0.0)) throw NonPositive("ts_bound: |lambda|max must be > 0");
    return 0.1 / lambda_max_abs;
}

// Iterates a one-step map n times from s0, recording every state. Throws
// DivergenceError (with the finite prefix) once the trajectory leaves the
// divergence threshold.
template <class StepFn>
Trace iterate_map(const State3& s0, std::size_t n, StepFn&& step) {
    if (n < 1) throw InvalidArgument("iterate_map: n must be >= 1");
    if (!is_finite(s0)) throw InvalidArgument("iterate_map: non-finite initial state");

    Trace trace;
    trace.reserve(n + 1);
    trace.append(s0, 0);
    State3 s = s0;
    for (std::size_t i = 0; i < n; ++i) {
        s = step(s);
        if (!is_finite(s) || sup_norm(s) > divergence_threshold)
            throw DivergenceError(i + 1, std::move(trace));
        trace.append(s, 0);
    }
    return trace;
}

inline Trace iterate_discrete_rossler(const State3& s0, const RosslerParams& p,
                                      const StepSize& ts, std::size_t n) {
    return iterate_map(s0, n, [&](const State3& s) { return euler_discrete_rossler_step(s, p, ts); });
}

inline Trace iterate_nds_form(const State3& s0, const NDSParams& p, std::size_t n) {
    return iterate_map(s0, n, [&](const State3& s) { return nds_form_step(s, p); });
}

// Reference trajectory of the continuous Rossler system via the classical
// 4th-order Runge-Kutta scheme. Deterministic for fixed inputs; returns
// n + 1 states (the initial one included).
inline Trace integrate_reference(const State3& s0, const RosslerParams& p,
                                 const StepSize& dt, std::size_t n) {
    if (n < 1) throw InvalidArgument("integrate_reference: n must be >= 1");
    if (!is_finite(s0)) throw InvalidArgument("integrate_reference: non-finite initial state");
    validate(p);

    const double h = dt.ts;
    auto axpy = [](const State3& s, double a, const State3& d) {
        return State3{s.x + a * d.x, s.y + a * d.y, s.u + a * d.u};
    };

    Trace trace;
    trace.reserve(n + 1);
    trace.append(s0, 0);
    State3 s = s0;
    for (std::size_t i = 0; i < n; ++i) {
        const State3 k1 = rossler_derivative(s, p);
        const State3 k2 = rossler_derivative(axpy(s, h / 2.0, k1), p);
        const State3 k3 = rossler_derivative(axpy(s, h / 2.0, k2), p);
        const State3 k4 = rossler_derivative(axpy(s, h, k3), p);
        s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        s.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        if (!is_finite(s) || sup_norm(s) > divergence_threshold)
            throw DivergenceError(i + 1, std::move(trace));
        trace.append(s, 0);
    }
    return trace;
}

// Default step of the Euler-discretized Rossler map.
inline constexpr double default_discrete_rossler_ts = 0.0055;

}  // namespace nds
