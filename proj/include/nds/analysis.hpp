#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include "nds/errors.hpp"
#include "nds/integrators.hpp"
#include "nds/types.hpp"

namespace nds {

struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    double& operator()(std::size_t r, std::size_t c) { return m[r][c]; }
    double operator()(std::size_t r, std::size_t c) const { return m[r][c]; }

    double inf_norm() const {
        double best = 0.0;
        for (const auto& row : m) {
            const double s = std::fabs(row[0]) + std::fabs(row[1]) + std::fabs(row[2]);
            best = std::max(best, s);
        }
        return best;
    }
};

using Complex = std::complex<double>;
using Eigentriple = std::array<Complex, 3>;

enum class SystemKind { continuous_flow, discrete_map };

enum class FixedPointClass {
    spiral_saddle,
    spiral_repellor,
    spiral_attractor,
    node_like,
    center_like,
};

inline const char* to_string(FixedPointClass c) {
    switch (c) {
        case FixedPointClass::spiral_saddle: return "spiral-saddle";
        case FixedPointClass::spiral_repellor: return "spiral-repellor";
        case FixedPointClass::spiral_attractor: return "spiral-attractor";
        case FixedPointClass::node_like: return "node-like";
        case FixedPointClass::center_like: return "center-like";
    }
    return "unknown";
}

inline const char* to_string(SystemKind k) {
    return k == SystemKind::continuous_flow ? "continuous-flow" : "discrete-map";
}

struct FixedPointReport {
    State3 point;
    Eigentriple eigenvalues;
    FixedPointClass classification;
    SystemKind system_kind;
};

// Both fixed points of the continuous Rossler flow: roots of
// x^2 - c*x + a*b = 0 with y = -x/a, u = x/a. Returned with the larger x
// (outer point) first.
inline std::array<State3, 2> fixed_points_rossler(const RosslerParams& p) {
    validate(p);
    if (p.a == 0.0) throw DegenerateParams("fixed_points_rossler: a must be nonzero");
    const double disc = p.c * p.c - 4.0 * p.a * p.b;
    if (disc < 0.0) throw ComplexRoots("fixed_points_rossler: c^2 < 4ab");
    const double root = std::sqrt(disc);
    // Stable quadratic: compute the large-magnitude root first, the other
    // via the product of roots (a*b) to avoid cancellation.
    const double x_big = (p.c >= 0.0) ? (p.c + root) / 2.0 : (p.c - root) / 2.0;
    const double x_small = (x_big != 0.0) ? (p.a * p.b) / x_big : (p.c - root) / 2.0;
    const double x1 = std::max(x_big, x_small);
    const double x2 = std::min(x_big, x_small);
    auto mk = [&](double x) { return State3{x, -x / p.a, x / p.a}; };
    return {mk(x1), mk(x2)};
}

// Both fixed points of the sub-threshold NDS map (F = In = 0): roots of
// x^2 - k*x - a*v = 0 with y = -x/a, u = x/a. The scaling steps b, c, d do
// not enter; scaling them leaves the roots unchanged.
inline std::array<State3, 2> fixed_points_nds(const NDSParams& p) {
    validate(p);
    if (p.a == 0.0) throw DegenerateParams("fixed_points_nds: a must be nonzero");
    if (p.b == 0.0 || p.c == 0.0 || p.d == 0.0)
        throw DegenerateParams("fixed_points_nds: b, c, d must be nonzero");
    const double disc = p.k * p.k + 4.0 * p.a * p.v;
    if (disc < 0.0) throw ComplexRoots("fixed_points_nds: k^2 + 4av < 0");
    const double root = std::sqrt(disc);
    const double x_big = (p.k >= 0.0) ? (p.k + root) / 2.0 : (p.k - root) / 2.0;
    const double x_small = (x_big != 0.0) ? (-p.a * p.v) / x_big : (p.k - root) / 2.0;
    const double x1 = std::max(x_big, x_small);
    const double x2 = std::min(x_big, x_small);
    auto mk = [&](double x) { return State3{x, -x / p.a, x / p.a}; };
    return {mk(x1), mk(x2)};
}

// Jacobian of the continuous Rossler field at s.
inline Mat3 jacobian_rossler(const State3& s, const RosslerParams& p) {
    Mat3 j;
    j.m = {{{0.0, -1.0, -1.0},
            {1.0, p.a, 0.0},
            {s.u, 0.0, s.x - p.c}}};
    return j;
}

// Jacobian of the sub-threshold NDS map at s (the reset branch is
// discontinuous and excluded from linearization).
inline Mat3 jacobian_nds_map(const State3& s, const NDSParams& p) {
    Mat3 j;
    j.m = {{{1.0, -p.b, -p.b},
            {p.c, 1.0 + p.c * p.a, 0.0},
            {-p.d * s.u, 0.0, 1.0 + p.d * (-s.x + p.k)}}};
    return j;
}

namespace detail {

// Roots of the monic cubic z^3 + c2*z^2 + c1*z + c0 = 0, closed form.
// One depressed-cubic branch per discriminant sign; no iteration.
inline Eigentriple solve_monic_cubic(double c2, double c1, double c0) {
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    const double shift = -c2 / 3.0;
    const double scale = std::max({std::fabs(c2), std::sqrt(std::fabs(c1)),
                                   std::cbrt(std::fabs(c0)), 1.0});
    const double tiny = 1e-14 * scale * scale * scale;

    Eigentriple roots;
    if (std::fabs(p) <= tiny && std::fabs(q) <= tiny) {
        // Triple root.
        roots = {Complex(shift), Complex(shift), Complex(shift)};
        return roots;
    }

    const double delta = q * q / 4.0 + p * p * p / 27.0;
    if (delta > 0.0) {
        // One real root; take the cube root of the larger-magnitude term to
        // avoid cancellation, recover the partner from p.
        const double sd = std::sqrt(delta);
        const double w = (q <= 0.0) ? (-q / 2.0 + sd) : (-q / 2.0 - sd);
        const double a = std::cbrt(w);
        const double b = (a != 0.0) ? -p / (3.0 * a) : 0.0;
        const double t_real = a + b;
        const double real_root = t_real + shift;
        // Deflate: z^2 + B*z + C.
        const double B = c2 + real_root;
        const double C = c1 + real_root * B;
        const double qdisc = B * B - 4.0 * C;
        if (qdisc >= 0.0) {
            const double r = std::sqrt(qdisc);
            roots = {Complex(real_root), Complex((-B + r) / 2.0), Complex((-B - r) / 2.0)};
        } else {
            const double im = std::sqrt(-qdisc) / 2.0;
            roots = {Complex(real_root), Complex(-B / 2.0, im), Complex(-B / 2.0, -im)};
        }
    } else {
        // Three real roots (trigonometric form).
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double t = m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
            roots[static_cast<std::size_t>(k)] = Complex(t + shift);
        }
    }
    return roots;
}

}  // namespace detail

// The three eigenvalues of m, sorted by descending magnitude (ties broken by
// descending real then imaginary part, so a conjugate pair appears with the
// positive-imaginary member first).
inline Eigentriple eigenvalues3(const Mat3& m) {
    const double tr = m(0, 0) + m(1, 1) + m(2, 2);
    const double minors = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1) +
                          m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                          m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                       m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                       m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));

    Eigentriple eigs = detail::solve_monic_cubic(-tr, minors, -det);
    std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return eigs;
}

// Residual |det(m - lambda*I)| of one eigenvalue candidate.
inline double eigenvalue_residual(const Mat3& m, const Complex& lambda) {
    std::array<std::array<Complex, 3>, 3> a;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            a[r][c] = Complex(m(r, c)) - (r == c ? lambda : Complex(0.0));
    const Complex det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                        a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                        a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    return std::abs(det);
}

// Stability-boundary tolerance for classification: eigenvalues with real
// part (flows) or unit-circle distance (maps) below this are not guessed.
inline constexpr double classification_boundary_tol = 1e-9;

// Classifies a fixed point from its linearization spectrum.
//
// Flows measure stability by the sign of Re(lambda), maps by |lambda| vs 1.
// With a complex pair present, a flow is a repellor/attractor only when every
// direction agrees and a saddle otherwise; a map spirals out as soon as the
// complex pair expands, so the pair decides first and the remaining real
// eigenvalue only separates saddle from attractor on a contracting pair.
inline FixedPointClass classify_fixed_point(const Eigentriple& eigs, SystemKind kind) {
    std::array<double, 3> measure{};  // > 0 means unstable direction
    for (std::size_t i = 0; i < 3; ++i) {
        measure[i] = (kind == SystemKind::continuous_flow) ? eigs[i].real()
                                                           : std::abs(eigs[i]) - 1.0;
        if (std::fabs(measure[i]) < classification_boundary_tol)
            throw Unclassifiable("classify_fixed_point: eigenvalue on stability boundary");
    }

    int pair_a = -1, pair_b = -1, lone = -1;
    for (int i = 0; i < 3; ++i) {
        if (std::fabs(eigs[static_cast<std::size_t>(i)].imag()) > classification_boundary_tol) {
            (pair_a < 0 ? pair_a : pair_b) = i;
        } else {
            lone = i;
        }
    }

    if (pair_a < 0) return FixedPointClass::node_like;
    if (pair_b < 0 || lone < 0)
        throw Unclassifiable("classify_fixed_point: no conjugate pair structure");

    const double pair_measure = measure[static_cast<std::size_t>(pair_a)];
    const double lone_measure = measure[static_cast<std::size_t>(lone)];

    if (kind == SystemKind::discrete_map) {
        if (pair_measure > 0.0) return FixedPointClass::spiral_repellor;
        if (lone_measure > 0.0) return FixedPointClass::spiral_saddle;
        return FixedPointClass::spiral_attractor;
    }
    if (pair_measure > 0.0 && lone_measure > 0.0) return FixedPointClass::spiral_repellor;
    if (pair_measure < 0.0 && lone_measure < 0.0) return FixedPointClass::spiral_attractor;
    return FixedPointClass::spiral_saddle;
}

inline std::array<FixedPointReport, 2> rossler_fixed_point_reports(const RosslerParams& p) {
    const auto points = fixed_points_rossler(p);
    std::array<FixedPointReport, 2> reports;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto eigs = eigenvalues3(jacobian_rossler(points[i], p));
        reports[i] = FixedPointReport{points[i], eigs,
                                      classify_fixed_point(eigs, SystemKind::continuous_flow),
                                      SystemKind::continuous_flow};
    }
    return reports;
}

inline std::array<FixedPointReport, 2> nds_fixed_point_reports(const NDSParams& p) {
    const auto points = fixed_points_nds(p);
    std::array<FixedPointReport, 2> reports;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto eigs = eigenvalues3(jacobian_nds_map(points[i], p));
        reports[i] = FixedPointReport{points[i], eigs,
                                      classify_fixed_point(eigs, SystemKind::discrete_map),
                                      SystemKind::discrete_map};
    }
    return reports;
}

// Largest absolute eigenvalue over both fixed points of the continuous
// Rossler linearization; feeding it to ts_bound gives the preferred step.
inline double max_abs_eigenvalue_rossler(const RosslerParams& p) {
    const auto points = fixed_points_rossler(p);
    double best = 0.0;
    for (const auto& pt : points) {
        const auto eigs = eigenvalues3(jacobian_rossler(pt, p));
        for (const auto& e : eigs) best = std::max(best, std::abs(e));
    }
    return best;
}

inline double max_abs_eigenvalue_nds_map(const NDSParams& p) {
    const auto points = fixed_points_nds(p);
    double best = 0.0;
    for (const auto& pt : points) {
        const auto eigs = eigenvalues3(jacobian_nds_map(pt, p));
        for (const auto& e : eigs) best = std::max(best, std::abs(e));
    }
    return best;
}

}  // namespace nds
