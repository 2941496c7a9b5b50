#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nds/errors.hpp"
#include "nds/types.hpp"
#include "nds/upo.hpp"

namespace nds {

// One row of the tuning-experiment settings: a/v and b/c are tied pairs.
struct SetupRow {
    const char* name;
    double av;
    double bc;
    double d;
    double k;
};

// The fifteen tuning setups. Setup 07 is the original model setting.
inline const std::array<SetupRow, 15>& setup_table() {
    static const std::array<SetupRow, 15> rows = {{
        {"setup01", 0.001, 0.03, 0.8, -0.057},
        {"setup02", 0.01, 0.03, 0.8, -0.057},
        {"setup03", 0.1, 0.03, 0.8, -0.057},
        {"setup04", 0.002, 0.001, 0.8, -0.057},
        {"setup05", 0.002, 0.02, 0.8, -0.057},
        {"setup06", 0.002, 0.05, 0.8, -0.057},
        {"setup07", 0.002, 0.03, 0.8, -0.057},
        {"setup08", 0.002, 0.03, 0.85, -0.057},
        {"setup09", 0.002, 0.03, 0.9, -0.057},
        {"setup10", 0.002, 0.03, 0.8, -0.055},
        {"setup11", 0.002, 0.03, 0.8, -0.056},
        {"setup12", 0.002, 0.03, 0.8, -0.058},
        {"setup13", 0.01, 0.05, 0.85, -0.055},
        {"setup14", 0.002, 0.015, 0.8, -0.058},
        {"setup15", 0.1, 0.04, 0.8, -0.056},
    }};
    return rows;
}

inline NDSParams params_from_setup(const SetupRow& row) {
    NDSParams p;
    p.a = p.v = row.av;
    p.b = p.c = row.bc;
    p.d = row.d;
    p.k = row.k;
    return p;
}

// The continuous-Rossler setting mapped into the neuron's parameter slots at
// TS = 0.015 (sign of the u bracket kept positive through k = 5.7). No UPO
// stabilizes under it.
inline NDSParams rossler_in_nds_params() {
    NDSParams p;
    p.a = p.v = 0.2;
    p.b = p.c = 0.015;
    p.d = 0.015;
    p.k = 5.7;
    return p;
}

// The sign-flipped map obtained by transcribing the Euler-discretized
// Rossler system (TS = 0.0055) into the neuron's equation form; its
// trajectories leave every bounded region.
inline NDSParams nds_form_mapped_params() {
    NDSParams p;
    p.a = p.v = 0.2;
    p.b = p.c = p.d = 0.0055;
    p.k = 5.7;
    return p;
}

inline NDSParams params_for_setup_name(const std::string& name) {
    for (const auto& row : setup_table())
        if (name == row.name) return params_from_setup(row);
    if (name == "rossler-in-nds") return rossler_in_nds_params();
    throw InvalidArgument("unknown setup name '" + name + "'");
}

// Delayed-feedback calibration result: the smallest (w, tau), scanning w
// then tau in ascending order, whose single self-connection stabilizes a
// 4-spike orbit under the seed-1 protocol. Derived constant; regenerate
// with:  ndslab calibrate --seed 1
inline constexpr double calibrated_feedback_w = 0.05;
inline constexpr std::size_t calibrated_feedback_tau = 35;
inline constexpr std::uint64_t calibration_seed = 1;

inline FeedbackConfig calibrated_feedback() {
    return FeedbackConfig{{FeedbackConnection{calibrated_feedback_w, calibrated_feedback_tau}}};
}

// Calibration search grids: w in {0.05, 0.10, ..., 1.00}, tau in {1..100}.
inline std::vector<double> calibration_w_grid() {
    std::vector<double> ws;
    for (int i = 1; i <= 20; ++i) ws.push_back(0.05 * i);
    return ws;
}

inline std::vector<std::size_t> calibration_tau_grid() {
    std::vector<std::size_t> taus;
    for (std::size_t t = 1; t <= 100; ++t) taus.push_back(t);
    return taus;
}

// Feedback grid for ensemble experiments: the calibrated weight with every
// delay in {1..100}, cycled across runs.
inline std::vector<FeedbackConnection> ensemble_feedback_grid() {
    std::vector<FeedbackConnection> grid;
    for (std::size_t tau = 1; tau <= 100; ++tau)
        grid.push_back(FeedbackConnection{calibrated_feedback_w, tau});
    return grid;
}

// Sweep grids covering and exceeding the reported valid ranges. Values that
// appear in the setup table are included so every setup value is probed.
inline std::vector<double> sweep_grid(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::av:
            return {0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.15};
        case SweepAxis::bc:
            return {0.001, 0.005, 0.01, 0.015, 0.02, 0.03, 0.04, 0.05, 0.055, 0.07};
        case SweepAxis::d:
            return {0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
        case SweepAxis::k:
            return {-0.06, -0.059, -0.058, -0.057, -0.056, -0.055, -0.054};
    }
    return {};
}

// The printed k range reads ambiguously (-0.055 vs -0.58 at the far end);
// this wider grid probes the literal reading without replacing the narrow
// one.
inline std::vector<double> sweep_grid_k_wide() {
    return {-0.58, -0.5, -0.4, -0.3, -0.2, -0.1, -0.058, -0.055};
}

}  // namespace nds
