// ndslab: simulation and analysis harness for the NDS chaotic spiking neuron
// and the Rossler system it derives from. Subcommands: trace, analyze,
// sweep, ensemble, plot, calibrate.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nds/analysis.hpp"
#include "nds/integrators.hpp"
#include "nds/io.hpp"
#include "nds/neuron.hpp"
#include "nds/presets.hpp"
#include "nds/svg.hpp"
#include "nds/upo.hpp"

namespace {

constexpr const char* tool_version = "0.1.0";

// 0 success, 2 invalid input, 3 divergence, 4 degenerate parameters
enum ExitCode : int { exit_ok = 0, exit_invalid = 2, exit_divergence = 3, exit_degenerate = 4 };

namespace fs = std::filesystem;
using nds::io::json;

// Relative output paths land in $NDSLAB_OUT_DIR when it is set.
fs::path resolve_out(const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv("NDSLAB_OUT_DIR")) return fs::path(dir) / p;
    return p;
}

std::ofstream open_out(const std::string& path) {
    const fs::path p = resolve_out(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw nds::InvalidArgument("cannot open output file '" + p.string() + "'");
    return os;
}

using ParamMap = std::map<std::string, double>;

ParamMap parse_params(const std::vector<std::string>& kvs) {
    ParamMap params;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw nds::InvalidArgument("--param expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        try {
            params[key] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw nds::InvalidArgument("--param " + key + ": not a number");
        }
    }
    return params;
}

double take(ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    params.erase(it);
    return v;
}

void apply_nds_overrides(ParamMap& params, nds::NDSParams& p) {
    if (params.count("av")) p.a = p.v = take(params, "av", 0);
    if (params.count("bc")) p.b = p.c = take(params, "bc", 0);
    p.a = take(params, "a", p.a);
    p.v = take(params, "v", p.v);
    p.b = take(params, "b", p.b);
    p.c = take(params, "c", p.c);
    p.d = take(params, "d", p.d);
    p.k = take(params, "k", p.k);
    p.theta = take(params, "theta", p.theta);
    p.eta0 = take(params, "eta0", p.eta0);
}

void apply_rossler_overrides(ParamMap& params, nds::RosslerParams& p) {
    p.a = take(params, "a", p.a);
    p.b = take(params, "b", p.b);
    p.c = take(params, "c", p.c);
}

void reject_leftovers(const ParamMap& params) {
    if (!params.empty())
        throw nds::InvalidArgument("unknown --param key '" + params.begin()->first + "'");
}

json meta_block(const std::string& preset, std::uint64_t seed) {
    return json{{"tool", "ndslab"}, {"version", tool_version}, {"preset", preset}, {"seed", seed}};
}

// ---------------------------------------------------------------------------
// trace

struct TraceSpec {
    enum class System { nds, nds_form, rossler_discrete, rossler } system = System::nds;
    nds::NDSParams nds_params;
    nds::RosslerParams rossler_params;
    double ts = nds::default_discrete_rossler_ts;  // rossler_discrete step / rossler dt
    std::optional<nds::State3> s0;                 // absent: seeded random draw
    nds::FeedbackConfig feedback;
    std::size_t transient = 1000;
    std::size_t steps = 10000;
    std::string plot = "series";  // series | phase
};

TraceSpec trace_preset(const std::string& name) {
    TraceSpec spec;
    if (name == "fig1-rossler") {
        spec.system = TraceSpec::System::rossler;
        spec.ts = 0.01;
        spec.steps = 100000;
        spec.s0 = nds::State3{1.0, 1.0, 1.0};
        spec.plot = "phase";
    } else if (name == "fig2-period1" || name == "fig2-period2") {
        spec.system = TraceSpec::System::rossler;
        spec.rossler_params.c = (name == "fig2-period1") ? 2.5 : 3.5;
        spec.ts = 0.01;
        spec.steps = 100000;
        spec.s0 = nds::State3{1.0, 1.0, 1.0};
        spec.plot = "phase";
    } else if (name == "fig3-free-run") {
        spec.system = TraceSpec::System::nds;
    } else if (name == "fig4-period4") {
        spec.system = TraceSpec::System::nds;
        spec.feedback = nds::calibrated_feedback();
    } else if (name == "fig5-discrete-rossler") {
        spec.system = TraceSpec::System::rossler_discrete;
        spec.steps = 200000;
        spec.s0 = nds::State3{1.0, 1.0, 1.0};
        spec.plot = "phase";
    } else if (name == "fig6-nds-form") {
        spec.system = TraceSpec::System::nds_form;
        spec.nds_params = nds::nds_form_mapped_params();
        spec.steps = 1000000;
        spec.s0 = nds::State3{0.1, 0.1, 0.1};
        spec.plot = "phase";
    } else {
        // setup01..setup15 / rossler-in-nds: free neuron run at those values
        spec.system = TraceSpec::System::nds;
        spec.nds_params = nds::params_for_setup_name(name);
    }
    return spec;
}

void write_trace_svg(std::ostream& os, const nds::Trace& trace, const TraceSpec& spec,
                     const std::string& title) {
    if (spec.plot == "phase") {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(trace.size());
        for (const auto& s : trace.states) pts.emplace_back(s.x, s.u);
        nds::svg::write_phase_svg(os, title, pts, "x", "u");
    } else {
        nds::svg::Series u{"u(t)", {}};
        nds::svg::Series gamma{"gamma(t)", {}};
        u.values.reserve(trace.size());
        gamma.values.reserve(trace.size());
        for (std::size_t i = 0; i < trace.size(); ++i) {
            u.values.push_back(trace.state(i).u);
            gamma.values.push_back(trace.spike(i));
        }
        nds::svg::write_series_svg(os, title, {u, gamma}, trace.start_index);
    }
}

int cmd_trace(const std::string& preset, ParamMap params, std::uint64_t seed,
              std::optional<std::size_t> steps_flag, const std::string& out,
              const std::string& format, std::string plot_flag) {
    TraceSpec spec = trace_preset(preset);
    if (steps_flag) spec.steps = *steps_flag;
    if (!plot_flag.empty()) spec.plot = plot_flag;
    spec.ts = take(params, "ts", spec.ts);
    spec.transient = static_cast<std::size_t>(take(params, "transient", (double)spec.transient));
    if (params.count("w") || params.count("tau")) {
        const double w = take(params, "w", nds::calibrated_feedback_w);
        const auto tau = static_cast<std::size_t>(take(params, "tau", (double)nds::calibrated_feedback_tau));
        spec.feedback.connections = {nds::FeedbackConnection{w, tau}};
    }
    if (params.count("x0") || params.count("y0") || params.count("u0")) {
        nds::State3 s0 = spec.s0.value_or(nds::State3{});
        s0.x = take(params, "x0", s0.x);
        s0.y = take(params, "y0", s0.y);
        s0.u = take(params, "u0", s0.u);
        spec.s0 = s0;
    }
    if (spec.system == TraceSpec::System::rossler ||
        spec.system == TraceSpec::System::rossler_discrete)
        apply_rossler_overrides(params, spec.rossler_params);
    else
        apply_nds_overrides(params, spec.nds_params);
    reject_leftovers(params);

    nds::Trace trace;
    bool diverged = false;
    std::size_t diverged_at = 0;
    try {
        switch (spec.system) {
            case TraceSpec::System::nds: {
                nds::NeuronRunConfig cfg;
                cfg.params = spec.nds_params;
                cfg.feedback = spec.feedback;
                cfg.s0 = spec.s0;
                cfg.transient_steps = std::min(spec.transient, spec.steps);
                cfg.total_steps = spec.steps;
                cfg.seed = seed;
                trace = nds::run_neuron(cfg);
                break;
            }
            case TraceSpec::System::nds_form: {
                nds::State3 s0 = spec.s0.value_or(nds::State3{0.1, 0.1, 0.1});
                trace = nds::iterate_nds_form(s0, spec.nds_params, spec.steps);
                break;
            }
            case TraceSpec::System::rossler_discrete: {
                nds::State3 s0 = spec.s0.value_or(nds::State3{1.0, 1.0, 1.0});
                trace = nds::iterate_discrete_rossler(s0, spec.rossler_params,
                                                      nds::StepSize(spec.ts), spec.steps);
                break;
            }
            case TraceSpec::System::rossler: {
                nds::State3 s0 = spec.s0.value_or(nds::State3{1.0, 1.0, 1.0});
                trace = nds::integrate_reference(s0, spec.rossler_params, nds::StepSize(spec.ts),
                                                 spec.steps);
                break;
            }
        }
    } catch (nds::DivergenceError& e) {
        diverged = true;
        diverged_at = e.step;
        trace = std::move(e.partial);
    }

    {
        auto os = open_out(out);
        nds::io::write_trace_csv(os, trace);
    }
    if (format == "svg") {
        const fs::path svg_path = fs::path(out).replace_extension(".svg");
        auto os = open_out(svg_path.string());
        write_trace_svg(os, trace, spec, preset.empty() ? "trace" : preset);
    }
    if (diverged) {
        std::cerr << "ndslab: trajectory diverged at step " << diverged_at << "\n";
        return exit_divergence;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const std::string& system, ParamMap params, const std::string& out,
                const std::string& preset, std::uint64_t seed) {
    json report;
    report["meta"] = meta_block(preset.empty() ? system : preset, seed);
    report["system"] = system;

    if (system == "rossler") {
        nds::RosslerParams p;
        apply_rossler_overrides(params, p);
        reject_leftovers(params);
        const auto reports = nds::rossler_fixed_point_reports(p);
        report["params"] = json{{"a", p.a}, {"b", p.b}, {"c", p.c}};
        report["fixed_points"] = json::array();
        for (const auto& r : reports) report["fixed_points"].push_back(nds::io::to_json(r));
        const double lmax = nds::max_abs_eigenvalue_rossler(p);
        report["max_abs_eigenvalue"] = lmax;
        report["ts_bound"] = nds::ts_bound(lmax);
    } else if (system == "nds") {
        nds::NDSParams p;
        apply_nds_overrides(params, p);
        reject_leftovers(params);
        const auto reports = nds::nds_fixed_point_reports(p);
        report["params"] = json{{"a", p.a}, {"v", p.v}, {"b", p.b}, {"c", p.c},
                                {"d", p.d}, {"k", p.k}, {"theta", p.theta}, {"eta0", p.eta0}};
        report["fixed_points"] = json::array();
        for (const auto& r : reports) report["fixed_points"].push_back(nds::io::to_json(r));
        const double lmax = nds::max_abs_eigenvalue_nds_map(p);
        report["max_abs_eigenvalue"] = lmax;
        report["ts_bound"] = nds::ts_bound(lmax);
    } else {
        throw nds::InvalidArgument("analyze: system must be rossler or nds");
    }

    if (out == "-") {
        std::cout << report.dump(2) << "\n";
    } else {
        auto os = open_out(out);
        os << report.dump(2) << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& preset, const std::string& axis_flag,
              std::vector<double> values, std::size_t probe_runs, std::uint64_t seed,
              ParamMap params, const std::string& out) {
    std::string axis;
    if (!preset.empty()) {
        const std::string prefix = "table1-sweep-";
        if (preset.rfind(prefix, 0) != 0)
            throw nds::InvalidArgument("unknown sweep preset '" + preset + "'");
        std::string which = preset.substr(prefix.size());
        if (which == "a") which = "av";  // a and v vary jointly
        if (which == "b") which = "bc";
        if (which == "k-wide") {
            axis = "k";
            if (values.empty()) values = nds::sweep_grid_k_wide();
        } else {
            axis = which;
            if (values.empty()) values = nds::sweep_grid(nds::parse_sweep_axis(which));
        }
    } else {
        axis = axis_flag;
    }
    if (axis.empty() || values.empty())
        throw nds::InvalidArgument("sweep: need --preset or --axis with --values");

    nds::NDSParams base;
    apply_nds_overrides(params, base);
    reject_leftovers(params);

    const auto points = nds::sweep_parameter(base, axis, values, probe_runs, seed);
    auto os = open_out(out);
    nds::io::write_sweep_csv(os, nds::to_string(nds::parse_sweep_axis(axis)), points);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// ensemble

int cmd_ensemble(const std::string& preset, std::size_t runs, std::uint64_t seed,
                 ParamMap params, const std::string& out) {
    if (runs < 1) throw nds::InvalidArgument("ensemble: --runs must be >= 1");

    std::vector<nds::EnsembleResult> results;
    const auto grid = nds::ensemble_feedback_grid();
    if (preset == "fig7-ensemble") {
        reject_leftovers(params);
        for (const auto& row : nds::setup_table())
            results.push_back(nds::run_ensemble(nds::params_from_setup(row), grid, runs, seed,
                                                {}, row.name));
    } else {
        nds::NDSParams setup = nds::params_for_setup_name(preset);
        apply_nds_overrides(params, setup);
        reject_leftovers(params);
        results.push_back(nds::run_ensemble(setup, grid, runs, seed, {}, preset));
    }

    json doc;
    doc["meta"] = meta_block(preset, seed);
    doc["meta"]["runs"] = runs;
    doc["results"] = json::array();
    for (const auto& r : results) doc["results"].push_back(nds::io::to_json(r));
    {
        auto os = open_out(out);
        os << doc.dump(2) << "\n";
    }
    {
        const fs::path hist = fs::path(out).replace_extension(".hist.csv");
        auto os = open_out(hist.string());
        nds::io::write_period_histogram_csv(os, results);
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// plot

int cmd_plot(const std::string& kind, const std::vector<std::string>& inputs,
             const std::string& out, const std::string& title) {
    if (inputs.empty()) throw nds::InvalidArgument("plot: need at least one --in file");

    if (kind == "ensemble") {
        std::vector<nds::EnsembleResult> results;
        for (const auto& file : inputs) {
            std::ifstream is(resolve_out(file));
            if (!is) throw nds::InvalidArgument("plot: cannot read '" + file + "'");
            json doc = json::parse(is);
            for (const auto& rj : doc.at("results"))
                results.push_back(nds::io::ensemble_from_json(rj));
        }
        std::vector<std::string> categories;
        nds::svg::Series stabilized{"stabilized runs", {}};
        nds::svg::Series distinct{"distinct UPOs", {}};
        for (const auto& r : results) {
            categories.push_back(r.setup_name);
            stabilized.values.push_back(static_cast<double>(r.stabilized_runs));
            distinct.values.push_back(static_cast<double>(r.distinct_upos));
        }
        auto os = open_out(out);
        nds::svg::write_bars_svg(os, title.empty() ? "stabilized UPOs per setup" : title,
                                 categories, {stabilized, distinct});
        return exit_ok;
    }

    std::ifstream is(resolve_out(inputs.front()));
    if (!is) throw nds::InvalidArgument("plot: cannot read '" + inputs.front() + "'");
    const nds::Trace trace = nds::io::read_trace_csv(is);
    auto os = open_out(out);
    if (kind == "phase") {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(trace.size());
        for (const auto& s : trace.states) pts.emplace_back(s.x, s.u);
        nds::svg::write_phase_svg(os, title.empty() ? "phase plane" : title, pts, "x", "u");
    } else if (kind == "series") {
        nds::svg::Series u{"u(t)", {}};
        nds::svg::Series gamma{"gamma(t)", {}};
        for (std::size_t i = 0; i < trace.size(); ++i) {
            u.values.push_back(trace.state(i).u);
            gamma.values.push_back(trace.spike(i));
        }
        nds::svg::write_series_svg(os, title.empty() ? "time series" : title, {u, gamma},
                                   trace.start_index);
    } else {
        throw nds::InvalidArgument("plot: kind must be series, phase or ensemble");
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(std::uint64_t seed, std::size_t target_spikes, bool full,
                  const std::string& out) {
    const auto hits = nds::calibrate_feedback(nds::NDSParams{}, nds::calibration_w_grid(),
                                              nds::calibration_tau_grid(), target_spikes, seed,
                                              {}, full);
    if (!out.empty()) {
        auto os = open_out(out);
        os << "w,tau,period,spikes_per_period\n";
        for (const auto& h : hits)
            os << nds::io::format_double_shortest(h.w) << ',' << h.tau << ',' << h.period << ','
               << h.spikes << '\n';
    }
    if (hits.empty()) {
        std::cout << "no stabilizing (w, tau) found\n";
        return exit_ok;
    }
    const auto& h = hits.front();
    std::cout << "smallest (w, tau) stabilizing a " << target_spikes << "-spike orbit: w="
              << nds::io::format_double_shortest(h.w) << " tau=" << h.tau << " period=" << h.period
              << " (" << hits.size() << " hit" << (hits.size() == 1 ? "" : "s") << ")\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NDS chaotic spiking neuron / Rossler system toolkit"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    std::string preset, format = "csv", plot_kind, system, axis, title;
    std::string trace_out = "trace.csv", analyze_out = "-", sweep_out = "sweep.csv";
    std::string ensemble_out = "ensemble.json", plot_out = "plot.svg", calibrate_out;
    std::vector<std::string> param_kvs, inputs;
    std::vector<double> values;
    std::uint64_t seed = 1;
    std::size_t runs = 1000, probe_runs = 5, target_spikes = 4;
    std::optional<std::size_t> steps;
    bool full = false;

    auto* trace = app.add_subcommand("trace", "simulate and write a CSV trace");
    trace->add_option("--preset", preset,
                      "fig1-rossler, fig2-period{1,2}, fig3-free-run, fig4-period4, "
                      "fig5-discrete-rossler, fig6-nds-form, setup01..setup15, rossler-in-nds");
    trace->add_option("--seed", seed, "random seed");
    trace->add_option("--steps", steps, "number of time indices");
    trace->add_option("--out", trace_out, "output CSV path");
    trace->add_option("--format", format, "csv | svg (svg also writes <out>.svg)")
        ->check(CLI::IsMember({"csv", "svg"}));
    trace->add_option("--plot", plot_kind, "series | phase (svg flavor)")
        ->check(CLI::IsMember({"", "series", "phase"}));
    trace->add_option("--param", param_kvs, "override key=value (repeatable)");

    auto* analyze = app.add_subcommand("analyze", "fixed points, eigenvalues, classification");
    analyze->add_option("system", system, "rossler | nds")->required();
    analyze->add_option("--out", analyze_out, "output JSON path, - for stdout");
    analyze->add_option("--preset", preset, "label recorded in the report meta");
    analyze->add_option("--seed", seed, "label recorded in the report meta");
    analyze->add_option("--param", param_kvs, "override key=value (repeatable)");

    auto* sweep = app.add_subcommand("sweep", "parameter-range validity sweep");
    sweep->add_option("--preset", preset, "table1-sweep-{a,av,bc,d,k,k-wide}");
    sweep->add_option("--axis", axis, "av | bc | d | k (with --values)");
    sweep->add_option("--values", values, "explicit grid values");
    sweep->add_option("--probe-runs", probe_runs, "probe runs per value");
    sweep->add_option("--seed", seed, "random seed");
    sweep->add_option("--out", sweep_out, "output CSV path");
    sweep->add_option("--param", param_kvs, "override base key=value (repeatable)");

    auto* ensemble = app.add_subcommand("ensemble", "stabilized-UPO counting ensemble");
    ensemble->add_option("--preset", preset, "setup01..setup15, rossler-in-nds, fig7-ensemble")
        ->required();
    ensemble->add_option("--runs", runs, "runs per setup");
    ensemble->add_option("--seed", seed, "master seed");
    ensemble->add_option("--out", ensemble_out, "output JSON path (also writes <out>.hist.csv)");
    ensemble->add_option("--param", param_kvs, "override setup key=value (repeatable)");

    auto* plot = app.add_subcommand("plot", "render SVG from trace CSV or ensemble JSON");
    plot->add_option("--kind", plot_kind, "series | phase | ensemble")->required();
    plot->add_option("--in", inputs, "input file(s)")->required();
    plot->add_option("--out", plot_out, "output SVG path");
    plot->add_option("--title", title, "plot title");

    auto* calibrate = app.add_subcommand("calibrate", "scan (w, tau) for a 4-spike orbit");
    calibrate->add_option("--seed", seed, "initial-condition seed");
    calibrate->add_option("--target-spikes", target_spikes, "spikes per period to look for");
    calibrate->add_flag("--full", full, "scan the whole grid instead of stopping at the first hit");
    calibrate->add_option("--out", calibrate_out, "optional CSV of hits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid;
    }

    try {
        ParamMap params = parse_params(param_kvs);
        if (trace->parsed()) {
            if (preset.empty()) preset = "fig3-free-run";
            return cmd_trace(preset, std::move(params), seed, steps, trace_out, format, plot_kind);
        }
        if (analyze->parsed()) return cmd_analyze(system, std::move(params), analyze_out, preset, seed);
        if (sweep->parsed()) return cmd_sweep(preset, axis, values, probe_runs, seed, std::move(params), sweep_out);
        if (ensemble->parsed()) return cmd_ensemble(preset, runs, seed, std::move(params), ensemble_out);
        if (plot->parsed()) return cmd_plot(plot_kind, inputs, plot_out, title);
        if (calibrate->parsed()) return cmd_calibrate(seed, target_spikes, full, calibrate_out);
    } catch (const nds::DegenerateParams& e) {
        std::cerr << "ndslab: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const nds::DivergenceError& e) {
        std::cerr << "ndslab: " << e.what() << "\n";
        return exit_divergence;
    } catch (const nds::Error& e) {
        std::cerr << "ndslab: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "ndslab: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}
