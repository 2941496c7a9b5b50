#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nds/analysis.hpp"
#include "nds/errors.hpp"
#include "nds/types.hpp"
#include "nds/upo.hpp"

namespace nds::io {

using json = nlohmann::ordered_json;

// Decimal text with 17 significant digits: doubles round-trip losslessly.
// Traces use this fixed-width schema.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Shortest decimal text that round-trips exactly; used where humans read
// the values (sweep grids, calibration results).
inline std::string format_double_shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline const char* trace_csv_header = "t,x,y,u,gamma";

inline void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << trace_csv_header << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const State3& s = trace.state(i);
        os << (trace.start_index + static_cast<long>(i)) << ',' << format_double(s.x) << ','
           << format_double(s.y) << ',' << format_double(s.u) << ','
           << static_cast<int>(trace.spike(i)) << '\n';
    }
}

inline Trace read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,", 0) != 0)
        throw InvalidArgument("trace csv: missing header");
    Trace trace;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        long t = 0;
        double x = 0, y = 0, u = 0;
        int gamma = 0;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf,%d", &t, &x, &y, &u, &gamma) != 5)
            throw InvalidArgument("trace csv: malformed row '" + line + "'");
        if (first) {
            trace.start_index = t;
            first = false;
        }
        trace.append(State3{x, y, u}, static_cast<std::uint8_t>(gamma));
    }
    return trace;
}

inline json to_json(const State3& s) {
    return json{{"x", s.x}, {"y", s.y}, {"u", s.u}};
}

inline json to_json(const FixedPointReport& r) {
    json eigs = json::array();
    for (const auto& e : r.eigenvalues)
        eigs.push_back(json{{"re", e.real()}, {"im", e.imag()}, {"abs", std::abs(e)}});
    return json{{"point", to_json(r.point)},
                {"eigenvalues", eigs},
                {"classification", to_string(r.classification)},
                {"system_kind", to_string(r.system_kind)}};
}

inline json to_json(const EnsembleResult& r) {
    json hist = json::object();
    for (const auto& [period, count] : r.period_histogram)
        hist[std::to_string(period)] = count;
    return json{{"setup", r.setup_name},
                {"runs", r.runs},
                {"stabilized_runs", r.stabilized_runs},
                {"distinct_upos", r.distinct_upos},
                {"diverged_runs", r.diverged_runs},
                {"period_histogram", hist}};
}

inline EnsembleResult ensemble_from_json(const json& j) {
    EnsembleResult r;
    r.setup_name = j.at("setup").get<std::string>();
    r.runs = j.at("runs").get<std::size_t>();
    r.stabilized_runs = j.at("stabilized_runs").get<std::size_t>();
    r.distinct_upos = j.at("distinct_upos").get<std::size_t>();
    r.diverged_runs = j.at("diverged_runs").get<std::size_t>();
    for (const auto& [key, value] : j.at("period_histogram").items())
        r.period_histogram[std::stoul(key)] = value.get<std::size_t>();
    return r;
}

inline void write_period_histogram_csv(std::ostream& os, const std::vector<EnsembleResult>& results) {
    os << "setup,period,count\n";
    for (const auto& r : results)
        for (const auto& [period, count] : r.period_histogram)
            os << r.setup_name << ',' << period << ',' << count << '\n';
}

inline void write_sweep_csv(std::ostream& os, const std::string& parameter,
                            const std::vector<SweepPoint>& points) {
    os << "parameter,value,valid\n";
    for (const auto& pt : points)
        os << parameter << ',' << format_double_shortest(pt.value) << ','
           << (pt.valid ? 1 : 0) << '\n';
}

}  // namespace nds::io
