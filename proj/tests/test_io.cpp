#include <catch2/catch.hpp>

#include <sstream>
#include <string>

#include "nds/io.hpp"
#include "nds/random.hpp"
#include "nds/svg.hpp"
#include "nds/types.hpp"
#include "nds/upo.hpp"

using namespace nds;

TEST_CASE("doubles survive a text round trip") {
    Rng rng(314);
    for (int i = 0; i < 200; ++i) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-12, 12));
        CHECK(std::stod(io::format_double(v)) == v);
        CHECK(std::stod(io::format_double_shortest(v)) == v);
    }
    CHECK(std::stod(io::format_double(0.1)) == 0.1);
    CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(std::stod(io::format_double(-0.057)) == -0.057);
    CHECK(io::format_double_shortest(0.05) == "0.05");
    CHECK(io::format_double_shortest(-0.057) == "-0.057");
}

TEST_CASE("trace csv round trip is exact") {
    Rng rng(2718);
    Trace t;
    t.start_index = 5;
    for (int i = 0; i < 300; ++i)
        t.append(State3{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)},
                 static_cast<std::uint8_t>(rng.next_u64() & 1u));

    std::stringstream ss;
    io::write_trace_csv(ss, t);
    const Trace back = io::read_trace_csv(ss);

    REQUIRE(back.size() == t.size());
    CHECK(back.start_index == t.start_index);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back.state(i) == t.state(i));  // bitwise through 17 significant digits
        CHECK(back.spike(i) == t.spike(i));
    }
}

TEST_CASE("trace csv header and errors") {
    Trace t;
    t.append(State3{1, 2, 3}, 1);
    std::stringstream ss;
    io::write_trace_csv(ss, t);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "t,x,y,u,gamma");
    std::string row;
    std::getline(ss, row);
    CHECK(row == "0,1,2,3,1");

    std::stringstream bad("x,y\n1,2\n");
    CHECK_THROWS_AS(io::read_trace_csv(bad), InvalidArgument);
}

TEST_CASE("ensemble json round trip") {
    EnsembleResult r;
    r.setup_name = "setup07";
    r.runs = 100;
    r.stabilized_runs = 40;
    r.distinct_upos = 12;
    r.diverged_runs = 3;
    r.period_histogram = {{45, 20}, {90, 20}};

    const io::json j = io::to_json(r);
    const EnsembleResult back = io::ensemble_from_json(j);
    CHECK(back == r);
    CHECK(j.at("setup") == "setup07");
    CHECK(j.at("period_histogram").at("45") == 20);
}

TEST_CASE("histogram and sweep csv shapes") {
    EnsembleResult r;
    r.setup_name = "s";
    r.period_histogram = {{4, 2}, {8, 1}};
    std::stringstream hs;
    io::write_period_histogram_csv(hs, {r});
    CHECK(hs.str() == "setup,period,count\ns,4,2\ns,8,1\n");

    std::stringstream ss;
    io::write_sweep_csv(ss, "d", {{0.8, true}, {0.95, false}});
    CHECK(ss.str() == "parameter,value,valid\nd,0.8,1\nd,0.95,0\n");
}

TEST_CASE("svg emitters produce well-formed documents") {
    SECTION("time series") {
        std::stringstream ss;
        svg::write_series_svg(ss, "u(t)", {{"u", {0.1, 0.2, -0.3, 0.4}}}, 0);
        const std::string doc = ss.str();
        CHECK(doc.find("<svg") != std::string::npos);
        CHECK(doc.find("viewBox") != std::string::npos);
        CHECK(doc.find("<polyline") != std::string::npos);
        CHECK(doc.rfind("</svg>\n") == doc.size() - 7);
    }
    SECTION("phase plane") {
        std::stringstream ss;
        svg::write_phase_svg(ss, "phase", {{0, 0}, {1, 1}, {2, 0}}, "x", "u");
        const std::string doc = ss.str();
        CHECK(doc.find("<polyline") != std::string::npos);
        CHECK(doc.find("phase") != std::string::npos);
    }
    SECTION("bars") {
        std::stringstream ss;
        svg::write_bars_svg(ss, "counts", {"a", "b"}, {{"runs", {3.0, 5.0}}});
        const std::string doc = ss.str();
        CHECK(doc.find("<rect") != std::string::npos);
        CHECK(doc.find("runs") != std::string::npos);
    }
    SECTION("emission is deterministic") {
        std::stringstream a, b;
        svg::write_series_svg(a, "t", {{"u", {1, 2, 3}}}, 0);
        svg::write_series_svg(b, "t", {{"u", {1, 2, 3}}}, 0);
        CHECK(a.str() == b.str());
    }
    SECTION("long series are thinned") {
        const auto pts = svg::thin(std::vector<std::pair<double, double>>(100000, {1.0, 1.0}));
        CHECK(pts.size() <= 20000);
        CHECK(pts.size() > 10000);
    }
}
