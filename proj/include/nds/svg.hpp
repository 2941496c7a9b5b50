#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace nds::svg {

// Minimal deterministic SVG 1.1 emitter: polylines, scatter dots and bars on
// a fixed canvas whose data mapping is computed from the data extents.

inline constexpr double canvas_w = 800.0;
inline constexpr double canvas_h = 520.0;
inline constexpr double margin = 56.0;

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Extent {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

    void include(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }

    static Extent of(const std::vector<std::pair<double, double>>& pts) {
        Extent e;
        if (!pts.empty()) {
            e.xmin = e.xmax = pts.front().first;
            e.ymin = e.ymax = pts.front().second;
            for (const auto& [x, y] : pts) e.include(x, y);
        }
        if (e.xmax == e.xmin) e.xmax = e.xmin + 1.0;
        if (e.ymax == e.ymin) e.ymax = e.ymin + 1.0;
        return e;
    }
};

class Canvas {
public:
    Canvas(std::ostream& os, Extent extent) : os_(os), e_(extent) {
        os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 "
            << num(canvas_w) << " " << num(canvas_h) << "\">\n"
            << "<rect width=\"" << num(canvas_w) << "\" height=\"" << num(canvas_h)
            << "\" fill=\"white\"/>\n";
        frame();
    }

    double px(double x) const {
        return margin + (x - e_.xmin) / (e_.xmax - e_.xmin) * (canvas_w - 2 * margin);
    }
    double py(double y) const {
        return canvas_h - margin - (y - e_.ymin) / (e_.ymax - e_.ymin) * (canvas_h - 2 * margin);
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const char* color,
                  double width = 1.0) {
        os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
            << num(width) << "\" points=\"";
        for (const auto& [x, y] : pts) os_ << num(px(x)) << ',' << num(py(y)) << ' ';
        os_ << "\"/>\n";
    }

    void dot(double x, double y, const char* color, double r = 1.2) {
        os_ << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"" << num(r)
            << "\" fill=\"" << color << "\"/>\n";
    }

    void bar(double x0, double x1, double y, const char* color) {
        const double top = py(y), base = py(std::max(0.0, e_.ymin));
        os_ << "<rect x=\"" << num(px(x0)) << "\" y=\"" << num(std::min(top, base))
            << "\" width=\"" << num(px(x1) - px(x0)) << "\" height=\""
            << num(std::max(0.1, std::fabs(base - top))) << "\" fill=\"" << color << "\"/>\n";
    }

    void text(double cx, double cy, const std::string& s, double size = 12.0,
              const char* anchor = "middle") {
        os_ << "<text x=\"" << num(cx) << "\" y=\"" << num(cy) << "\" font-family=\"sans-serif\""
            << " font-size=\"" << num(size) << "\" text-anchor=\"" << anchor << "\">" << s
            << "</text>\n";
    }

    void label_axes(const std::string& xlabel, const std::string& ylabel,
                    const std::string& title) {
        text(canvas_w / 2, canvas_h - margin / 4, xlabel);
        text(margin / 3, canvas_h / 2, ylabel);
        text(canvas_w / 2, margin / 2, title, 14.0);
        // extent ticks
        text(margin, canvas_h - margin + 16, num(e_.xmin), 10.0);
        text(canvas_w - margin, canvas_h - margin + 16, num(e_.xmax), 10.0);
        text(margin - 4, canvas_h - margin, num(e_.ymin), 10.0, "end");
        text(margin - 4, margin, num(e_.ymax), 10.0, "end");
    }

    void finish() { os_ << "</svg>\n"; }

private:
    void frame() {
        os_ << "<rect x=\"" << num(margin) << "\" y=\"" << num(margin) << "\" width=\""
            << num(canvas_w - 2 * margin) << "\" height=\"" << num(canvas_h - 2 * margin)
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }

    std::ostream& os_;
    Extent e_;
};

// Keeps emitted polylines a sane size for long traces; stride decimation is
// presentation only.
inline std::vector<std::pair<double, double>> thin(const std::vector<std::pair<double, double>>& pts,
                                                   std::size_t max_points = 20000) {
    if (pts.size() <= max_points) return pts;
    const std::size_t stride = (pts.size() + max_points - 1) / max_points;
    std::vector<std::pair<double, double>> out;
    out.reserve(pts.size() / stride + 1);
    for (std::size_t i = 0; i < pts.size(); i += stride) out.push_back(pts[i]);
    return out;
}

struct Series {
    std::string label;
    std::vector<double> values;
};

inline const char* series_color(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    return colors[i % 5];
}

// Time-series plot: one polyline per series against the shared time index.
inline void write_series_svg(std::ostream& os, const std::string& title,
                             const std::vector<Series>& series, long t0 = 0) {
    Extent e;
    bool init = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double x = static_cast<double>(t0 + static_cast<long>(i));
            if (!init) {
                e.xmin = e.xmax = x;
                e.ymin = e.ymax = s.values[i];
                init = true;
            }
            e.include(x, s.values[i]);
        }
    if (e.xmax == e.xmin) e.xmax = e.xmin + 1;
    if (e.ymax == e.ymin) e.ymax = e.ymin + 1;

    Canvas c(os, e);
    for (std::size_t si = 0; si < series.size(); ++si) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(series[si].values.size());
        for (std::size_t i = 0; i < series[si].values.size(); ++i)
            pts.emplace_back(static_cast<double>(t0 + static_cast<long>(i)),
                             series[si].values[i]);
        c.polyline(thin(pts), series_color(si));
        c.text(canvas_w - margin - 8, margin + 16 + 14 * static_cast<double>(si),
               series[si].label, 12.0, "end");
    }
    c.label_axes("t", "", title);
    c.finish();
}

// Phase-plane scatter/trajectory plot.
inline void write_phase_svg(std::ostream& os, const std::string& title,
                            const std::vector<std::pair<double, double>>& pts,
                            const std::string& xlabel, const std::string& ylabel) {
    Canvas c(os, Extent::of(pts));
    c.polyline(thin(pts, 40000), series_color(0), 0.5);
    c.label_axes(xlabel, ylabel, title);
    c.finish();
}

// Grouped bar chart: for each category one bar per series.
inline void write_bars_svg(std::ostream& os, const std::string& title,
                           const std::vector<std::string>& categories,
                           const std::vector<Series>& series) {
    Extent e{0.0, static_cast<double>(std::max<std::size_t>(categories.size(), 1)), 0.0, 1.0};
    for (const auto& s : series)
        for (double v : s.values) e.ymax = std::max(e.ymax, v);

    Canvas c(os, e);
    const double group_w = 1.0;
    const double bar_w = series.empty() ? group_w : group_w * 0.8 / static_cast<double>(series.size());
    for (std::size_t ci = 0; ci < categories.size(); ++ci) {
        for (std::size_t si = 0; si < series.size(); ++si) {
            if (ci >= series[si].values.size()) continue;
            const double x0 = static_cast<double>(ci) + 0.1 + bar_w * static_cast<double>(si);
            c.bar(x0, x0 + bar_w, series[si].values[ci], series_color(si));
        }
        c.text(c.px(static_cast<double>(ci) + 0.5), canvas_h - margin + 16, categories[ci], 9.0);
    }
    for (std::size_t si = 0; si < series.size(); ++si)
        c.text(canvas_w - margin - 8, margin + 16 + 14 * static_cast<double>(si),
               series[si].label, 12.0, "end");
    c.label_axes("", "", title);
    c.finish();
}

}  // namespace nds::svg
