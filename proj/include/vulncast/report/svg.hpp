#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "vulncast/report/csv.hpp"

namespace vulncast {

/// Minimal SVG emitter: axes, bars with interval whiskers, step curves, and
/// heat grids. Enough to render the report figures without an external
/// plotting dependency.
class SvgCanvas {
public:
    SvgCanvas(int width, int height, std::string title, const Provenance& prov)
        : width_(width), height_(height) {
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
              << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
        body_ << "<!--";
        for (const auto& [k, v] : prov) body_ << ' ' << k << '=' << v;
        body_ << " -->\n";
        body_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        text(width / 2.0, 20, title, 14, "middle");
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color = "#444",
              double stroke = 1.0) {
        body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
              << "\" stroke=\"" << color << "\" stroke-width=\"" << stroke << "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
              << "\" fill=\"" << fill << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, int size = 11, const std::string& anchor = "start") {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
              << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << escape(s)
              << "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke = 1.5) {
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke
              << "\" points=\"";
        for (const auto& [x, y] : pts) body_ << x << ',' << y << ' ';
        body_ << "\"/>\n";
    }

    int width() const { return width_; }
    int height() const { return height_; }

    void save(const std::filesystem::path& path) {
        body_ << "</svg>\n";
        detail::write_text(path, body_.str());
    }

private:
    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else if (c == '&') out += "&amp;";
            else out += c;
        }
        return out;
    }

    int width_, height_;
    std::ostringstream body_;
};

struct BarDatum {
    std::string label;
    double value = 0;
    std::optional<double> low, high;
};

/// Forecast-style bar chart with interval whiskers.
inline void write_bar_chart_svg(const std::vector<BarDatum>& bars, const std::string& title,
                                const std::filesystem::path& path, const Provenance& prov) {
    const int w = 760, h = 460, ml = 70, mr = 20, mt = 40, mb = 50;
    SvgCanvas svg(w, h, title, prov);
    double vmax = 1;
    for (const auto& b : bars) vmax = std::max({vmax, b.value, b.high.value_or(0.0)});
    vmax *= 1.1;
    auto ypix = [&](double v) { return mt + (h - mt - mb) * (1.0 - v / vmax); };

    svg.line(ml, h - mb, w - mr, h - mb);
    svg.line(ml, mt, ml, h - mb);
    for (int g = 0; g <= 4; ++g) {
        double v = vmax * g / 4.0;
        svg.line(ml - 4, ypix(v), ml, ypix(v));
        svg.text(ml - 8, ypix(v) + 4, detail::fmt(std::round(v)), 10, "end");
    }

    double slot = double(w - ml - mr) / std::max<std::size_t>(1, bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        double x = ml + slot * double(i) + slot * 0.2;
        double bw = slot * 0.6;
        svg.rect(x, ypix(b.value), bw, (h - mb) - ypix(b.value), "#4878a8");
        if (b.low && b.high) {
            double cx = x + bw / 2;
            svg.line(cx, ypix(*b.low), cx, ypix(*b.high), "#222", 1.5);
            svg.line(cx - 6, ypix(*b.low), cx + 6, ypix(*b.low), "#222", 1.5);
            svg.line(cx - 6, ypix(*b.high), cx + 6, ypix(*b.high), "#222", 1.5);
        }
        svg.text(x + bw / 2, h - mb + 16, b.label, 11, "middle");
        svg.text(x + bw / 2, ypix(b.value) - 6, detail::fmt(std::round(b.value)), 10, "middle");
    }
    svg.save(path);
}

/// Step plot for one or more survival curves.
inline void write_survival_svg(const std::vector<std::pair<std::string, SurvivalCurve>>& curves,
                               const std::string& title, const std::filesystem::path& path,
                               const Provenance& prov) {
    const int w = 760, h = 460, ml = 60, mr = 20, mt = 40, mb = 50;
    static const char* kColors[] = {"#4878a8", "#a84848", "#48a878", "#a8a848", "#7848a8", "#444444"};
    SvgCanvas svg(w, h, title, prov);
    double tmax = 1;
    for (const auto& [name, c] : curves)
        if (!c.points.empty()) tmax = std::max(tmax, c.points.back().time);
    auto xpix = [&](double t) { return ml + (w - ml - mr) * (t / tmax); };
    auto ypix = [&](double s) { return mt + (h - mt - mb) * (1.0 - s); };

    svg.line(ml, h - mb, w - mr, h - mb);
    svg.line(ml, mt, ml, h - mb);
    for (int g = 0; g <= 4; ++g) {
        svg.text(ml - 8, ypix(g / 4.0) + 4, detail::fmt(g / 4.0), 10, "end");
        svg.line(ml - 4, ypix(g / 4.0), ml, ypix(g / 4.0));
    }
    for (int g = 0; g <= 6; ++g) {
        double t = tmax * g / 6.0;
        svg.text(xpix(t), h - mb + 16, detail::fmt(std::round(t)), 10, "middle");
    }

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const auto& [name, curve] = curves[ci];
        std::vector<std::pair<double, double>> pts{{xpix(0), ypix(1.0)}};
        double s = 1.0;
        for (const auto& p : curve.points) {
            pts.emplace_back(xpix(p.time), ypix(s));
            pts.emplace_back(xpix(p.time), ypix(p.survival));
            s = p.survival;
        }
        pts.emplace_back(xpix(tmax), ypix(s));
        const std::string color = kColors[ci % 6];
        svg.polyline(pts, color);
        svg.text(w - mr - 150, mt + 16 * double(ci) + 10, name, 11);
        svg.line(w - mr - 170, mt + 16 * double(ci) + 6, w - mr - 155, mt + 16 * double(ci) + 6, color, 2);
    }
    svg.save(path);
}

/// Heat grid for KS matrices and the cve-year/publication-year heatmap.
inline void write_matrix_svg(const std::vector<int>& row_labels, const std::vector<int>& col_labels,
                             const std::vector<std::vector<double>>& values, const std::string& title,
                             const std::filesystem::path& path, const Provenance& prov) {
    const int ml = 70, mt = 60, cell = 26;
    int w = ml + cell * int(col_labels.size()) + 30;
    int h = mt + cell * int(row_labels.size()) + 30;
    SvgCanvas svg(w, h, title, prov);
    double vmax = 1e-9;
    for (const auto& row : values)
        for (double v : row) vmax = std::max(vmax, v);
    for (std::size_t i = 0; i < row_labels.size(); ++i) {
        svg.text(ml - 6, mt + cell * double(i) + cell * 0.65, std::to_string(row_labels[i]), 10, "end");
        for (std::size_t j = 0; j < col_labels.size(); ++j) {
            double t = values[i][j] / vmax;
            int rch = int(255 - 180 * t), gch = int(255 - 140 * t), bch = 255;
            char color[10];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", rch, gch, bch);
            svg.rect(ml + cell * double(j), mt + cell * double(i), cell - 1, cell - 1, color);
        }
    }
    for (std::size_t j = 0; j < col_labels.size(); ++j)
        svg.text(ml + cell * double(j) + cell * 0.5, mt - 8, std::to_string(col_labels[j]), 9, "middle");
    svg.save(path);
}

} // namespace vulncast
