#include "parc/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace parc {

namespace {

struct Rgb {
    double r, g, b;
};

// Compact viridis-like ramp, linearly interpolated.
constexpr Rgb kRamp[] = {
    {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
    {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
    {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
    {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144},
};

std::string color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * (std::size(kRamp) - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, std::size(kRamp) - 1);
    const double frac = pos - static_cast<double>(lo);
    const auto mix = [&](double a, double b) { return a + (b - a) * frac; };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(std::lround(255 * mix(kRamp[lo].r, kRamp[hi].r))),
                  static_cast<int>(std::lround(255 * mix(kRamp[lo].g, kRamp[hi].g))),
                  static_cast<int>(std::lround(255 * mix(kRamp[lo].b, kRamp[hi].b))));
    return buf;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

void render_heatmap(const SweepGrid& grid, HeatmapScale scale,
                    const std::filesystem::path& path) {
    const auto v1 = grid.axis1.values();
    const auto v2 = grid.axis2.values();
    if (grid.cells.empty()) throw InvalidStateError("render_heatmap: empty grid");

    // Axis 2 runs along x, axis 1 along y (origin bottom-left).
    const double cell = 24.0;
    const double ml = 90.0, mb = 60.0, mt = 40.0, mr = 120.0;
    const double w = ml + cell * static_cast<double>(v2.size()) + mr;
    const double h = mt + cell * static_cast<double>(v1.size()) + mb;

    auto value_of = [&](const SweepCell& c) -> double {
        if (!c.ok() || !std::isfinite(c.nmse)) return std::numeric_limits<double>::quiet_NaN();
        return scale == HeatmapScale::Log10 ? std::log10(std::max(c.nmse, 1e-300)) : c.nmse;
    };

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool have_value = false;
    for (const auto& c : grid.cells) {
        const double v = value_of(c);
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            have_value = true;
        }
    }
    if (!have_value) {
        lo = 0.0;
        hi = 1.0;
    } else if (hi == lo) {
        hi = lo + 1.0;
    }

    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
       << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n";
    os << "<defs><pattern id=\"fail\" width=\"6\" height=\"6\" "
          "patternUnits=\"userSpaceOnUse\"><rect width=\"6\" height=\"6\" fill=\"#b0b0b0\"/>"
          "<path d=\"M0,6 L6,0\" stroke=\"#606060\" stroke-width=\"1.5\"/></pattern></defs>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto cx = [&](std::size_t j) { return ml + cell * static_cast<double>(j); };
    auto cy = [&](std::size_t i) {
        return mt + cell * static_cast<double>(v1.size() - 1 - i);
    };

    for (std::size_t i = 0; i < v1.size(); ++i) {
        for (std::size_t j = 0; j < v2.size(); ++j) {
            const SweepCell& c = grid.at(i, j);
            const double v = value_of(c);
            const std::string fill =
                std::isfinite(v) ? color((v - lo) / (hi - lo)) : std::string("url(#fail)");
            os << "<rect x=\"" << fmt(cx(j)) << "\" y=\"" << fmt(cy(i)) << "\" width=\""
               << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\"" << fill << "\"/>\n";
        }
    }

    // Regime boundaries: edges between neighbours whose label differs.
    os << "<g stroke=\"white\" stroke-width=\"2\">\n";
    for (std::size_t i = 0; i < v1.size(); ++i) {
        for (std::size_t j = 0; j < v2.size(); ++j) {
            const RegimeLabel lab = grid.at(i, j).regime.label;
            if (j + 1 < v2.size() && grid.at(i, j + 1).regime.label != lab)
                os << "<line x1=\"" << fmt(cx(j + 1)) << "\" y1=\"" << fmt(cy(i)) << "\" x2=\""
                   << fmt(cx(j + 1)) << "\" y2=\"" << fmt(cy(i) + cell) << "\"/>\n";
            if (i + 1 < v1.size() && grid.at(i + 1, j).regime.label != lab)
                os << "<line x1=\"" << fmt(cx(j)) << "\" y1=\"" << fmt(cy(i)) << "\" x2=\""
                   << fmt(cx(j) + cell) << "\" y2=\"" << fmt(cy(i)) << "\"/>\n";
        }
    }
    os << "</g>\n";

    // Color bar.
    const double bar_x = w - mr + 20.0, bar_w = 16.0;
    const double bar_y = mt, bar_h = cell * static_cast<double>(v1.size());
    const int bar_steps = 64;
    for (int k = 0; k < bar_steps; ++k) {
        const double t0 = static_cast<double>(k) / bar_steps;
        os << "<rect x=\"" << fmt(bar_x) << "\" y=\"" << fmt(bar_y + bar_h * (1.0 - t0) - bar_h / bar_steps)
           << "\" width=\"" << fmt(bar_w) << "\" height=\"" << fmt(bar_h / bar_steps + 0.5)
           << "\" fill=\"" << color(t0) << "\"/>\n";
    }
    const char* unit = scale == HeatmapScale::Log10 ? "log10(NMSE)" : "NMSE";
    os << "<text x=\"" << fmt(bar_x + bar_w + 6) << "\" y=\"" << fmt(bar_y + 10)
       << "\" font-size=\"12\">" << fmt(hi) << "</text>\n";
    os << "<text x=\"" << fmt(bar_x + bar_w + 6) << "\" y=\"" << fmt(bar_y + bar_h)
       << "\" font-size=\"12\">" << fmt(lo) << "</text>\n";
    os << "<text x=\"" << fmt(bar_x) << "\" y=\"" << fmt(bar_y - 8) << "\" font-size=\"12\">"
       << unit << "</text>\n";

    // Axis labels and a few tick labels.
    os << "<text x=\"" << fmt(ml + cell * static_cast<double>(v2.size()) / 2) << "\" y=\""
       << fmt(h - 18) << "\" font-size=\"14\" text-anchor=\"middle\">" << to_string(grid.axis2.param)
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << fmt(mt + cell * static_cast<double>(v1.size()) / 2)
       << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << fmt(mt + cell * static_cast<double>(v1.size()) / 2) << ")\">"
       << to_string(grid.axis1.param) << "</text>\n";
    os << "<text x=\"" << fmt(ml) << "\" y=\"" << fmt(h - 38) << "\" font-size=\"11\">"
       << fmt(v2.front()) << "</text>\n";
    os << "<text x=\"" << fmt(ml + cell * static_cast<double>(v2.size())) << "\" y=\""
       << fmt(h - 38) << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v2.back())
       << "</text>\n";
    os << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(mt + cell * static_cast<double>(v1.size()))
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v1.front()) << "</text>\n";
    os << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(mt + 10)
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v1.back()) << "</text>\n";
    os << "</svg>\n";
    if (!os) throw Error("failed writing " + path.string());
}

}  // namespace parc
