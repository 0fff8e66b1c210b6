#include "pitchwarp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace pitchwarp::io {

namespace {

constexpr double kWidth = 1000.0;
constexpr double kMargin = 40.0;
constexpr double kBandHeight = 170.0;
constexpr double kBandGap = 90.0;

struct Band {
    double top;
    double x(std::size_t i, std::size_t n) const {
        return n > 1 ? kMargin + (kWidth - 2 * kMargin) * static_cast<double>(i) /
                           static_cast<double>(n - 1)
                     : kWidth / 2;
    }
    double y(double v, double lo, double hi) const {
        const double span = hi > lo ? hi - lo : 1.0;
        return top + kBandHeight * (1.0 - (v - lo) / span);
    }
};

std::string polyline(const PitchCurve& curve, const Band& band, double lo, double hi,
                     const char* color) {
    std::string pts;
    char buf[64];
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.1f,%.1f ", band.x(i, curve.size()),
                      band.y(curve.values[i], lo, hi));
        pts += buf;
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.2\" points=\"" + pts + "\"/>\n";
}

}  // namespace

void write_alignment_svg(const std::filesystem::path& file, const PitchCurve& amateur,
                         const PitchCurve& tmpl, const AlignmentPath& path) {
    if (amateur.empty() || tmpl.empty())
        throw std::invalid_argument("write_alignment_svg: empty curve");
    double lo = amateur.values[0], hi = lo;
    for (double v : amateur.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : tmpl.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    const Band top{kMargin};
    const Band bottom{kMargin + kBandHeight + kBandGap};
    const double height = kMargin * 2 + kBandHeight * 2 + kBandGap;

    std::string svg;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  kWidth, height, kWidth, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const std::size_t stride = std::max<std::size_t>(1, path.pairs.size() / 240);
    for (std::size_t k = 0; k < path.pairs.size(); k += stride) {
        const auto& [i, j] = path.pairs[k];
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n",
                      top.x(static_cast<std::size_t>(i), amateur.size()),
                      top.y(amateur.values[static_cast<std::size_t>(i)], lo, hi),
                      bottom.x(static_cast<std::size_t>(j), tmpl.size()),
                      bottom.y(tmpl.values[static_cast<std::size_t>(j)], lo, hi));
        svg += buf;
    }
    svg += polyline(amateur, top, lo, hi, "#d62728");
    svg += polyline(tmpl, bottom, lo, hi, "#1f77b4");
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"%.0f\" font-size=\"13\" fill=\"#d62728\">amateur</text>\n",
                  kMargin, kMargin - 10);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"%.0f\" font-size=\"13\" fill=\"#1f77b4\">template</text>\n",
                  kMargin, bottom.top - 10);
    svg += buf;
    svg += "</svg>\n";

    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << svg;
}

void write_cost_pgm(const std::filesystem::path& file, const CostMatrix& cost) {
    double max = 0.0;
    for (double v : cost.data()) max = std::max(max, v);
    const double scale = max > 0.0 ? 255.0 / max : 0.0;

    std::string out = "P5\n" + std::to_string(cost.cols()) + " " + std::to_string(cost.rows()) +
                      "\n255\n";
    out.reserve(out.size() + cost.rows() * cost.cols());
    for (std::size_t i = 0; i < cost.rows(); ++i)
        for (std::size_t j = 0; j < cost.cols(); ++j)
            out.push_back(static_cast<char>(
                static_cast<unsigned char>(std::lround(cost(i, j) * scale))));

    std::ofstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + file.string());
    f << out;
}

}  // namespace pitchwarp::io
