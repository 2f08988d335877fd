#include "evospike/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace evospike {

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string svg_open(int width, int height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n";
}

std::string text_at(double x, double y, const std::string& label) {
    return "<text x=\"" + fixed2(x) + "\" y=\"" + fixed2(y) + "\">" + label + "</text>\n";
}

std::string frame(double x, double y, double w, double h) {
    return "<rect x=\"" + fixed2(x) + "\" y=\"" + fixed2(y) + "\" width=\"" + fixed2(w) +
           "\" height=\"" + fixed2(h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
}

}  // namespace

std::string render_raster_svg(std::span<const SpikeEvent> events, int channel_count,
                              double window_seconds,
                              std::span<const std::int64_t> asdr_counts) {
    if (channel_count < 1) throw std::invalid_argument("need at least one channel");
    if (!(window_seconds > 0.0)) throw std::invalid_argument("window must be positive");

    constexpr double kLeft = 60.0, kPlotW = 800.0;
    constexpr double kRasterY = 40.0, kRasterH = 300.0;
    constexpr double kAsdrY = 380.0, kAsdrH = 120.0;
    const int width = 900, height = 540;

    const auto x_of = [&](double t) { return kLeft + t / window_seconds * kPlotW; };

    std::string svg = svg_open(width, height);
    svg += text_at(kLeft, 20.0, "spike raster (" + std::to_string(channel_count) +
                                    " channels, " + fixed2(window_seconds) + " s)");
    svg += frame(kLeft, kRasterY, kPlotW, kRasterH);

    // one mark per observed spike
    for (const SpikeEvent& e : events) {
        const double y = kRasterY + kRasterH -
                         (e.channel + 0.5) / channel_count * kRasterH;
        svg += "<circle cx=\"" + fixed2(x_of(e.time_s)) + "\" cy=\"" + fixed2(y) +
               "\" r=\"1\" fill=\"#1f3d7a\"/>\n";
    }

    svg += text_at(kLeft, kAsdrY - 8.0, "ASDR (spikes / s)");
    svg += frame(kLeft, kAsdrY, kPlotW, kAsdrH);
    if (!asdr_counts.empty()) {
        const double peak = std::max<double>(
            1.0, static_cast<double>(*std::max_element(asdr_counts.begin(), asdr_counts.end())));
        std::string points;
        for (std::size_t s = 0; s < asdr_counts.size(); ++s) {
            const double x = x_of((static_cast<double>(s) + 0.5) *
                                  window_seconds / static_cast<double>(asdr_counts.size()));
            const double y = kAsdrY + kAsdrH -
                             static_cast<double>(asdr_counts[s]) / peak * kAsdrH;
            points += fixed2(x) + "," + fixed2(y) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"#a33\" stroke-width=\"1\" points=\"" +
               points + "\"/>\n";
        svg += text_at(4.0, kAsdrY + 12.0, std::to_string(static_cast<long>(peak)));
    }
    svg += text_at(kLeft, kAsdrY + kAsdrH + 16.0, "0 s");
    svg += text_at(kLeft + kPlotW - 30.0, kAsdrY + kAsdrH + 16.0,
                   fixed2(window_seconds) + " s");
    svg += "</svg>\n";
    return svg;
}

std::string render_fitness_svg(std::span<const double> mean_score,
                               std::span<const double> std_score) {
    if (mean_score.empty() || mean_score.size() != std_score.size())
        throw std::invalid_argument("mean and std series must be non-empty and equal length");

    constexpr double kLeft = 60.0, kPlotW = 760.0;
    constexpr double kTop = 40.0, kPlotH = 360.0;
    const int width = 860, height = 460;

    double lo = mean_score[0] - std_score[0], hi = mean_score[0] + std_score[0];
    for (std::size_t g = 0; g < mean_score.size(); ++g) {
        lo = std::min(lo, mean_score[g] - std_score[g]);
        hi = std::max(hi, mean_score[g] + std_score[g]);
    }
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 1.0);
    const double span = hi - lo;

    const double denom = std::max<std::size_t>(mean_score.size() - 1, 1);
    const auto x_of = [&](std::size_t g) {
        return kLeft + static_cast<double>(g) / denom * kPlotW;
    };
    const auto y_of = [&](double v) { return kTop + (hi - v) / span * kPlotH; };

    std::string svg = svg_open(width, height);
    svg += text_at(kLeft, 20.0, "top-10 score per generation (mean with one std band)");
    svg += frame(kLeft, kTop, kPlotW, kPlotH);

    // band: upper edge forward, lower edge back
    std::string band;
    for (std::size_t g = 0; g < mean_score.size(); ++g)
        band += fixed2(x_of(g)) + "," + fixed2(y_of(mean_score[g] + std_score[g])) + " ";
    for (std::size_t g = mean_score.size(); g-- > 0;)
        band += fixed2(x_of(g)) + "," + fixed2(y_of(mean_score[g] - std_score[g])) + " ";
    svg += "<polygon fill=\"#9bb7e8\" fill-opacity=\"0.5\" stroke=\"none\" points=\"" +
           band + "\"/>\n";

    std::string line;
    for (std::size_t g = 0; g < mean_score.size(); ++g)
        line += fixed2(x_of(g)) + "," + fixed2(y_of(mean_score[g])) + " ";
    svg += "<polyline fill=\"none\" stroke=\"#1f3d7a\" stroke-width=\"1.5\" points=\"" +
           line + "\"/>\n";

    svg += text_at(8.0, y_of(hi) + 4.0, fixed2(hi));
    svg += text_at(8.0, y_of(lo) + 4.0, fixed2(lo));
    svg += text_at(kLeft, kTop + kPlotH + 16.0, "generation 0");
    svg += text_at(kLeft + kPlotW - 80.0, kTop + kPlotH + 16.0,
                   "generation " + std::to_string(mean_score.size() - 1));
    svg += "</svg>\n";
    return svg;
}

}  // namespace evospike
