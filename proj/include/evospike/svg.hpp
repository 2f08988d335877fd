#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "evospike/metrics.hpp"

namespace evospike {

// Static raster + ASDR figure: one mark per spike in the top panel, the
// per-second population rate as a line below.
std::string render_raster_svg(std::span<const SpikeEvent> events, int channel_count,
                              double window_seconds, std::span<const std::int64_t> asdr_counts);

// Mean score per generation with a +/- one standard deviation band.
std::string render_fitness_svg(std::span<const double> mean_score,
                               std::span<const double> std_score);

}  // namespace evospike
