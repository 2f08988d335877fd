#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "evospike/simulation.hpp"

namespace evospike {

// One spike, in seconds, on a renumbered observed channel.
struct SpikeEvent {
    double time_s = 0.0;
    std::int32_t channel = 0;

    friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

// Population spike counts per time bin; counts are aggregated across all
// observed channels.
struct BinnedCounts {
    double bin_seconds = 1.0;
    std::vector<std::int64_t> counts;

    std::int64_t total() const;
    double mean() const;
};

// Objective of the sorted-bin distance (minimized) plus the reported score
// 1 - f (higher is better; may go negative for very poor fits).
struct FitnessValue {
    double objective_f = 0.0;
    double score = 1.0;
};

// Raised when the experimental side has zero mean spike count, which leaves
// the normalization undefined.
struct UndefinedFitnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Record events as (time, channel) pairs with time = step * step_seconds.
std::vector<SpikeEvent> to_events(const SpikeRecord& record);

// counts[i] = spikes with time in [i*bin, (i+1)*bin). window_seconds must be
// an integer multiple of bin_seconds and every event must fall inside it.
BinnedCounts bin_counts(std::span<const SpikeEvent> events, double window_seconds,
                        double bin_seconds);

// Sorted-bin spike count distance:
//   f = (1 / (mu_bin * N_bin)) * sum_i |S_exp_(i) - S_sim_(i)|
// where both count sequences are sorted ascending and mu_bin is the mean of
// the EXPERIMENTAL counts. Both sides must have the same bin count.
FitnessValue sorted_bin_fitness(const BinnedCounts& experimental, const BinnedCounts& simulated);

// Array-wide spike detection rate: population spikes per second.
std::vector<std::int64_t> asdr(std::span<const SpikeEvent> events, double window_seconds);

// Spatial analogue of the temporal fitness: normalized mean absolute
// difference between ascending-sorted per-channel mean firing rates,
// normalized by the experimental mean rate.
double spatial_fitness(std::span<const double> experimental_rates,
                       std::span<const double> simulated_rates);

// Mean firing rate (Hz) per channel of an observed record.
std::vector<double> per_channel_rates(const SpikeRecord& observed);

}  // namespace evospike
