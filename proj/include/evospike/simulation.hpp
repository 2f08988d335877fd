#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evospike/neuron.hpp"
#include "evospike/rng.hpp"
#include "evospike/topology.hpp"

namespace evospike {

inline constexpr double kDefaultStepSeconds = 0.04;  // one step = 40 ms of recording time

// Per-step, per-node spike events from one simulation run.
struct SpikeRecord {
    int steps = 0;
    double step_seconds = kDefaultStepSeconds;
    int node_count = 0;
    // (step, node), ascending in step then node
    std::vector<std::pair<std::int32_t, std::int32_t>> events;
    // node indices whose activity counts as observed, in channel order
    std::vector<std::int32_t> observed;

    double duration_seconds() const { return steps * step_seconds; }
};

// Synchronous update over all nodes: inputs at step t come from the spikes of
// step t-1; every node consumes one uniform draw per step in node order, so
// the record is a pure function of (params, connectivity, steps, stream).
// Starts from rest: zero potentials, no refractory carryover.
SpikeRecord simulate(const ModelParams& params, const Connectivity& connectivity,
                     int steps, RngStream& rng, int warmup_steps = 0);

// Restrict a record to its observed nodes and renumber them 0..n-1 in the
// deterministic observed order.
SpikeRecord observed_record(const SpikeRecord& record);

}  // namespace evospike
