#include "evospike/simulation.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace evospike {

SpikeRecord simulate(const ModelParams& params, const Connectivity& connectivity,
                     int steps, RngStream& rng, int warmup_steps) {
    if (steps < 1) throw std::invalid_argument("simulation needs at least one step");
    if (warmup_steps < 0) throw std::invalid_argument("warmup steps must be >= 0");
    if (params.kind != connectivity.kind)
        throw std::invalid_argument("model kind of params and connectivity differ");
    const int n = connectivity.node_count();
    if (static_cast<int>(connectivity.targets.size()) != n ||
        static_cast<int>(connectivity.signs.size()) != n)
        throw std::invalid_argument("connectivity arrays disagree on node count");

    SpikeRecord record;
    record.steps = steps;
    record.node_count = n;
    if (connectivity.layout.rows == 10 && connectivity.layout.cols == 10) {
        record.observed = observed_nodes(connectivity.layout);
    } else {
        record.observed.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) record.observed[static_cast<std::size_t>(i)] = i;
    }

    std::vector<NeuronState> state(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        state[static_cast<std::size_t>(i)].is_inhibitory =
            connectivity.signs[static_cast<std::size_t>(i)] < 0;

    std::vector<double> input(static_cast<std::size_t>(n), 0.0);
    std::vector<std::int32_t> previous_spikes;

    for (int t = -warmup_steps; t < steps; ++t) {
        // inputs from the previous step's spikes only (synchronous update)
        std::fill(input.begin(), input.end(), 0.0);
        for (const std::int32_t j : previous_spikes) {
            const double w = connectivity.signs[static_cast<std::size_t>(j)] < 0 ? -1.0 : 1.0;
            for (const std::int32_t i : connectivity.targets[static_cast<std::size_t>(j)])
                input[static_cast<std::size_t>(i)] += w;
        }

        previous_spikes.clear();
        for (int i = 0; i < n; ++i) {
            // one draw per node per step, in node order, fired or not
            const double u = rng.next_unit();
            auto& s = state[static_cast<std::size_t>(i)];
            s = membrane_step(s, params, input[static_cast<std::size_t>(i)]);
            s = threshold_fire(s, params, u);
            if (s.fired) {
                previous_spikes.push_back(static_cast<std::int32_t>(i));
                if (t >= 0)
                    record.events.emplace_back(static_cast<std::int32_t>(t),
                                               static_cast<std::int32_t>(i));
            }
        }
    }
    return record;
}

SpikeRecord observed_record(const SpikeRecord& record) {
    std::unordered_map<std::int32_t, std::int32_t> channel_of;
    channel_of.reserve(record.observed.size());
    for (std::size_t c = 0; c < record.observed.size(); ++c)
        channel_of.emplace(record.observed[c], static_cast<std::int32_t>(c));

    SpikeRecord out;
    out.steps = record.steps;
    out.step_seconds = record.step_seconds;
    out.node_count = static_cast<int>(record.observed.size());
    out.observed.resize(record.observed.size());
    for (std::size_t c = 0; c < record.observed.size(); ++c)
        out.observed[c] = static_cast<std::int32_t>(c);

    for (const auto& [step, node] : record.events) {
        const auto it = channel_of.find(node);
        if (it != channel_of.end()) out.events.emplace_back(step, it->second);
    }
    return out;
}

}  // namespace evospike
