#include "evospike/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace evospike {

std::int64_t BinnedCounts::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

double BinnedCounts::mean() const {
    if (counts.empty()) return 0.0;
    return static_cast<double>(total()) / static_cast<double>(counts.size());
}

std::vector<SpikeEvent> to_events(const SpikeRecord& record) {
    std::vector<SpikeEvent> events;
    events.reserve(record.events.size());
    for (const auto& [step, node] : record.events)
        events.push_back({step * record.step_seconds, node});
    return events;
}

BinnedCounts bin_counts(std::span<const SpikeEvent> events, double window_seconds,
                        double bin_seconds) {
    if (!(bin_seconds > 0.0)) throw std::invalid_argument("bin size must be positive");
    if (!(window_seconds > 0.0)) throw std::invalid_argument("window must be positive");

    const auto n_bins = std::llround(window_seconds / bin_seconds);
    if (n_bins < 1 ||
        std::abs(window_seconds - static_cast<double>(n_bins) * bin_seconds) >
            1e-9 * std::max(1.0, window_seconds))
        throw std::invalid_argument("window must be an integer multiple of the bin size");
    const double effective_window = static_cast<double>(n_bins) * bin_seconds;

    BinnedCounts binned;
    binned.bin_seconds = bin_seconds;
    binned.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (const SpikeEvent& e : events) {
        if (e.time_s < 0.0 || e.time_s >= effective_window)
            throw std::invalid_argument("spike at t=" + std::to_string(e.time_s) +
                                        " lies outside the window");
        const auto bin = static_cast<std::size_t>(e.time_s / bin_seconds);
        ++binned.counts[std::min(bin, static_cast<std::size_t>(n_bins) - 1)];
    }
    return binned;
}

FitnessValue sorted_bin_fitness(const BinnedCounts& experimental, const BinnedCounts& simulated) {
    if (experimental.counts.empty())
        throw std::invalid_argument("need at least one bin");
    if (experimental.counts.size() != simulated.counts.size())
        throw std::invalid_argument("bin counts differ: " +
                                    std::to_string(experimental.counts.size()) + " vs " +
                                    std::to_string(simulated.counts.size()));

    const double mu_bin = experimental.mean();
    if (mu_bin == 0.0)
        throw UndefinedFitnessError("experimental bins are all zero (silent target)");

    std::vector<std::int64_t> exp_sorted(experimental.counts);
    std::vector<std::int64_t> sim_sorted(simulated.counts);
    std::sort(exp_sorted.begin(), exp_sorted.end());
    std::sort(sim_sorted.begin(), sim_sorted.end());

    std::int64_t abs_sum = 0;
    for (std::size_t i = 0; i < exp_sorted.size(); ++i)
        abs_sum += std::abs(exp_sorted[i] - sim_sorted[i]);

    FitnessValue fitness;
    fitness.objective_f = static_cast<double>(abs_sum) /
                          (mu_bin * static_cast<double>(exp_sorted.size()));
    fitness.score = 1.0 - fitness.objective_f;
    return fitness;
}

std::vector<std::int64_t> asdr(std::span<const SpikeEvent> events, double window_seconds) {
    return bin_counts(events, window_seconds, 1.0).counts;
}

double spatial_fitness(std::span<const double> experimental_rates,
                       std::span<const double> simulated_rates) {
    if (experimental_rates.empty())
        throw std::invalid_argument("need at least one channel");
    if (experimental_rates.size() != simulated_rates.size())
        throw std::invalid_argument("channel counts differ");

    double mean_rate = 0.0;
    for (const double r : experimental_rates) mean_rate += r;
    mean_rate /= static_cast<double>(experimental_rates.size());
    if (mean_rate == 0.0)
        throw UndefinedFitnessError("experimental rates are all zero (silent target)");

    std::vector<double> exp_sorted(experimental_rates.begin(), experimental_rates.end());
    std::vector<double> sim_sorted(simulated_rates.begin(), simulated_rates.end());
    std::sort(exp_sorted.begin(), exp_sorted.end());
    std::sort(sim_sorted.begin(), sim_sorted.end());

    double abs_sum = 0.0;
    for (std::size_t i = 0; i < exp_sorted.size(); ++i)
        abs_sum += std::abs(exp_sorted[i] - sim_sorted[i]);
    return abs_sum / (mean_rate * static_cast<double>(exp_sorted.size()));
}

std::vector<double> per_channel_rates(const SpikeRecord& observed) {
    std::vector<double> rates(static_cast<std::size_t>(observed.node_count), 0.0);
    const double duration = observed.duration_seconds();
    if (duration <= 0.0) return rates;
    for (const auto& [step, channel] : observed.events)
        rates[static_cast<std::size_t>(channel)] += 1.0;
    for (double& r : rates) r /= duration;
    return rates;
}

}  // namespace evospike
