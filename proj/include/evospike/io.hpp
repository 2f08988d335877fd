#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evospike/evolution.hpp"
#include "evospike/genome.hpp"
#include "evospike/metrics.hpp"
#include "evospike/topology.hpp"

namespace evospike {

// Config-file problems (bad keys, bad values): usage-level failures.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data-file problems (parse errors, out-of-range values, missing files).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// --- spike event CSV: header "time_s,channel", one spike per row ---

// Loads, sorts by (time, channel), and keeps events with
// offset <= t < offset + window, shifted so the window starts at 0.
std::vector<SpikeEvent> load_spike_events(const std::filesystem::path& path,
                                          std::optional<double> window_seconds = {},
                                          double offset_seconds = 0.0);
void write_spike_events(const std::filesystem::path& path,
                        std::span<const SpikeEvent> events);

// --- ASDR CSV: header "second,spike_count" ---
void write_asdr(const std::filesystem::path& path, std::span<const std::int64_t> counts);

// --- genome JSON: keys genes, bounds, params, seed, model_kind ---
struct GenomeFile {
    Genome genome;
    GeneBounds bounds;
    std::uint64_t seed = 0;  // stream seed that replays the instantiation
};
void save_genome(const std::filesystem::path& path, const GenomeFile& file);
GenomeFile load_genome(const std::filesystem::path& path);

// --- config JSON: every EvolutionConfig field; unknown keys are an error ---
EvolutionConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const EvolutionConfig& config);

// --- connectivity CSVs: edge list "pre,post" and signs "node,sign" ---
void write_connectivity(const std::filesystem::path& edges_path,
                        const std::filesystem::path& signs_path,
                        const Connectivity& connectivity);

// --- fitness history CSV: "trial,generation,individual,objective_f,score" ---
struct FitnessRow {
    int trial = 0;
    int generation = 0;
    int individual = 0;
    double objective_f = 0.0;
    double score = 0.0;

    friend bool operator==(const FitnessRow&, const FitnessRow&) = default;
};
void write_fitness_history(const std::filesystem::path& path, int trial,
                           const std::vector<std::vector<FitnessValue>>& history);
std::vector<FitnessRow> load_fitness_history(const std::filesystem::path& path);

// Everything one trial leaves on disk.
struct RunArtifacts {
    EvolutionConfig config;
    int trial = 0;
    std::vector<std::vector<FitnessValue>> fitness_history;
    GenomeFile best_genome;
    Connectivity best_connectivity;
    std::vector<SpikeEvent> best_raster;
    std::vector<std::int64_t> best_asdr;
};

// Writes config.json, fitness.csv, best_genome.json, connectivity_edges.csv,
// connectivity_signs.csv, raster.csv and asdr.csv into out_dir, then a
// COMPLETE marker last. Overwrites idempotently; returns the written paths.
std::vector<std::filesystem::path> write_run(const RunArtifacts& artifacts,
                                             const std::filesystem::path& out_dir);

}  // namespace evospike
