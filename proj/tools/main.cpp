// command line front end: evolve models against a target recording, replay a
// genome, or score one recording against another
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "evospike/evolution.hpp"
#include "evospike/io.hpp"
#include "evospike/metrics.hpp"
#include "evospike/simulation.hpp"
#include "evospike/svg.hpp"

namespace {

using namespace evospike;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

struct EvolveOptions {
    std::string config_path;
    std::string target_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<int> steps;
    double window_offset_s = 0.0;
    int threads = 0;
};

struct SimulateOptions {
    std::string genome_path;
    std::string out_dir;
    int steps = 45000;  // 30 min at 40 ms per step
    std::optional<std::uint64_t> seed;
};

struct FitnessOptions {
    std::string target_path;
    std::string record_path;
    std::optional<double> window_s;
};

ModelKind parse_kind(const std::string& name) {
    if (name == "ca") return ModelKind::ca;
    if (name == "network") return ModelKind::network;
    throw ConfigError("--model must be 'ca' or 'network'");
}

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

// Rebuild the record an individual produced when it was scored: the stored
// stream seed replays connectivity construction and every simulation draw.
SpikeRecord replay_record(const Individual& individual, const EvolutionConfig& config,
                          int steps) {
    RngStream stream(individual.stream_seed);
    const ModelParams params = decode(individual.genome, config.bounds);
    const GridLayout layout{};
    Connectivity conn = config.model_kind == ModelKind::ca
                            ? build_ca(layout, static_cast<int>(params.density))
                            : build_network(layout, params.density, stream);
    conn.signs = assign_signs(layout, params.inhib_ratio, stream);
    return simulate(params, conn, steps, stream);
}

double asdr_window_seconds(int steps) {
    return std::ceil(steps * kDefaultStepSeconds - 1e-9);
}

int run_evolve(const EvolveOptions& opt) {
    EvolutionConfig config = load_config(opt.config_path);
    try {
        if (opt.seed) config.seed = *opt.seed;
        if (opt.steps) config.eval_steps = *opt.steps;
        if (opt.model) {
            config.model_kind = parse_kind(*opt.model);
            config.bounds.kind = config.model_kind;
            config.bounds.range[kGeneDensity] =
                GeneBounds::defaults(config.model_kind).range[kGeneDensity];
        }
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const double window = config.eval_window_seconds();
    BinnedCounts target;
    try {
        const auto target_events =
            load_spike_events(opt.target_path, window, opt.window_offset_s);
        target = bin_counts(target_events, window, 1.0);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("target: ") + e.what());
    }
    if (target.total() == 0)
        std::cerr << "warning: target window is silent; every individual will rank worst\n";

    const int threads = effective_threads(opt.threads);
    const std::filesystem::path out_root(opt.out_dir);
    std::vector<std::filesystem::path> written;

    // pooled top-10 scores per generation, across trials
    const std::size_t generations = static_cast<std::size_t>(config.generations) + 1;
    std::vector<std::vector<double>> pooled(generations);

    for (int trial = 0; trial < config.trials; ++trial) {
        const EvolutionResult result = run_evolution(target, config, trial, threads);

        for (std::size_t g = 0; g < result.fitness_history.size(); ++g) {
            std::vector<double> objectives;
            objectives.reserve(result.fitness_history[g].size());
            for (const auto& f : result.fitness_history[g])
                objectives.push_back(f.objective_f);
            std::sort(objectives.begin(), objectives.end());
            const std::size_t top = std::min<std::size_t>(10, objectives.size());
            for (std::size_t k = 0; k < top; ++k)
                pooled[g].push_back(1.0 - objectives[k]);
        }

        RunArtifacts artifacts;
        artifacts.config = config;
        artifacts.trial = trial;
        artifacts.fitness_history = result.fitness_history;
        artifacts.best_genome = {result.final_best.genome, config.bounds,
                                 result.final_best.stream_seed};
        artifacts.best_connectivity = *result.final_best.connectivity;
        const SpikeRecord record = replay_record(result.final_best, config, config.eval_steps);
        artifacts.best_raster = to_events(observed_record(record));
        artifacts.best_asdr = asdr(artifacts.best_raster, window);

        char name[32];
        std::snprintf(name, sizeof(name), "trial_%03d", trial);
        const auto paths = write_run(artifacts, out_root / name);
        written.insert(written.end(), paths.begin(), paths.end());
    }

    std::vector<double> mean_score(generations, 0.0), std_score(generations, 0.0);
    for (std::size_t g = 0; g < generations; ++g) {
        const auto& scores = pooled[g];
        double mean = 0.0;
        for (const double s : scores) mean += s;
        mean /= static_cast<double>(scores.size());
        double var = 0.0;
        for (const double s : scores) var += (s - mean) * (s - mean);
        var /= static_cast<double>(scores.size());
        mean_score[g] = mean;
        std_score[g] = std::sqrt(var);
    }

    std::string summary = "generation,mean_top10_score,std_top10_score\n";
    for (std::size_t g = 0; g < generations; ++g)
        summary += std::to_string(g) + "," + format_double(mean_score[g]) + "," +
                   format_double(std_score[g]) + "\n";
    write_text_file(out_root / "summary.csv", summary);
    written.push_back(out_root / "summary.csv");

    write_text_file(out_root / "fitness.svg", render_fitness_svg(mean_score, std_score));
    written.push_back(out_root / "fitness.svg");

    for (const auto& p : written) std::cout << p.string() << "\n";
    return 0;
}

int run_simulate(const SimulateOptions& opt) {
    if (opt.steps < 1) throw ConfigError("--steps must be >= 1");
    const GenomeFile genome_file = load_genome(opt.genome_path);

    EvolutionConfig config;
    config.model_kind = genome_file.bounds.kind;
    config.bounds = genome_file.bounds;

    Individual individual;
    individual.genome = genome_file.genome;
    individual.stream_seed = opt.seed.value_or(genome_file.seed);

    const SpikeRecord record = replay_record(individual, config, opt.steps);
    const SpikeRecord observed = observed_record(record);
    const auto events = to_events(observed);
    const double window = asdr_window_seconds(opt.steps);
    const auto counts = asdr(events, window);

    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw DataError("cannot create " + opt.out_dir + ": " + ec.message());
    const std::filesystem::path out_root(opt.out_dir);

    write_spike_events(out_root / "raster.csv", events);
    write_asdr(out_root / "asdr.csv", counts);
    write_text_file(out_root / "raster.svg",
                    render_raster_svg(events, observed.node_count, window, counts));

    for (const char* name : {"raster.csv", "asdr.csv", "raster.svg"})
        std::cout << (out_root / name).string() << "\n";
    return 0;
}

int run_fitness(const FitnessOptions& opt) {
    double window = 0.0;
    if (opt.window_s) {
        window = *opt.window_s;
        if (!(window > 0.0) || std::abs(window - std::llround(window)) > 1e-9)
            throw ConfigError("--window-s must be a positive whole number of seconds");
    }

    auto target_events = load_spike_events(opt.target_path);
    auto record_events = load_spike_events(opt.record_path);

    if (!opt.window_s) {
        // infer each file's window as the whole second that covers its last spike
        const auto inferred = [](const std::vector<SpikeEvent>& events,
                                 const std::string& label) {
            if (events.empty())
                throw DataError(label + ": cannot infer a window from an empty recording");
            return std::floor(events.back().time_s) + 1.0;
        };
        const double target_window = inferred(target_events, "target");
        const double record_window = inferred(record_events, "record");
        if (target_window != record_window)
            throw DataError("window mismatch: target covers " +
                            format_double(target_window) + " s, record covers " +
                            format_double(record_window) + " s (use --window-s)");
        window = target_window;
    } else {
        const auto clip = [&](std::vector<SpikeEvent>& events) {
            std::erase_if(events, [&](const SpikeEvent& e) { return e.time_s >= window; });
        };
        clip(target_events);
        clip(record_events);
    }

    FitnessValue fitness;
    try {
        fitness = sorted_bin_fitness(bin_counts(target_events, window, 1.0),
                              bin_counts(record_events, window, 1.0));
    } catch (const UndefinedFitnessError& e) {
        throw DataError(e.what());
    }
    std::cout << "objective_f " << format_double(fitness.objective_f) << "\n";
    std::cout << "score " << format_double(fitness.score) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evolve spiking cellular automata and geometric networks to emulate "
                 "recorded population activity"};
    app.require_subcommand(1);

    EvolveOptions evolve_opt;
    auto* evolve = app.add_subcommand(
        "evolve", "run all configured trials of the evolutionary search");
    evolve->add_option("--config", evolve_opt.config_path, "JSON run configuration")
        ->required();
    evolve->add_option("--target", evolve_opt.target_path, "target spike CSV (time_s,channel)")
        ->required();
    evolve->add_option("--out", evolve_opt.out_dir, "output directory")->required();
    evolve->add_option("--seed", evolve_opt.seed, "override the master seed");
    evolve->add_option("--model", evolve_opt.model, "override the model kind (ca|network)");
    evolve->add_option("--steps", evolve_opt.steps, "override evaluation steps");
    evolve->add_option("--window-offset-s", evolve_opt.window_offset_s,
                       "start of the target window within the recording, seconds");
    evolve->add_option("--threads", evolve_opt.threads,
                       "worker cap for population evaluation (0 = hardware)");

    SimulateOptions simulate_opt;
    auto* simulate = app.add_subcommand("simulate", "replay a saved genome");
    simulate->add_option("--genome", simulate_opt.genome_path, "genome JSON file")
        ->required();
    simulate->add_option("--steps", simulate_opt.steps, "simulation steps (40 ms each)");
    simulate->add_option("--out", simulate_opt.out_dir, "output directory")->required();
    simulate->add_option("--seed", simulate_opt.seed, "override the stored stream seed");

    FitnessOptions fitness_opt;
    auto* fitness = app.add_subcommand(
        "fitness", "score a recording against a target (sorted 1-s bins)");
    fitness->add_option("--target", fitness_opt.target_path, "target spike CSV")->required();
    fitness->add_option("--record", fitness_opt.record_path, "recording spike CSV")
        ->required();
    fitness->add_option("--window-s", fitness_opt.window_s,
                        "window applied to both files, whole seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (evolve->parsed()) return run_evolve(evolve_opt);
        if (simulate->parsed()) return run_simulate(simulate_opt);
        return run_fitness(fitness_opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
