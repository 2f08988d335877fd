#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "evospike/genome.hpp"
#include "evospike/metrics.hpp"
#include "evospike/topology.hpp"

namespace evospike {

struct Individual {
    Genome genome;
    // Present once evaluated; elites carry their exact instance forward so a
    // lucky network instantiation is never lost.
    std::optional<Connectivity> connectivity;
    std::optional<FitnessValue> fitness;
    std::uint64_t lineage_id = 0;
    // Seed of the stream that built the connectivity and drove the
    // simulation; enough to replay the evaluation bit for bit.
    std::uint64_t stream_seed = 0;
};

struct EvolutionConfig {
    int population_size = 60;
    int generations = 80;        // breeding iterations after the initial population
    double parent_fraction = 0.5;
    double elite_fraction = 0.05;
    double mutation_prob = 0.10;
    int eval_steps = 1500;       // 60 s at 40 ms per step
    int trials = 10;
    ModelKind model_kind = ModelKind::ca;
    GeneBounds bounds = GeneBounds::defaults(ModelKind::ca);
    std::uint64_t seed = 1;

    int elite_count() const;   // ceil(elite_fraction * population_size)
    int parent_count() const;  // round(parent_fraction * population_size), >= 1
    double eval_window_seconds() const;

    void validate() const;
};

struct EvolutionResult {
    // fitness_history[g][i] = fitness of individual i in generation g;
    // generation 0 is the evaluated initial population.
    std::vector<std::vector<FitnessValue>> fitness_history;
    std::vector<Individual> best_per_generation;
    Individual final_best;  // lowest objective seen across the whole trial

    // running minimum of objective_f through generation g
    std::vector<double> best_so_far() const;
};

// Sentinel fitness for individuals whose evaluation was undefined (silent
// target); ranks strictly worse than any real value.
FitnessValue worst_fitness();

// Decode, instantiate connectivity (unless the individual already carries
// one), simulate, bin and score every individual that has no fitness yet.
// Each individual's stream seed derives from (config.seed, trial, generation,
// index), so results do not depend on evaluation order or thread count.
void evaluate_population(std::vector<Individual>& population, const BinnedCounts& target,
                         const EvolutionConfig& config, int trial, int generation,
                         int threads = 1);

// Indices ranked by ascending objective, ties broken by lineage_id, truncated
// to the top parent_fraction.
std::vector<std::size_t> select_parents(const std::vector<Individual>& population,
                                        double parent_fraction);

// Each gene copied from either parent with probability 1/2.
Genome uniform_crossover(const Genome& a, const Genome& b, RngStream& rng);

// Each gene independently replaced by a fresh uniform draw with probability
// mutation_prob.
Genome mutate(const Genome& genome, RngStream& rng, double mutation_prob = 0.10);

// Elites copied verbatim (connectivity and fitness included); the remaining
// slots are filled with mutated crossover children of randomly paired
// parents. next_lineage supplies fresh ids for the children.
std::vector<Individual> next_generation(const std::vector<Individual>& population,
                                        const EvolutionConfig& config, RngStream& rng,
                                        std::uint64_t& next_lineage);

using GenerationSink =
    std::function<void(int generation, const std::vector<Individual>& population)>;

// One full trial: initial population, then config.generations rounds of
// selection, crossover, mutation and elitism. The sink, when given, observes
// every evaluated generation (for incremental persistence).
EvolutionResult run_evolution(const BinnedCounts& target, const EvolutionConfig& config,
                              int trial = 0, int threads = 1,
                              const GenerationSink& sink = {});

}  // namespace evospike
