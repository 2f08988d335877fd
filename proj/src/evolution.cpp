#include "evospike/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "evospike/simulation.hpp"

namespace evospike {

namespace {

// rank by ascending objective, ties broken by lineage for determinism
std::vector<std::size_t> rank_indices(const std::vector<Individual>& population) {
    std::vector<std::size_t> order(population.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& fa = population[a].fitness;
        const auto& fb = population[b].fitness;
        if (!fa || !fb) throw std::logic_error("ranking requires evaluated individuals");
        if (fa->objective_f != fb->objective_f) return fa->objective_f < fb->objective_f;
        return population[a].lineage_id < population[b].lineage_id;
    });
    return order;
}

void evaluate_individual(Individual& individual, const BinnedCounts& target,
                         const EvolutionConfig& config, std::uint64_t stream_seed) {
    individual.stream_seed = stream_seed;
    RngStream stream(stream_seed);

    const ModelParams params = decode(individual.genome, config.bounds);
    const GridLayout layout{};
    if (!individual.connectivity) {
        Connectivity conn = config.model_kind == ModelKind::ca
                                ? build_ca(layout, static_cast<int>(params.density))
                                : build_network(layout, params.density, stream);
        conn.signs = assign_signs(layout, params.inhib_ratio, stream);
        individual.connectivity = std::move(conn);
    }

    const SpikeRecord record =
        simulate(params, *individual.connectivity, config.eval_steps, stream);
    const SpikeRecord observed = observed_record(record);
    const auto events = to_events(observed);
    const BinnedCounts simulated =
        bin_counts(events, config.eval_window_seconds(), target.bin_seconds);

    try {
        individual.fitness = sorted_bin_fitness(target, simulated);
    } catch (const UndefinedFitnessError& e) {
        std::cerr << "warning: individual " + std::to_string(individual.lineage_id) +
                         " ranked worst: " + e.what() + "\n";
        individual.fitness = worst_fitness();
    }
}

}  // namespace

int EvolutionConfig::elite_count() const {
    const double raw = elite_fraction * population_size;
    const int count = static_cast<int>(std::ceil(raw - 1e-9));
    return std::clamp(count, 1, parent_count());
}

int EvolutionConfig::parent_count() const {
    const int count = static_cast<int>(std::llround(parent_fraction * population_size));
    return std::clamp(count, 1, population_size);
}

double EvolutionConfig::eval_window_seconds() const {
    return static_cast<double>(std::llround(eval_steps * kDefaultStepSeconds));
}

void EvolutionConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (generations < 0) throw std::invalid_argument("generations must be >= 0");
    if (!(elite_fraction > 0.0 && elite_fraction <= parent_fraction && parent_fraction < 1.0))
        throw std::invalid_argument("need 0 < elite_fraction <= parent_fraction < 1");
    if (mutation_prob < 0.0 || mutation_prob > 1.0)
        throw std::invalid_argument("mutation_prob must be in [0, 1]");
    if (eval_steps < 1) throw std::invalid_argument("eval_steps must be >= 1");
    const double window = eval_steps * kDefaultStepSeconds;
    if (std::abs(window - std::llround(window)) > 1e-9)
        throw std::invalid_argument("eval_steps must cover a whole number of seconds");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    evospike::validate(bounds);
    if (bounds.kind != model_kind)
        throw std::invalid_argument("gene bounds kind does not match model_kind");
}

std::vector<double> EvolutionResult::best_so_far() const {
    std::vector<double> best;
    best.reserve(fitness_history.size());
    double running = std::numeric_limits<double>::infinity();
    for (const auto& generation : fitness_history) {
        for (const auto& f : generation) running = std::min(running, f.objective_f);
        best.push_back(running);
    }
    return best;
}

FitnessValue worst_fitness() {
    return {std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
}

void evaluate_population(std::vector<Individual>& population, const BinnedCounts& target,
                         const EvolutionConfig& config, int trial, int generation,
                         int threads) {
    config.validate();

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < population.size(); ++i)
        if (!population[i].fitness) todo.push_back(i);  // elites keep their fitness

    auto seed_for = [&](std::size_t index) {
        return derive_seed(config.seed, static_cast<std::uint64_t>(trial),
                           static_cast<std::uint64_t>(generation), index,
                           StreamPurpose::evaluation);
    };

    const int workers = std::min<int>(std::max(threads, 1), static_cast<int>(todo.size()));
    if (workers <= 1) {
        for (const std::size_t i : todo)
            evaluate_individual(population[i], target, config, seed_for(i));
        return;
    }

    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto drain = [&] {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= todo.size()) return;
            try {
                const std::size_t i = todo[k];
                evaluate_individual(population[i], target, config, seed_for(i));
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::size_t> select_parents(const std::vector<Individual>& population,
                                        double parent_fraction) {
    if (!(parent_fraction > 0.0 && parent_fraction < 1.0))
        throw std::invalid_argument("parent_fraction must be in (0, 1)");
    auto order = rank_indices(population);
    const auto keep = std::clamp<std::size_t>(
        static_cast<std::size_t>(
            std::llround(parent_fraction * static_cast<double>(population.size()))),
        1, population.size());
    order.resize(keep);
    return order;
}

Genome uniform_crossover(const Genome& a, const Genome& b, RngStream& rng) {
    validate(a);
    validate(b);
    Genome child;
    for (std::size_t i = 0; i < kGeneCount; ++i)
        child.genes[i] = rng.next_unit() < 0.5 ? a.genes[i] : b.genes[i];
    return child;
}

Genome mutate(const Genome& genome, RngStream& rng, double mutation_prob) {
    validate(genome);
    if (mutation_prob < 0.0 || mutation_prob > 1.0)
        throw std::invalid_argument("mutation_prob must be in [0, 1]");
    Genome mutated = genome;
    for (auto& gene : mutated.genes)
        if (rng.next_unit() < mutation_prob) gene = rng.next_unit();
    return mutated;
}

std::vector<Individual> next_generation(const std::vector<Individual>& population,
                                        const EvolutionConfig& config, RngStream& rng,
                                        std::uint64_t& next_lineage) {
    config.validate();
    if (population.size() != static_cast<std::size_t>(config.population_size))
        throw std::invalid_argument("population size does not match config");

    const auto ranked = rank_indices(population);
    const auto elite_n = static_cast<std::size_t>(config.elite_count());
    const auto parent_n = static_cast<std::size_t>(config.parent_count());

    std::vector<Individual> next;
    next.reserve(population.size());
    for (std::size_t e = 0; e < elite_n; ++e)
        next.push_back(population[ranked[e]]);  // verbatim, connectivity included

    while (next.size() < population.size()) {
        const std::size_t a = ranked[static_cast<std::size_t>(rng.next_below(parent_n))];
        std::size_t b = a;
        while (parent_n > 1 && b == a)
            b = ranked[static_cast<std::size_t>(rng.next_below(parent_n))];

        Individual child;
        child.genome = mutate(uniform_crossover(population[a].genome, population[b].genome, rng),
                              rng, config.mutation_prob);
        child.lineage_id = next_lineage++;
        next.push_back(std::move(child));
    }
    return next;
}

EvolutionResult run_evolution(const BinnedCounts& target, const EvolutionConfig& config,
                              int trial, int threads, const GenerationSink& sink) {
    config.validate();
    const auto expected_bins = static_cast<std::size_t>(
        std::llround(config.eval_window_seconds() / target.bin_seconds));
    if (target.counts.size() != expected_bins)
        throw std::invalid_argument("target has " + std::to_string(target.counts.size()) +
                                    " bins, evaluation window needs " +
                                    std::to_string(expected_bins));

    RngStream init_stream(derive_seed(config.seed, static_cast<std::uint64_t>(trial), 0, 0,
                                      StreamPurpose::population_init));
    std::vector<Individual> population(static_cast<std::size_t>(config.population_size));
    for (std::size_t i = 0; i < population.size(); ++i) {
        population[i].genome = random_genome(init_stream);
        population[i].lineage_id = i;
    }
    std::uint64_t next_lineage = population.size();

    EvolutionResult result;
    auto record_generation = [&](int generation) {
        std::vector<FitnessValue> snapshot;
        snapshot.reserve(population.size());
        for (const auto& ind : population) snapshot.push_back(*ind.fitness);
        result.fitness_history.push_back(std::move(snapshot));
        result.best_per_generation.push_back(population[rank_indices(population)[0]]);
        if (sink) sink(generation, population);
    };

    evaluate_population(population, target, config, trial, 0, threads);
    record_generation(0);

    for (int generation = 1; generation <= config.generations; ++generation) {
        RngStream breed_stream(derive_seed(config.seed, static_cast<std::uint64_t>(trial),
                                           static_cast<std::uint64_t>(generation), 0,
                                           StreamPurpose::breeding));
        population = next_generation(population, config, breed_stream, next_lineage);
        evaluate_population(population, target, config, trial, generation, threads);
        record_generation(generation);
    }

    result.final_best = result.best_per_generation.front();
    for (const auto& best : result.best_per_generation)
        if (best.fitness->objective_f < result.final_best.fitness->objective_f)
            result.final_best = best;
    return result;
}

}  // namespace evospike
