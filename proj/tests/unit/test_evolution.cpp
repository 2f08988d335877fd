#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "evospike/evolution.hpp"
#include "evospike/simulation.hpp"

using namespace evospike;

namespace {

Individual scored(double objective, std::uint64_t lineage) {
    Individual ind;
    ind.genome.genes.fill(0.5);
    ind.fitness = FitnessValue{objective, 1.0 - objective};
    ind.lineage_id = lineage;
    return ind;
}

// 2 s evaluation window (50 steps at 40 ms) keeps evaluation cheap
EvolutionConfig tiny_config(ModelKind kind = ModelKind::ca) {
    EvolutionConfig config;
    config.population_size = 6;
    config.generations = 2;
    config.eval_steps = 50;
    config.trials = 1;
    config.model_kind = kind;
    config.bounds = GeneBounds::defaults(kind);
    config.seed = 4242;
    return config;
}

BinnedCounts bins_of(std::vector<std::int64_t> counts) {
    BinnedCounts b;
    b.counts = std::move(counts);
    return b;
}

// mirrors one individual evaluation so tests can pre-compute its output
SpikeRecord pipeline_record(const Genome& genome, const EvolutionConfig& config,
                            std::uint64_t stream_seed) {
    RngStream stream(stream_seed);
    const auto params = decode(genome, config.bounds);
    const GridLayout layout{};
    Connectivity conn = config.model_kind == ModelKind::ca
                            ? build_ca(layout, static_cast<int>(params.density))
                            : build_network(layout, params.density, stream);
    conn.signs = assign_signs(layout, params.inhib_ratio, stream);
    return simulate(params, conn, config.eval_steps, stream);
}

}  // namespace

TEST_CASE("config derived counts match the published setup") {
    EvolutionConfig config;  // N = 60, 50% parents, 5% elites
    CHECK(config.parent_count() == 30);
    CHECK(config.elite_count() == 3);
    CHECK(config.eval_window_seconds() == 60.0);
    config.validate();
}

TEST_CASE("config validation rejects inconsistent settings") {
    EvolutionConfig config;
    config.population_size = 1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = EvolutionConfig{};
    config.elite_fraction = 0.8;  // above parent_fraction
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = EvolutionConfig{};
    config.eval_steps = 30;  // 1.2 s, not a whole second
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = EvolutionConfig{};
    config.model_kind = ModelKind::network;  // bounds still CA
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("parent selection keeps the top half") {
    std::vector<Individual> population;
    for (int i = 0; i < 60; ++i)
        population.push_back(scored(static_cast<double>((i * 37) % 60), i));

    const auto parents = select_parents(population, 0.5);
    CHECK(parents.size() == 30);
    // sorting oracle: the 30 smallest objective values are 0..29
    std::set<double> selected;
    for (const auto idx : parents) selected.insert(population[idx].fitness->objective_f);
    for (double f = 0.0; f < 30.0; f += 1.0) CHECK(selected.contains(f));
}

TEST_CASE("equal fitness breaks ties by lineage id") {
    std::vector<Individual> population;
    for (int i = 0; i < 60; ++i) population.push_back(scored(0.5, 59 - i));
    const auto parents = select_parents(population, 0.5);
    CHECK(parents.size() == 30);
    for (const auto idx : parents) CHECK(population[idx].lineage_id < 30);
}

TEST_CASE("uniform crossover copies each gene from one of the parents") {
    RngStream rng(1);
    Genome a, b;
    a.genes.fill(0.25);
    b.genes.fill(0.75);

    const auto same = uniform_crossover(a, a, rng);
    CHECK(same.genes == a.genes);

    for (int trial = 0; trial < 200; ++trial) {
        const auto child = uniform_crossover(a, b, rng);
        for (const double gene : child.genes)
            CHECK((gene == 0.25 || gene == 0.75));
    }
}

TEST_CASE("crossover picks each parent half the time") {
    RngStream rng(33);
    Genome a, b;
    a.genes.fill(0.0);
    b.genes.fill(1.0);
    const int trials = 10000;
    std::array<int, kGeneCount> from_b{};
    for (int t = 0; t < trials; ++t) {
        const auto child = uniform_crossover(a, b, rng);
        for (std::size_t g = 0; g < kGeneCount; ++g)
            if (child.genes[g] == 1.0) ++from_b[g];
    }
    for (std::size_t g = 0; g < kGeneCount; ++g)
        CHECK(std::abs(from_b[g] / static_cast<double>(trials) - 0.5) < 0.02);
}

TEST_CASE("mutation endpoints and frequency") {
    RngStream rng(9);
    Genome g;
    for (std::size_t i = 0; i < kGeneCount; ++i)
        g.genes[i] = 0.1 + 0.1 * static_cast<double>(i);

    const auto untouched = mutate(g, rng, 0.0);
    CHECK(untouched.genes == g.genes);

    const auto redrawn = mutate(g, rng, 1.0);
    for (std::size_t i = 0; i < kGeneCount; ++i) {
        CHECK(redrawn.genes[i] >= 0.0);
        CHECK(redrawn.genes[i] < 1.0);
        CHECK(redrawn.genes[i] != g.genes[i]);
    }

    const int genomes = 20000;  // 140k gene slots
    int mutations = 0;
    for (int t = 0; t < genomes; ++t) {
        const auto m = mutate(g, rng, 0.10);
        for (std::size_t i = 0; i < kGeneCount; ++i)
            if (m.genes[i] != g.genes[i]) ++mutations;
    }
    const double frequency = mutations / static_cast<double>(genomes * kGeneCount);
    CHECK(std::abs(frequency - 0.10) < 0.005);
}

TEST_CASE("next generation: 3 elites plus 57 children at N = 60") {
    EvolutionConfig config;  // defaults: N = 60
    std::vector<Individual> population;
    for (int i = 0; i < 60; ++i) {
        auto ind = scored(static_cast<double>(i) / 60.0, i);
        // give the best individuals a connectivity instance to carry forward
        if (i < 5) {
            ind.connectivity = build_ca(GridLayout{}, 1);
            ind.connectivity->signs[0] = -1;
        }
        population.push_back(std::move(ind));
    }

    RngStream rng(77);
    std::uint64_t next_lineage = 60;
    const auto next = next_generation(population, config, rng, next_lineage);

    CHECK(next.size() == 60);
    int elites = 0, children = 0;
    for (const auto& ind : next) {
        if (ind.fitness) {
            ++elites;
            CHECK(ind.lineage_id < 3);  // the 3 best by objective
            REQUIRE(ind.connectivity.has_value());
            CHECK(ind.connectivity->edge_list() ==
                  population[ind.lineage_id].connectivity->edge_list());
            CHECK(ind.connectivity->signs == population[ind.lineage_id].connectivity->signs);
            CHECK(ind.genome.genes == population[ind.lineage_id].genome.genes);
        } else {
            ++children;
            CHECK_FALSE(ind.connectivity.has_value());
            CHECK(ind.lineage_id >= 60);
            for (const double gene : ind.genome.genes) {
                CHECK(gene >= 0.0);
                CHECK(gene <= 1.0);
            }
        }
    }
    CHECK(elites == 3);
    CHECK(children == 57);
    CHECK(next_lineage == 60 + 57);
}

TEST_CASE("evaluation is deterministic and order independent") {
    const auto config = tiny_config();
    const auto target = bins_of({40, 55});

    RngStream seeder(5);
    std::vector<Individual> population;
    for (int i = 0; i < config.population_size; ++i) {
        Individual ind;
        ind.genome = random_genome(seeder);
        ind.lineage_id = static_cast<std::uint64_t>(i);
        population.push_back(std::move(ind));
    }

    auto serial = population;
    evaluate_population(serial, target, config, 0, 0, 1);
    auto threaded = population;
    evaluate_population(threaded, target, config, 0, 0, 4);

    for (int i = 0; i < config.population_size; ++i) {
        REQUIRE(serial[i].fitness.has_value());
        CHECK(serial[i].fitness->objective_f == threaded[i].fitness->objective_f);
        CHECK(serial[i].stream_seed == threaded[i].stream_seed);
        REQUIRE(serial[i].connectivity.has_value());
    }

    // clones at the same index get the same stream, hence the same fitness
    auto clones = population;
    clones[2].genome = population[3].genome;
    evaluate_population(clones, target, config, 0, 0, 1);
    auto moved = population;
    moved[2].genome = population[3].genome;
    evaluate_population(moved, target, config, 0, 0, 2);
    CHECK(clones[2].fitness->objective_f == moved[2].fitness->objective_f);
}

TEST_CASE("a silent target ranks every individual worst instead of aborting") {
    const auto config = tiny_config();
    const auto target = bins_of({0, 0});

    std::vector<Individual> population(2);
    RngStream seeder(6);
    for (auto& ind : population) ind.genome = random_genome(seeder);

    evaluate_population(population, target, config, 0, 0, 1);
    for (const auto& ind : population) {
        REQUIRE(ind.fitness.has_value());
        CHECK(ind.fitness->objective_f == std::numeric_limits<double>::infinity());
    }
}

TEST_CASE("an individual scored against its own output reaches f = 0") {
    for (const auto kind : {ModelKind::ca, ModelKind::network}) {
        const auto config = tiny_config(kind);
        Individual ind;
        ind.genome.genes = {0.3, 0.6, 0.2, 0.4, 0.5, 0.3, 0.45};

        const auto seed =
            derive_seed(config.seed, 0, 0, 0, StreamPurpose::evaluation);
        const auto record = pipeline_record(ind.genome, config, seed);
        const auto events = to_events(observed_record(record));
        const auto target = bin_counts(events, config.eval_window_seconds(), 1.0);
        if (target.total() == 0) continue;  // silent genome, nothing to recover

        std::vector<Individual> population{ind};
        evaluate_population(population, target, config, 0, 0, 1);
        CHECK(population[0].fitness->objective_f == 0.0);
        CHECK(population[0].fitness->score == 1.0);
    }
}

TEST_CASE("zero generations returns only the evaluated initial population") {
    auto config = tiny_config();
    config.generations = 0;
    const auto result = run_evolution(bins_of({40, 55}), config);
    CHECK(result.fitness_history.size() == 1);
    CHECK(result.fitness_history[0].size() == 6);
    CHECK(result.best_per_generation.size() == 1);
    REQUIRE(result.final_best.fitness.has_value());
}

TEST_CASE("full runs are reproducible from the seed") {
    const auto config = tiny_config(ModelKind::network);
    const auto target = bins_of({30, 45});
    const auto a = run_evolution(target, config, 0, 1);
    const auto b = run_evolution(target, config, 0, 3);

    REQUIRE(a.fitness_history.size() == b.fitness_history.size());
    for (std::size_t g = 0; g < a.fitness_history.size(); ++g)
        for (std::size_t i = 0; i < a.fitness_history[g].size(); ++i)
            CHECK(a.fitness_history[g][i].objective_f ==
                  b.fitness_history[g][i].objective_f);
    CHECK(a.final_best.genome.genes == b.final_best.genome.genes);
    CHECK(a.final_best.stream_seed == b.final_best.stream_seed);
}

TEST_CASE("population size holds and the best objective never worsens") {
    auto config = tiny_config();
    config.generations = 5;
    std::vector<std::size_t> sizes;
    const auto result = run_evolution(
        bins_of({40, 55}), config, 0, 2,
        [&](int, const std::vector<Individual>& pop) { sizes.push_back(pop.size()); });

    CHECK(sizes == std::vector<std::size_t>(6, 6));
    const auto best = result.best_so_far();
    for (std::size_t g = 1; g < best.size(); ++g) CHECK(best[g] <= best[g - 1]);

    // elitism also keeps the per-generation minimum monotone
    for (std::size_t g = 1; g < result.fitness_history.size(); ++g) {
        const auto min_of = [](const std::vector<FitnessValue>& fs) {
            double m = std::numeric_limits<double>::infinity();
            for (const auto& f : fs) m = std::min(m, f.objective_f);
            return m;
        };
        CHECK(min_of(result.fitness_history[g]) <=
              min_of(result.fitness_history[g - 1]));
    }

    const auto mismatched = bins_of({1, 2, 3});  // 3 bins for a 2 s window
    CHECK_THROWS_AS(run_evolution(mismatched, config), std::invalid_argument);
}
