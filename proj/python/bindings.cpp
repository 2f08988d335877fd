#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evospike/evolution.hpp"
#include "evospike/genome.hpp"
#include "evospike/io.hpp"
#include "evospike/metrics.hpp"
#include "evospike/neuron.hpp"
#include "evospike/rng.hpp"
#include "evospike/simulation.hpp"
#include "evospike/topology.hpp"

namespace py = pybind11;
using namespace evospike;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spiking CA / geometric-network simulator with an evolutionary fitter "
              "for MEA-style spike recordings";
    m.attr("__version__") = "0.1.0";

    py::register_exception<UndefinedFitnessError>(m, "UndefinedFitnessError");

    py::enum_<ModelKind>(m, "ModelKind")
        .value("ca", ModelKind::ca)
        .value("network", ModelKind::network);

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &RngStream::next_u64)
        .def("next_unit", &RngStream::next_unit)
        .def("next_below", &RngStream::next_below, py::arg("n"));
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("trial"),
          py::arg("generation"), py::arg("index"), py::arg("purpose"));
    py::enum_<StreamPurpose>(m, "StreamPurpose")
        .value("population_init", StreamPurpose::population_init)
        .value("evaluation", StreamPurpose::evaluation)
        .value("breeding", StreamPurpose::breeding);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("leak_c", &ModelParams::leak_c)
        .def_readwrite("integ_c", &ModelParams::integ_c)
        .def_readwrite("refractory_steps", &ModelParams::refractory_steps)
        .def_readwrite("threshold", &ModelParams::threshold)
        .def_readwrite("spont_prob", &ModelParams::spont_prob)
        .def_readwrite("inhib_ratio", &ModelParams::inhib_ratio)
        .def_readwrite("density", &ModelParams::density)
        .def_readwrite("kind", &ModelParams::kind);

    py::class_<NeuronState>(m, "NeuronState")
        .def(py::init<>())
        .def_readwrite("potential", &NeuronState::potential)
        .def_readwrite("refractory_remaining", &NeuronState::refractory_remaining)
        .def_readwrite("fired", &NeuronState::fired)
        .def_readwrite("is_inhibitory", &NeuronState::is_inhibitory);
    m.def("membrane_step", &membrane_step, py::arg("state"), py::arg("params"),
          py::arg("weighted_input"));
    m.def("threshold_fire", &threshold_fire, py::arg("state"), py::arg("params"),
          py::arg("uniform_draw"));

    py::class_<GridLayout>(m, "GridLayout")
        .def(py::init<>())
        .def(py::init([](int rows, int cols) { return GridLayout{rows, cols}; }),
             py::arg("rows"), py::arg("cols"))
        .def_readwrite("rows", &GridLayout::rows)
        .def_readwrite("cols", &GridLayout::cols)
        .def("node_count", &GridLayout::node_count)
        .def("node_at", &GridLayout::node_at, py::arg("row"), py::arg("col"))
        .def("euclidean_distance", &GridLayout::euclidean_distance)
        .def("chebyshev_distance", &GridLayout::chebyshev_distance);

    py::class_<Connectivity>(m, "Connectivity")
        .def(py::init<>())
        .def_readwrite("kind", &Connectivity::kind)
        .def_readwrite("layout", &Connectivity::layout)
        .def_readwrite("targets", &Connectivity::targets)
        .def_readwrite("signs", &Connectivity::signs)
        .def("node_count", &Connectivity::node_count)
        .def("has_edge", &Connectivity::has_edge, py::arg("pre"), py::arg("post"))
        .def("edge_count", &Connectivity::edge_count)
        .def("edge_list", &Connectivity::edge_list);
    m.def("build_ca", &build_ca, py::arg("layout"), py::arg("radius"));
    m.def("connection_probability", &connection_probability, py::arg("distance"),
          py::arg("c_d"));
    m.def("build_network", &build_network, py::arg("layout"), py::arg("c_d"),
          py::arg("rng"));
    m.def("assign_signs", &assign_signs, py::arg("layout"), py::arg("inhib_ratio"),
          py::arg("rng"));
    m.def("observed_nodes", &observed_nodes, py::arg("layout"));

    py::class_<Genome>(m, "Genome")
        .def(py::init<>())
        .def(py::init([](const std::array<double, kGeneCount>& genes) {
                 Genome g;
                 g.genes = genes;
                 return g;
             }),
             py::arg("genes"))
        .def_readwrite("genes", &Genome::genes);
    py::class_<GeneBounds>(m, "GeneBounds")
        .def(py::init<>())
        .def_static("defaults", &GeneBounds::defaults, py::arg("kind"))
        .def_readwrite("kind", &GeneBounds::kind)
        .def_property(
            "range",
            [](const GeneBounds& b) {
                std::vector<std::pair<double, double>> out;
                for (const auto& r : b.range) out.emplace_back(r.lower, r.upper);
                return out;
            },
            [](GeneBounds& b, const std::vector<std::pair<double, double>>& in) {
                if (in.size() != kGeneCount)
                    throw std::invalid_argument("need exactly 7 gene ranges");
                for (std::size_t i = 0; i < kGeneCount; ++i)
                    b.range[i] = {in[i].first, in[i].second};
            });
    m.def("gene_name", &gene_name, py::arg("index"));
    m.def("decode", &decode, py::arg("genome"), py::arg("bounds"));
    m.def("encode", &encode, py::arg("params"), py::arg("bounds"));
    m.def("random_genome", &random_genome, py::arg("rng"));

    py::class_<SpikeRecord>(m, "SpikeRecord")
        .def(py::init<>())
        .def_readwrite("steps", &SpikeRecord::steps)
        .def_readwrite("step_seconds", &SpikeRecord::step_seconds)
        .def_readwrite("node_count", &SpikeRecord::node_count)
        .def_readwrite("events", &SpikeRecord::events)
        .def_readwrite("observed", &SpikeRecord::observed)
        .def("duration_seconds", &SpikeRecord::duration_seconds);
    m.def("simulate", &simulate, py::arg("params"), py::arg("connectivity"),
          py::arg("steps"), py::arg("rng"), py::arg("warmup_steps") = 0);
    m.def("observed_record", &observed_record, py::arg("record"));

    py::class_<SpikeEvent>(m, "SpikeEvent")
        .def(py::init<>())
        .def(py::init([](double t, std::int32_t c) { return SpikeEvent{t, c}; }),
             py::arg("time_s"), py::arg("channel"))
        .def_readwrite("time_s", &SpikeEvent::time_s)
        .def_readwrite("channel", &SpikeEvent::channel);
    py::class_<BinnedCounts>(m, "BinnedCounts")
        .def(py::init<>())
        .def(py::init([](std::vector<std::int64_t> counts, double bin_seconds) {
                 BinnedCounts b;
                 b.counts = std::move(counts);
                 b.bin_seconds = bin_seconds;
                 return b;
             }),
             py::arg("counts"), py::arg("bin_seconds") = 1.0)
        .def_readwrite("bin_seconds", &BinnedCounts::bin_seconds)
        .def_readwrite("counts", &BinnedCounts::counts)
        .def("total", &BinnedCounts::total)
        .def("mean", &BinnedCounts::mean);
    py::class_<FitnessValue>(m, "FitnessValue")
        .def(py::init<>())
        .def_readwrite("objective_f", &FitnessValue::objective_f)
        .def_readwrite("score", &FitnessValue::score);

    m.def("to_events", &to_events, py::arg("record"));
    m.def(
        "bin_counts",
        [](const std::vector<SpikeEvent>& events, double window_seconds,
           double bin_seconds) {
            return bin_counts(events, window_seconds, bin_seconds);
        },
        py::arg("events"), py::arg("window_seconds"), py::arg("bin_seconds") = 1.0);
    m.def("sorted_bin_fitness", &sorted_bin_fitness, py::arg("experimental"), py::arg("simulated"));
    m.def(
        "asdr",
        [](const std::vector<SpikeEvent>& events, double window_seconds) {
            return asdr(events, window_seconds);
        },
        py::arg("events"), py::arg("window_seconds"));
    m.def(
        "spatial_fitness",
        [](const std::vector<double>& experimental, const std::vector<double>& simulated) {
            return spatial_fitness(experimental, simulated);
        },
        py::arg("experimental_rates"), py::arg("simulated_rates"));
    m.def("per_channel_rates", &per_channel_rates, py::arg("observed"));

    py::class_<Individual>(m, "Individual")
        .def(py::init<>())
        .def_readwrite("genome", &Individual::genome)
        .def_readwrite("connectivity", &Individual::connectivity)
        .def_readwrite("fitness", &Individual::fitness)
        .def_readwrite("lineage_id", &Individual::lineage_id)
        .def_readwrite("stream_seed", &Individual::stream_seed);
    py::class_<EvolutionConfig>(m, "EvolutionConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &EvolutionConfig::population_size)
        .def_readwrite("generations", &EvolutionConfig::generations)
        .def_readwrite("parent_fraction", &EvolutionConfig::parent_fraction)
        .def_readwrite("elite_fraction", &EvolutionConfig::elite_fraction)
        .def_readwrite("mutation_prob", &EvolutionConfig::mutation_prob)
        .def_readwrite("eval_steps", &EvolutionConfig::eval_steps)
        .def_readwrite("trials", &EvolutionConfig::trials)
        .def_readwrite("model_kind", &EvolutionConfig::model_kind)
        .def_readwrite("bounds", &EvolutionConfig::bounds)
        .def_readwrite("seed", &EvolutionConfig::seed)
        .def("elite_count", &EvolutionConfig::elite_count)
        .def("parent_count", &EvolutionConfig::parent_count)
        .def("eval_window_seconds", &EvolutionConfig::eval_window_seconds)
        .def("validate", &EvolutionConfig::validate);
    py::class_<EvolutionResult>(m, "EvolutionResult")
        .def_readwrite("fitness_history", &EvolutionResult::fitness_history)
        .def_readwrite("best_per_generation", &EvolutionResult::best_per_generation)
        .def_readwrite("final_best", &EvolutionResult::final_best)
        .def("best_so_far", &EvolutionResult::best_so_far);

    m.def("uniform_crossover", &uniform_crossover, py::arg("a"), py::arg("b"),
          py::arg("rng"));
    m.def("mutate", &mutate, py::arg("genome"), py::arg("rng"),
          py::arg("mutation_prob") = 0.10);
    m.def(
        "select_parents",
        [](const std::vector<Individual>& population, double parent_fraction) {
            return select_parents(population, parent_fraction);
        },
        py::arg("population"), py::arg("parent_fraction") = 0.5);
    m.def(
        "run_evolution",
        [](const BinnedCounts& target, const EvolutionConfig& config, int trial,
           int threads) {
            py::gil_scoped_release release;
            return run_evolution(target, config, trial, threads);
        },
        py::arg("target"), py::arg("config"), py::arg("trial") = 0,
        py::arg("threads") = 1);

    m.def(
        "load_spike_events",
        [](const std::string& path, std::optional<double> window_seconds,
           double offset_seconds) {
            return load_spike_events(path, window_seconds, offset_seconds);
        },
        py::arg("path"), py::arg("window_seconds") = std::nullopt,
        py::arg("offset_seconds") = 0.0);
}
