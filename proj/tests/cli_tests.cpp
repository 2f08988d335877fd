// End-to-end checks of the evospike binary: exit codes, artifact trees,
// determinism across thread counts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "evospike/io.hpp"
#include "unit/temp_dir.hpp"

using namespace evospike;

namespace {

const std::string kCli = EVOSPIKE_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run_cli(const std::string& args, const TempDir& dir) {
    const auto out_path = dir / "stdout.txt";
    const auto err_path = dir / "stderr.txt";
    const std::string command = kCli + " " + args + " > " + out_path.string() + " 2> " +
                                err_path.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// every regular file in the tree, keyed by relative path
std::map<std::string, std::string> tree_contents(const std::filesystem::path& root) {
    std::map<std::string, std::string> contents;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            contents[std::filesystem::relative(entry.path(), root).string()] =
                slurp(entry.path());
    return contents;
}

// 2 s target with bins [3, 2]
std::string small_target_csv() {
    return "time_s,channel\n0.1,0\n0.4,5\n0.9,9\n1.2,3\n1.7,7\n";
}

}  // namespace

TEST_CASE("help exits zero for the app and every subcommand") {
    TempDir dir("help");
    CHECK(run_cli("--help", dir).exit_code == 0);
    for (const char* sub : {"evolve", "simulate", "fitness"}) {
        const auto result = run_cli(std::string(sub) + " --help", dir);
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("--help") != std::string::npos);
    }
}

TEST_CASE("unknown flags and missing subcommands are usage errors") {
    TempDir dir("usage");
    CHECK(run_cli("", dir).exit_code == 1);
    CHECK(run_cli("fitness --target a --record b --bogus", dir).exit_code == 1);
    CHECK(run_cli("frobnicate", dir).exit_code == 1);
}

TEST_CASE("fitness of a file against itself is zero") {
    TempDir dir("selffit");
    write_file(dir / "target.csv", small_target_csv());
    const auto result =
        run_cli("fitness --target " + (dir / "target.csv").string() + " --record " +
                    (dir / "target.csv").string(),
                dir);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("objective_f 0\n") != std::string::npos);
    CHECK(result.out.find("score 1\n") != std::string::npos);
}

TEST_CASE("fitness reproduces the worked example end to end") {
    TempDir dir("workedfit");
    // target bins [2, 0, 3], record bins [1, 1, 1]
    write_file(dir / "target.csv",
               "time_s,channel\n0.1,0\n0.2,1\n2.1,2\n2.2,3\n2.3,4\n");
    write_file(dir / "record.csv", "time_s,channel\n0.5,0\n1.5,1\n2.5,2\n");
    const auto result =
        run_cli("fitness --target " + (dir / "target.csv").string() + " --record " +
                    (dir / "record.csv").string(),
                dir);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("objective_f 0.8\n") != std::string::npos);
}

TEST_CASE("fitness window handling") {
    TempDir dir("windows");
    write_file(dir / "short.csv", small_target_csv());
    write_file(dir / "long.csv", "time_s,channel\n0.5,0\n4.5,1\n");

    // mismatched inferred windows: 2 s vs 5 s
    const auto mismatch = run_cli("fitness --target " + (dir / "short.csv").string() +
                                      " --record " + (dir / "long.csv").string(),
                                  dir);
    CHECK(mismatch.exit_code == 2);
    CHECK(mismatch.err.find("window mismatch") != std::string::npos);

    // an explicit window reconciles them
    const auto forced = run_cli("fitness --target " + (dir / "short.csv").string() +
                                    " --record " + (dir / "long.csv").string() +
                                    " --window-s 2",
                                dir);
    CHECK(forced.exit_code == 0);

    const auto missing = run_cli("fitness --target " + (dir / "absent.csv").string() +
                                     " --record " + (dir / "short.csv").string(),
                                 dir);
    CHECK(missing.exit_code == 2);
}

TEST_CASE("simulate writes raster, ASDR and figure; marks equal raster rows") {
    TempDir dir("simulate");
    GenomeFile genome_file;
    genome_file.genome.genes = {0.2, 0.6, 0.1, 0.3, 0.6, 0.4, 0.2};
    genome_file.bounds = GeneBounds::defaults(ModelKind::ca);
    genome_file.seed = 20240601;
    save_genome(dir / "genome.json", genome_file);

    const auto result = run_cli("simulate --genome " + (dir / "genome.json").string() +
                                    " --steps 250 --out " + (dir / "sim").string(),
                                dir);
    CHECK(result.exit_code == 0);
    for (const char* name : {"raster.csv", "asdr.csv", "raster.svg"})
        CHECK(std::filesystem::exists(dir / "sim" / name));

    const auto raster = load_spike_events(dir / "sim" / "raster.csv");
    const auto svg = slurp(dir / "sim" / "raster.svg");
    std::size_t marks = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++marks;
        pos += 7;
    }
    CHECK(marks == raster.size());
    CHECK(raster.size() > 0);

    // asdr rows cover the 10 s window
    const auto asdr_text = slurp(dir / "sim" / "asdr.csv");
    CHECK(std::count(asdr_text.begin(), asdr_text.end(), '\n') == 1 + 10);

    // same seed, same outputs
    const auto rerun = run_cli("simulate --genome " + (dir / "genome.json").string() +
                                   " --steps 250 --out " + (dir / "sim2").string(),
                               dir);
    CHECK(rerun.exit_code == 0);
    CHECK(slurp(dir / "sim2" / "raster.csv") == slurp(dir / "sim" / "raster.csv"));
}

TEST_CASE("a silent genome yields an empty raster") {
    TempDir dir("silent");
    GenomeFile genome_file;
    // zero spontaneous firing, maximal threshold: nothing can ever fire
    genome_file.genome.genes = {0.5, 0.0, 0.1, 1.0, 0.0, 0.0, 0.2};
    genome_file.bounds = GeneBounds::defaults(ModelKind::ca);
    genome_file.seed = 7;
    save_genome(dir / "genome.json", genome_file);

    const auto result = run_cli("simulate --genome " + (dir / "genome.json").string() +
                                    " --steps 250 --out " + (dir / "sim").string(),
                                dir);
    CHECK(result.exit_code == 0);
    CHECK(load_spike_events(dir / "sim" / "raster.csv").empty());
}

TEST_CASE("evolve writes per-trial artifacts plus a cross-trial summary") {
    TempDir dir("evolve");
    write_file(dir / "target.csv", small_target_csv());
    write_file(dir / "config.json", R"({
  "population_size": 6,
  "generations": 2,
  "eval_steps": 50,
  "trials": 2,
  "model_kind": "network",
  "seed": 99
})");

    const auto result = run_cli("evolve --config " + (dir / "config.json").string() +
                                    " --target " + (dir / "target.csv").string() +
                                    " --out " + (dir / "out").string() + " --threads 2",
                                dir);
    CHECK(result.exit_code == 0);

    for (const char* trial : {"trial_000", "trial_001"}) {
        for (const char* name :
             {"config.json", "fitness.csv", "best_genome.json", "connectivity_edges.csv",
              "connectivity_signs.csv", "raster.csv", "asdr.csv", "COMPLETE"})
            CHECK(std::filesystem::exists(dir / "out" / trial / name));
        const auto rows = load_fitness_history(dir / "out" / trial / "fitness.csv");
        CHECK(rows.size() == 3 * 6);  // (generations + 1) * population
    }
    CHECK(std::filesystem::exists(dir / "out" / "summary.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "fitness.svg"));

    // the summary has one row per generation plus the header
    const auto summary = slurp(dir / "out" / "summary.csv");
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 1 + 3);

    // every printed path exists
    std::size_t paths_printed = 0, pos = 0;
    while ((pos = result.out.find('\n', pos)) != std::string::npos) {
        ++paths_printed;
        ++pos;
    }
    CHECK(paths_printed >= 18);
}

TEST_CASE("evolve trees are identical across seeds-equal runs and thread counts") {
    TempDir dir("determinism");
    write_file(dir / "target.csv", small_target_csv());
    write_file(dir / "config.json", R"({
  "population_size": 6,
  "generations": 2,
  "eval_steps": 50,
  "trials": 1,
  "model_kind": "ca",
  "seed": 1234
})");

    const std::string base = "evolve --config " + (dir / "config.json").string() +
                             " --target " + (dir / "target.csv").string();
    CHECK(run_cli(base + " --out " + (dir / "a").string() + " --threads 1", dir)
              .exit_code == 0);
    CHECK(run_cli(base + " --out " + (dir / "b").string() + " --threads 3", dir)
              .exit_code == 0);
    CHECK(tree_contents(dir / "a") == tree_contents(dir / "b"));
}

TEST_CASE("evolve rejects bad configs and missing data") {
    TempDir dir("badevolve");
    write_file(dir / "target.csv", small_target_csv());
    write_file(dir / "bad.json", R"({"population_sizes": 6})");

    const auto bad_config = run_cli("evolve --config " + (dir / "bad.json").string() +
                                        " --target " + (dir / "target.csv").string() +
                                        " --out " + (dir / "o1").string(),
                                    dir);
    CHECK(bad_config.exit_code == 1);

    write_file(dir / "ok.json", R"({"population_size": 6, "generations": 0,
        "eval_steps": 50, "trials": 1, "seed": 5})");
    const auto no_target = run_cli("evolve --config " + (dir / "ok.json").string() +
                                       " --target " + (dir / "nope.csv").string() +
                                       " --out " + (dir / "o2").string(),
                                   dir);
    CHECK(no_target.exit_code == 2);

    // model override also swaps the density bounds
    const auto overridden = run_cli("evolve --config " + (dir / "ok.json").string() +
                                        " --target " + (dir / "target.csv").string() +
                                        " --out " + (dir / "o3").string() +
                                        " --model network",
                                    dir);
    CHECK(overridden.exit_code == 0);
    const auto genome = load_genome(dir / "o3" / "trial_000" / "best_genome.json");
    CHECK(genome.bounds.kind == ModelKind::network);
}
