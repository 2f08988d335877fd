#include "evospike/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace evospike {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

// strips one trailing CR so CRLF inputs still load
std::string_view trim_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

double parse_double_field(std::string_view text, const std::filesystem::path& path,
                          std::size_t line_no) {
    const std::string value(text);
    char* end = nullptr;
    errno = 0;
    const double parsed = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": bad numeric field '" + value + "'");
    return parsed;
}

long parse_int_field(std::string_view text, const std::filesystem::path& path,
                     std::size_t line_no) {
    long parsed = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": bad integer field '" + std::string(text) + "'");
    return parsed;
}

const char* kind_name(ModelKind kind) {
    return kind == ModelKind::ca ? "ca" : "network";
}

ModelKind kind_from_name(const std::string& name) {
    if (name == "ca") return ModelKind::ca;
    if (name == "network") return ModelKind::network;
    throw ConfigError("model_kind must be 'ca' or 'network', got '" + name + "'");
}

ordered_json bounds_to_json(const GeneBounds& bounds) {
    ordered_json j;
    for (std::size_t i = 0; i < kGeneCount; ++i)
        j[gene_name(i)] = {bounds.range[i].lower, bounds.range[i].upper};
    return j;
}

GeneBounds bounds_from_json(const ordered_json& j, ModelKind kind) {
    GeneBounds bounds = GeneBounds::defaults(kind);
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (std::size_t i = 0; i < kGeneCount; ++i) {
            if (key == gene_name(i)) {
                if (!value.is_array() || value.size() != 2)
                    throw ConfigError("bounds for '" + key + "' must be [lower, upper]");
                bounds.range[i] = {value[0].get<double>(), value[1].get<double>()};
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown gene '" + key + "' in bounds");
    }
    try {
        validate(bounds);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return bounds;
}

ordered_json params_to_json(const ModelParams& p) {
    ordered_json j;
    j["leak_c"] = p.leak_c;
    j["integ_c"] = p.integ_c;
    j["refractory_steps"] = p.refractory_steps;
    j["threshold"] = p.threshold;
    j["spont_prob"] = p.spont_prob;
    j["inhib_ratio"] = p.inhib_ratio;
    j["density"] = p.density;
    return j;
}

ordered_json parse_json(const std::filesystem::path& path, bool config_file) {
    const std::string text = read_text(path);
    try {
        return ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        const std::string message = path.string() + ": " + e.what();
        if (config_file) throw ConfigError(message);
        throw DataError(message);
    }
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buffer, ptr);
}

std::vector<SpikeEvent> load_spike_events(const std::filesystem::path& path,
                                          std::optional<double> window_seconds,
                                          double offset_seconds) {
    if (window_seconds && !(*window_seconds > 0.0))
        throw std::invalid_argument("window must be positive");
    if (offset_seconds < 0.0) throw std::invalid_argument("offset must be >= 0");

    const std::string text = read_text(path);
    std::vector<SpikeEvent> events;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const auto line = trim_line(std::string_view(text).substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;

        if (line_no == 1) {
            if (line != "time_s,channel")
                throw DataError(path.string() + ":1: expected header 'time_s,channel'");
            continue;
        }
        if (line.empty()) continue;

        const auto comma = line.find(',');
        if (comma == std::string_view::npos)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'time_s,channel'");
        const double time_s = parse_double_field(line.substr(0, comma), path, line_no);
        const long channel = parse_int_field(line.substr(comma + 1), path, line_no);
        if (time_s < 0.0)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": negative spike time");
        if (channel < 0 || channel >= 60)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": channel " + std::to_string(channel) + " outside [0, 60)");
        events.push_back({time_s, static_cast<std::int32_t>(channel)});
    }

    std::sort(events.begin(), events.end(), [](const SpikeEvent& a, const SpikeEvent& b) {
        if (a.time_s != b.time_s) return a.time_s < b.time_s;
        return a.channel < b.channel;
    });

    if (window_seconds || offset_seconds > 0.0) {
        std::vector<SpikeEvent> windowed;
        for (const SpikeEvent& e : events) {
            if (e.time_s < offset_seconds) continue;
            if (window_seconds && e.time_s >= offset_seconds + *window_seconds) continue;
            windowed.push_back({e.time_s - offset_seconds, e.channel});
        }
        events = std::move(windowed);
    }
    return events;
}

void write_spike_events(const std::filesystem::path& path,
                        std::span<const SpikeEvent> events) {
    std::string out = "time_s,channel\n";
    for (const SpikeEvent& e : events)
        out += format_double(e.time_s) + "," + std::to_string(e.channel) + "\n";
    write_text(path, out);
}

void write_asdr(const std::filesystem::path& path, std::span<const std::int64_t> counts) {
    std::string out = "second,spike_count\n";
    for (std::size_t s = 0; s < counts.size(); ++s)
        out += std::to_string(s) + "," + std::to_string(counts[s]) + "\n";
    write_text(path, out);
}

void save_genome(const std::filesystem::path& path, const GenomeFile& file) {
    validate(file.genome);
    validate(file.bounds);
    ordered_json j;
    j["genes"] = file.genome.genes;
    j["bounds"] = bounds_to_json(file.bounds);
    j["params"] = params_to_json(decode(file.genome, file.bounds));
    j["seed"] = file.seed;
    j["model_kind"] = kind_name(file.bounds.kind);
    write_text(path, j.dump(2) + "\n");
}

GenomeFile load_genome(const std::filesystem::path& path) {
    const ordered_json j = parse_json(path, false);
    try {
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (key != "genes" && key != "bounds" && key != "params" && key != "seed" &&
                key != "model_kind")
                throw DataError(path.string() + ": unknown key '" + key + "'");
        }
        GenomeFile file;
        const ModelKind kind = kind_from_name(j.at("model_kind").get<std::string>());
        file.bounds = j.contains("bounds") ? bounds_from_json(j.at("bounds"), kind)
                                           : GeneBounds::defaults(kind);
        const auto genes = j.at("genes").get<std::vector<double>>();
        if (genes.size() != kGeneCount)
            throw DataError(path.string() + ": expected " + std::to_string(kGeneCount) +
                            " genes, got " + std::to_string(genes.size()));
        std::copy(genes.begin(), genes.end(), file.genome.genes.begin());
        validate(file.genome);
        file.seed = j.value("seed", std::uint64_t{0});
        return file;
    } catch (const ordered_json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const ConfigError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

EvolutionConfig load_config(const std::filesystem::path& path) {
    const ordered_json j = parse_json(path, true);
    EvolutionConfig config;
    try {
        // kind first: it fixes the default bounds the rest override
        if (j.contains("model_kind"))
            config.model_kind = kind_from_name(j.at("model_kind").get<std::string>());
        config.bounds = GeneBounds::defaults(config.model_kind);

        for (const auto& [key, value] : j.items()) {
            if (key == "population_size") config.population_size = value.get<int>();
            else if (key == "generations") config.generations = value.get<int>();
            else if (key == "parent_fraction") config.parent_fraction = value.get<double>();
            else if (key == "elite_fraction") config.elite_fraction = value.get<double>();
            else if (key == "mutation_prob") config.mutation_prob = value.get<double>();
            else if (key == "eval_steps") config.eval_steps = value.get<int>();
            else if (key == "trials") config.trials = value.get<int>();
            else if (key == "model_kind") { /* handled above */ }
            else if (key == "gene_bounds") config.bounds = bounds_from_json(value, config.model_kind);
            else if (key == "seed") config.seed = value.get<std::uint64_t>();
            else throw ConfigError(path.string() + ": unknown key '" + key + "'");
        }
        config.validate();
    } catch (const ordered_json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config;
}

void save_config(const std::filesystem::path& path, const EvolutionConfig& config) {
    config.validate();
    ordered_json j;
    j["population_size"] = config.population_size;
    j["generations"] = config.generations;
    j["parent_fraction"] = config.parent_fraction;
    j["elite_fraction"] = config.elite_fraction;
    j["mutation_prob"] = config.mutation_prob;
    j["eval_steps"] = config.eval_steps;
    j["trials"] = config.trials;
    j["model_kind"] = kind_name(config.model_kind);
    j["gene_bounds"] = bounds_to_json(config.bounds);
    j["seed"] = config.seed;
    write_text(path, j.dump(2) + "\n");
}

void write_connectivity(const std::filesystem::path& edges_path,
                        const std::filesystem::path& signs_path,
                        const Connectivity& connectivity) {
    std::string edges = "pre,post\n";
    for (const auto& [pre, post] : connectivity.edge_list())
        edges += std::to_string(pre) + "," + std::to_string(post) + "\n";
    write_text(edges_path, edges);

    std::string signs = "node,sign\n";
    for (std::size_t node = 0; node < connectivity.signs.size(); ++node)
        signs += std::to_string(node) + "," +
                 std::to_string(static_cast<int>(connectivity.signs[node])) + "\n";
    write_text(signs_path, signs);
}

void write_fitness_history(const std::filesystem::path& path, int trial,
                           const std::vector<std::vector<FitnessValue>>& history) {
    std::string out = "trial,generation,individual,objective_f,score\n";
    for (std::size_t g = 0; g < history.size(); ++g)
        for (std::size_t i = 0; i < history[g].size(); ++i)
            out += std::to_string(trial) + "," + std::to_string(g) + "," +
                   std::to_string(i) + "," + format_double(history[g][i].objective_f) +
                   "," + format_double(history[g][i].score) + "\n";
    write_text(path, out);
}

std::vector<FitnessRow> load_fitness_history(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    std::vector<FitnessRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const auto line = trim_line(std::string_view(text).substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;

        if (line_no == 1) {
            if (line != "trial,generation,individual,objective_f,score")
                throw DataError(path.string() + ":1: bad fitness header");
            continue;
        }
        if (line.empty()) continue;

        std::array<std::string_view, 5> fields;
        std::size_t start = 0;
        for (std::size_t f = 0; f < 5; ++f) {
            const auto comma = line.find(',', start);
            if (f < 4 && comma == std::string_view::npos)
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": expected 5 fields");
            fields[f] = line.substr(start, comma == std::string_view::npos
                                               ? std::string_view::npos
                                               : comma - start);
            start = comma + 1;
        }
        FitnessRow row;
        row.trial = static_cast<int>(parse_int_field(fields[0], path, line_no));
        row.generation = static_cast<int>(parse_int_field(fields[1], path, line_no));
        row.individual = static_cast<int>(parse_int_field(fields[2], path, line_no));
        row.objective_f = parse_double_field(fields[3], path, line_no);
        row.score = parse_double_field(fields[4], path, line_no);
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::filesystem::path> write_run(const RunArtifacts& artifacts,
                                             const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    const auto emit = [&](const std::filesystem::path& p) { written.push_back(p); return p; };

    save_config(emit(out_dir / "config.json"), artifacts.config);
    write_fitness_history(emit(out_dir / "fitness.csv"), artifacts.trial,
                          artifacts.fitness_history);
    save_genome(emit(out_dir / "best_genome.json"), artifacts.best_genome);
    write_connectivity(emit(out_dir / "connectivity_edges.csv"),
                       out_dir / "connectivity_signs.csv", artifacts.best_connectivity);
    written.push_back(out_dir / "connectivity_signs.csv");
    write_spike_events(emit(out_dir / "raster.csv"), artifacts.best_raster);
    write_asdr(emit(out_dir / "asdr.csv"), artifacts.best_asdr);
    // marker goes last so an interrupted write never looks finished
    write_text(emit(out_dir / "COMPLETE"), "complete\n");
    return written;
}

}  // namespace evospike
