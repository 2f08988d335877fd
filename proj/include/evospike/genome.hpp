#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "evospike/neuron.hpp"
#include "evospike/rng.hpp"

namespace evospike {

inline constexpr std::size_t kGeneCount = 7;

// Fixed gene order used everywhere, including serialized genomes.
enum GeneIndex : std::size_t {
    kGeneLeak = 0,
    kGeneIntegration = 1,
    kGeneRefractory = 2,
    kGeneThreshold = 3,
    kGeneSpontaneous = 4,
    kGeneInhibitory = 5,
    kGeneDensity = 6,
};

const char* gene_name(std::size_t index);

// Normalized real-valued genome; every gene lies in [0, 1].
struct Genome {
    std::array<double, kGeneCount> genes{};
};

// Per-gene decode ranges. Density bounds are fixed by the model kind:
// integer radius 1..6 for the CA, continuous 0.1..4.1 for the network.
struct GeneBounds {
    struct Range {
        double lower = 0.0;
        double upper = 1.0;
    };
    std::array<Range, kGeneCount> range{};
    ModelKind kind = ModelKind::ca;

    static GeneBounds defaults(ModelKind kind);
};

void validate(const Genome& genome);
void validate(const GeneBounds& bounds);

// Affine decode gene -> lower + gene * (upper - lower). The refractory period
// rounds to the nearest integer step; the CA density floors into {1..6} with
// gene = 1 mapping to 6.
ModelParams decode(const Genome& genome, const GeneBounds& bounds);

// Inverse of decode up to the rounding of integer-valued genes; results are
// clamped into [0, 1].
Genome encode(const ModelParams& params, const GeneBounds& bounds);

// 7 independent uniform draws in [0, 1).
Genome random_genome(RngStream& rng);

}  // namespace evospike
