#include "evospike/genome.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace evospike {

namespace {

constexpr const char* kGeneNames[kGeneCount] = {
    "leak_c", "integ_c", "refractory_steps", "threshold",
    "spont_prob", "inhib_ratio", "density",
};

double affine(double gene, GeneBounds::Range r) {
    return r.lower + gene * (r.upper - r.lower);
}

}  // namespace

const char* gene_name(std::size_t index) {
    if (index >= kGeneCount) throw std::out_of_range("gene index out of range");
    return kGeneNames[index];
}

GeneBounds GeneBounds::defaults(ModelKind kind) {
    GeneBounds b;
    b.kind = kind;
    b.range[kGeneLeak] = {0.0, 1.0};
    b.range[kGeneIntegration] = {0.0, 1.0};
    b.range[kGeneRefractory] = {0.0, 10.0};
    b.range[kGeneThreshold] = {0.1, 2.0};
    b.range[kGeneSpontaneous] = {0.0, 0.1};
    b.range[kGeneInhibitory] = {0.0, 0.5};
    b.range[kGeneDensity] = kind == ModelKind::ca ? Range{1.0, 6.0} : Range{0.1, 4.1};
    return b;
}

void validate(const Genome& genome) {
    for (std::size_t i = 0; i < kGeneCount; ++i) {
        const double g = genome.genes[i];
        if (!(g >= 0.0 && g <= 1.0))
            throw std::invalid_argument(std::string("gene '") + kGeneNames[i] +
                                        "' out of [0, 1]");
    }
}

void validate(const GeneBounds& bounds) {
    for (std::size_t i = 0; i < kGeneCount; ++i) {
        const auto [lo, hi] = bounds.range[i];
        if (!(lo < hi))
            throw std::invalid_argument(std::string("bounds for gene '") + kGeneNames[i] +
                                        "' must satisfy lower < upper");
    }
    const auto density = bounds.range[kGeneDensity];
    const auto expected = bounds.kind == ModelKind::ca
                              ? GeneBounds::Range{1.0, 6.0}
                              : GeneBounds::Range{0.1, 4.1};
    if (density.lower != expected.lower || density.upper != expected.upper)
        throw std::invalid_argument("density bounds are fixed by the model kind");
}

ModelParams decode(const Genome& genome, const GeneBounds& bounds) {
    validate(genome);
    validate(bounds);

    ModelParams p;
    p.kind = bounds.kind;
    p.leak_c = affine(genome.genes[kGeneLeak], bounds.range[kGeneLeak]);
    p.integ_c = affine(genome.genes[kGeneIntegration], bounds.range[kGeneIntegration]);
    p.refractory_steps = static_cast<int>(
        std::llround(affine(genome.genes[kGeneRefractory], bounds.range[kGeneRefractory])));
    p.threshold = affine(genome.genes[kGeneThreshold], bounds.range[kGeneThreshold]);
    p.spont_prob = affine(genome.genes[kGeneSpontaneous], bounds.range[kGeneSpontaneous]);
    p.inhib_ratio = affine(genome.genes[kGeneInhibitory], bounds.range[kGeneInhibitory]);

    const double raw_density = affine(genome.genes[kGeneDensity], bounds.range[kGeneDensity]);
    if (bounds.kind == ModelKind::ca) {
        // floor into {1..6}; the gene value 1 lands exactly on 6, and the
        // epsilon keeps integer-valued densities stable under encode/decode
        p.density = std::min(std::floor(raw_density + 1e-9),
                             bounds.range[kGeneDensity].upper);
    } else {
        p.density = raw_density;
    }
    return p;
}

Genome encode(const ModelParams& params, const GeneBounds& bounds) {
    validate(bounds);
    const double values[kGeneCount] = {
        params.leak_c,
        params.integ_c,
        static_cast<double>(params.refractory_steps),
        params.threshold,
        params.spont_prob,
        params.inhib_ratio,
        params.density,
    };
    Genome g;
    for (std::size_t i = 0; i < kGeneCount; ++i) {
        const auto [lo, hi] = bounds.range[i];
        g.genes[i] = std::clamp((values[i] - lo) / (hi - lo), 0.0, 1.0);
    }
    return g;
}

Genome random_genome(RngStream& rng) {
    Genome g;
    for (auto& gene : g.genes) gene = rng.next_unit();
    return g;
}

}  // namespace evospike
