#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evospike/neuron.hpp"
#include "evospike/rng.hpp"

namespace evospike {

// Node positions on a bounded (non-periodic) grid, row-major indexing.
struct GridLayout {
    int rows = 10;
    int cols = 10;

    int node_count() const { return rows * cols; }
    int row_of(int node) const { return node / cols; }
    int col_of(int node) const { return node % cols; }
    int node_at(int row, int col) const { return row * cols + col; }

    double euclidean_distance(int a, int b) const;
    int chebyshev_distance(int a, int b) const;
};

// Directed adjacency plus per-node excitatory/inhibitory signs. Immutable
// after construction; safe to share across threads.
struct Connectivity {
    ModelKind kind = ModelKind::ca;
    GridLayout layout;
    std::vector<std::vector<std::int32_t>> targets;  // presynaptic -> postsynaptic, sorted
    std::vector<std::int8_t> signs;                  // +1 excitatory, -1 inhibitory

    int node_count() const { return layout.node_count(); }
    bool has_edge(int pre, int post) const;
    std::size_t edge_count() const;
    // all edges as (pre, post), ascending
    std::vector<std::pair<std::int32_t, std::int32_t>> edge_list() const;
};

// Moore-style CA connectivity: i->j iff Chebyshev distance <= radius, i != j.
// Symmetric by construction. radius must be in [1, 6].
Connectivity build_ca(const GridLayout& layout, int radius);

// Gaussian distance decay: P(d) = exp(-(d / c_d)^2). c_d must be > 0.
double connection_probability(double distance, double c_d);

// Geometric network: each ordered pair (i, j), i != j, gets an independent
// uniform draw; the edge exists iff draw < connection_probability. Draws are
// consumed in (pre, post) ascending order so builds replay exactly.
Connectivity build_network(const GridLayout& layout, double c_d, RngStream& rng);

// Exactly round(inhib_ratio * node_count) nodes, chosen uniformly without
// replacement, become inhibitory (-1); the rest are excitatory (+1).
std::vector<std::int8_t> assign_signs(const GridLayout& layout, double inhib_ratio,
                                      RngStream& rng);

// The 60 observed nodes of a 10x10 layout: central 8x8 subgrid minus its four
// corners, row-major. Mirrors a standard 60-channel MEA arrangement.
std::vector<std::int32_t> observed_nodes(const GridLayout& layout);

}  // namespace evospike
