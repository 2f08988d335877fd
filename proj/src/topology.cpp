#include "evospike/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace evospike {

double GridLayout::euclidean_distance(int a, int b) const {
    const double dr = row_of(a) - row_of(b);
    const double dc = col_of(a) - col_of(b);
    return std::sqrt(dr * dr + dc * dc);
}

int GridLayout::chebyshev_distance(int a, int b) const {
    return std::max(std::abs(row_of(a) - row_of(b)), std::abs(col_of(a) - col_of(b)));
}

bool Connectivity::has_edge(int pre, int post) const {
    const auto& out = targets[static_cast<std::size_t>(pre)];
    return std::binary_search(out.begin(), out.end(), static_cast<std::int32_t>(post));
}

std::size_t Connectivity::edge_count() const {
    std::size_t n = 0;
    for (const auto& out : targets) n += out.size();
    return n;
}

std::vector<std::pair<std::int32_t, std::int32_t>> Connectivity::edge_list() const {
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    edges.reserve(edge_count());
    for (std::int32_t pre = 0; pre < static_cast<std::int32_t>(targets.size()); ++pre)
        for (std::int32_t post : targets[static_cast<std::size_t>(pre)])
            edges.emplace_back(pre, post);
    return edges;
}

namespace {

void check_layout(const GridLayout& layout) {
    if (layout.rows < 1 || layout.cols < 1)
        throw std::invalid_argument("grid layout must have positive dimensions");
}

}  // namespace

Connectivity build_ca(const GridLayout& layout, int radius) {
    check_layout(layout);
    if (radius < 1 || radius > 6)
        throw std::invalid_argument("CA radius must be in [1, 6], got " +
                                    std::to_string(radius));

    Connectivity conn;
    conn.kind = ModelKind::ca;
    conn.layout = layout;
    const int n = layout.node_count();
    conn.targets.resize(static_cast<std::size_t>(n));
    conn.signs.assign(static_cast<std::size_t>(n), 1);

    for (int i = 0; i < n; ++i) {
        const int r = layout.row_of(i);
        const int c = layout.col_of(i);
        auto& out = conn.targets[static_cast<std::size_t>(i)];
        for (int dr = -radius; dr <= radius; ++dr) {
            const int nr = r + dr;
            if (nr < 0 || nr >= layout.rows) continue;
            for (int dc = -radius; dc <= radius; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int nc = c + dc;
                if (nc < 0 || nc >= layout.cols) continue;
                out.push_back(static_cast<std::int32_t>(layout.node_at(nr, nc)));
            }
        }
        std::sort(out.begin(), out.end());
    }
    return conn;
}

double connection_probability(double distance, double c_d) {
    if (!(c_d > 0.0))
        throw std::invalid_argument("density constant c_d must be positive");
    if (distance < 0.0)
        throw std::invalid_argument("distance must be non-negative");
    const double ratio = distance / c_d;
    return std::exp(-ratio * ratio);
}

Connectivity build_network(const GridLayout& layout, double c_d, RngStream& rng) {
    check_layout(layout);
    if (!(c_d > 0.0))
        throw std::invalid_argument("density constant c_d must be positive");

    Connectivity conn;
    conn.kind = ModelKind::network;
    conn.layout = layout;
    const int n = layout.node_count();
    conn.targets.resize(static_cast<std::size_t>(n));
    conn.signs.assign(static_cast<std::size_t>(n), 1);

    // Squared distances on the unit lattice are small integers; cache the
    // probability per distinct value instead of calling exp per pair.
    const int max_d2 = (layout.rows - 1) * (layout.rows - 1) +
                       (layout.cols - 1) * (layout.cols - 1);
    std::vector<double> prob_by_d2(static_cast<std::size_t>(max_d2) + 1, -1.0);

    for (int i = 0; i < n; ++i) {
        auto& out = conn.targets[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int dr = layout.row_of(i) - layout.row_of(j);
            const int dc = layout.col_of(i) - layout.col_of(j);
            const int d2 = dr * dr + dc * dc;
            double& p = prob_by_d2[static_cast<std::size_t>(d2)];
            if (p < 0.0) p = connection_probability(std::sqrt(static_cast<double>(d2)), c_d);
            if (rng.next_unit() < p) out.push_back(static_cast<std::int32_t>(j));
        }
    }
    return conn;
}

std::vector<std::int8_t> assign_signs(const GridLayout& layout, double inhib_ratio,
                                      RngStream& rng) {
    check_layout(layout);
    if (inhib_ratio < 0.0 || inhib_ratio > 1.0)
        throw std::invalid_argument("inhibitory ratio must be in [0, 1]");

    const int n = layout.node_count();
    const auto k = static_cast<std::size_t>(std::llround(inhib_ratio * n));

    std::vector<std::int32_t> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    // partial Fisher-Yates: the first k entries are a uniform sample
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(
                                      rng.next_below(static_cast<std::uint64_t>(n) - i));
        std::swap(order[i], order[j]);
    }

    std::vector<std::int8_t> signs(static_cast<std::size_t>(n), 1);
    for (std::size_t i = 0; i < k; ++i)
        signs[static_cast<std::size_t>(order[i])] = -1;
    return signs;
}

std::vector<std::int32_t> observed_nodes(const GridLayout& layout) {
    if (layout.rows != 10 || layout.cols != 10)
        throw std::invalid_argument("observed nodes are defined for the 10x10 layout only");

    std::vector<std::int32_t> nodes;
    nodes.reserve(60);
    for (int r = 1; r <= 8; ++r) {
        for (int c = 1; c <= 8; ++c) {
            const bool corner = (r == 1 || r == 8) && (c == 1 || c == 8);
            if (corner) continue;
            nodes.push_back(static_cast<std::int32_t>(layout.node_at(r, c)));
        }
    }
    return nodes;
}

}  // namespace evospike
