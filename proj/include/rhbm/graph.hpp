#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace rhbm {

// Undirected simple graph as a sorted edge set over zero-based node ids.
// Every stored pair has i < j; generation is write-heavy, so adjacency is
// built on demand by the metrics.
struct Graph {
    std::uint32_t num_nodes = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    std::size_t num_edges() const { return edges.size(); }

    std::vector<std::vector<std::uint32_t>> adjacency() const;
};

} // namespace rhbm
