#include "rhbm/graph.hpp"

#include <algorithm>

namespace rhbm {

std::vector<std::vector<std::uint32_t>> Graph::adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(num_nodes);
    for (const auto& [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& neighbors : adj) std::sort(neighbors.begin(), neighbors.end());
    return adj;
}

} // namespace rhbm
