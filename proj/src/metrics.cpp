#include "rhbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rhbm {

MixingMatrix empirical_mixing(const Graph& graph, const BlockPartition& partition) {
    if (partition.num_nodes() != graph.num_nodes)
        throw std::invalid_argument("empirical_mixing: partition does not cover the graph");
    MixingMatrix counts(partition.num_blocks(), MixingScale::edge_counts);
    for (const auto& [i, j] : graph.edges) {
        const std::size_t bi = partition.block_of(i);
        const std::size_t bj = partition.block_of(j);
        if (bi == bj) {
            counts.at(bi, bi) += 2.0; // intra edges counted twice on the diagonal
        } else {
            counts.at(bi, bj) += 1.0;
            counts.at(bj, bi) += 1.0;
        }
    }
    return counts;
}

std::vector<std::uint32_t> degree_sequence(const Graph& graph) {
    std::vector<std::uint32_t> deg(graph.num_nodes, 0);
    for (const auto& [i, j] : graph.edges) {
        ++deg[i];
        ++deg[j];
    }
    return deg;
}

std::vector<std::size_t> triangles_per_node(const Graph& graph) {
    const auto adj = graph.adjacency();
    std::vector<std::size_t> tri(graph.num_nodes, 0);
    // Sorted-adjacency intersection per edge. Each triangle {i,j,k} credits
    // one corner per edge, so tri[v] ends up as the triangle count at v.
    for (const auto& [i, j] : graph.edges) {
        const auto& ni = adj[i];
        const auto& nj = adj[j];
        auto it = ni.begin();
        auto jt = nj.begin();
        while (it != ni.end() && jt != nj.end()) {
            if (*it < *jt) {
                ++it;
            } else if (*jt < *it) {
                ++jt;
            } else {
                ++tri[*it];
                ++it;
                ++jt;
            }
        }
    }
    return tri;
}

double global_clustering(const Graph& graph) {
    const auto deg = degree_sequence(graph);
    const auto tri = triangles_per_node(graph);

    std::size_t corner_count = 0; // sum over nodes = 3 * triangle count
    for (std::size_t t : tri) corner_count += t;

    double paths2 = 0.0;
    for (std::uint32_t d : deg) paths2 += 0.5 * static_cast<double>(d) * (d - 1.0);

    if (paths2 <= 0.0) return 0.0;
    // 3 * triangles / paths of length 2.
    return static_cast<double>(corner_count) / paths2;
}

double average_local_clustering(const Graph& graph, bool exclude_low_degree) {
    const auto deg = degree_sequence(graph);
    const auto tri = triangles_per_node(graph);

    double sum = 0.0;
    std::size_t counted = 0;
    for (std::uint32_t v = 0; v < graph.num_nodes; ++v) {
        if (deg[v] < 2) {
            if (!exclude_low_degree) ++counted; // contributes 0
            continue;
        }
        sum += 2.0 * static_cast<double>(tri[v]) /
               (static_cast<double>(deg[v]) * (deg[v] - 1.0));
        ++counted;
    }
    if (counted == 0) return 0.0;
    return sum / static_cast<double>(counted);
}

double mixing_relative_error(const MixingMatrix& observed, const MixingMatrix& target) {
    if (observed.n != target.n)
        throw std::invalid_argument("mixing_relative_error: shape mismatch");
    if (observed.scale != target.scale)
        throw std::invalid_argument("mixing_relative_error: convention mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < observed.data.size(); ++k) {
        num += std::abs(observed.data[k] - target.data[k]);
        den += std::abs(target.data[k]);
    }
    if (den == 0.0) throw std::invalid_argument("mixing_relative_error: zero target norm");
    return num / den;
}

double clustering_relative_error(double observed, double target) {
    if (!(target > 0.0))
        throw std::invalid_argument("clustering_relative_error: reference must be positive");
    return std::abs(observed - target) / target;
}

StatsReport compute_stats(const Graph& graph, const BlockPartition& partition) {
    StatsReport report;
    report.nodes = graph.num_nodes;
    report.edges = graph.num_edges();
    report.degrees = degree_sequence(graph);
    report.mean_degree =
        graph.num_nodes == 0 ? 0.0
                             : 2.0 * static_cast<double>(report.edges) / graph.num_nodes;
    report.global_clustering = global_clustering(graph);
    report.avg_local_clustering = average_local_clustering(graph);
    report.isolated_nodes = 0;
    for (std::uint32_t d : report.degrees)
        if (d == 0) ++report.isolated_nodes;
    report.mixing = empirical_mixing(graph, partition);
    return report;
}

} // namespace rhbm
