#pragma once

#include <cstdint>
#include <vector>

#include "rhbm/graph.hpp"
#include "rhbm/mixing.hpp"
#include "rhbm/partition.hpp"

namespace rhbm {

// Realized mixing matrix in edge-count convention: L_IJ counts edges with one
// endpoint in each block, L_II twice the intra-block edge count.
MixingMatrix empirical_mixing(const Graph& graph, const BlockPartition& partition);

std::vector<std::uint32_t> degree_sequence(const Graph& graph);

// Transitivity: 3 * triangles / paths of length 2. Zero when no such paths.
double global_clustering(const Graph& graph);

// Mean of c_i = 2 t_i / (d_i (d_i - 1)). Nodes with degree < 2 contribute 0
// and stay in the mean by default; exclude_low_degree drops them instead.
double average_local_clustering(const Graph& graph, bool exclude_low_degree = false);

// Per-node triangle counts via sorted-adjacency intersection.
std::vector<std::size_t> triangles_per_node(const Graph& graph);

// Entrywise L1 relative error over all n^2 entries.
double mixing_relative_error(const MixingMatrix& observed, const MixingMatrix& target);

// |C - C_in| / C_in.
double clustering_relative_error(double observed, double target);

struct StatsReport {
    std::uint32_t nodes = 0;
    std::size_t edges = 0;
    double mean_degree = 0.0;
    double global_clustering = 0.0;
    double avg_local_clustering = 0.0;
    std::uint32_t isolated_nodes = 0;
    MixingMatrix mixing;
    std::vector<std::uint32_t> degrees;
};

StatsReport compute_stats(const Graph& graph, const BlockPartition& partition);

} // namespace rhbm
