#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "rhbm/graph.hpp"
#include "rhbm/latent.hpp"
#include "rhbm/metrics.hpp"
#include "rhbm/mixing.hpp"
#include "rhbm/partition.hpp"

namespace rhbm {

// All artifact files are CSV or whitespace text; schemas below match the
// formats documented in the README. Parse errors throw std::runtime_error
// naming the offending line.

// `node,block` with zero-based ids, one row per node.
void save_partition(const BlockPartition& partition, const std::filesystem::path& path);
BlockPartition load_partition(const std::filesystem::path& path);

// `# normalized` or `# edge-counts` comment, then n rows of n reals.
void save_mixing(const MixingMatrix& matrix, const std::filesystem::path& path);
MixingMatrix load_mixing(const std::filesystem::path& path);

// `i j` per line, i < j, no header.
void save_edge_list(const Graph& graph, const std::filesystem::path& path);
Graph load_edge_list(const std::filesystem::path& path, std::uint32_t num_nodes);

// State CSV `node,block,theta,phi` plus a force-matrix side file whose header
// records beta, R and the seed.
void save_latent_state(const LatentState& state, std::uint64_t seed,
                       const std::filesystem::path& state_path,
                       const std::filesystem::path& forces_path);
LatentState load_latent_state(const std::filesystem::path& state_path,
                              const std::filesystem::path& forces_path);

// key=value block, then the residual trace as a CSV section.
void save_calibration_report(const CalibrationReport& report, const std::filesystem::path& path);

// Flat single-row CSV with stable column order; the mixing matrix goes to a
// separate file.
void save_stats(const StatsReport& stats, const std::filesystem::path& stats_path,
                const std::filesystem::path& mixing_path);

void save_metadata(const std::vector<std::pair<std::string, std::string>>& entries,
                   const std::filesystem::path& path);

} // namespace rhbm
