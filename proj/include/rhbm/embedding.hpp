#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rhbm/generate.hpp"
#include "rhbm/graph.hpp"
#include "rhbm/mixing.hpp"
#include "rhbm/partition.hpp"

namespace rhbm {

// Externally inferred sphere embedding: hidden degrees plus unit vectors in
// D+1 dimensions. The artifact evaluates such embeddings, it never produces
// them.
struct EmbeddingSD {
    std::size_t dimension = 1; // D >= 1
    double beta = 2.0;         // must exceed D
    double mu = 0.0;
    double radius = 0.0;
    std::vector<double> kappa;     // per-node hidden degree, positive
    std::vector<double> positions; // row-major, D+1 coordinates per node

    std::size_t num_nodes() const { return kappa.size(); }
    const double* position(std::size_t node) const {
        return positions.data() + node * (dimension + 1);
    }

    void validate() const;
};

// Sphere radius giving unit node density on S^D.
double default_sphere_radius(std::size_t num_nodes, std::size_t dimension);

// CSV format: `# D=.. beta=.. mu=.. R=..` header, a column header line, then
// `node,kappa,x1,...,x{D+1}` rows. Positions are re-normalized when within
// 1e-6 of unit norm and rejected (naming the line) otherwise. A missing R
// falls back to the unit-density radius.
EmbeddingSD load_embedding(const std::filesystem::path& path);
void save_embedding(const EmbeddingSD& embedding, const std::filesystem::path& path);

// p_ij = 1 / (1 + (x_ij / (mu kappa_i kappa_j)^{1/D})^beta) with
// x_ij = R arccos(<u_i, u_j>), the dot product clamped to [-1, 1].
double sd_edge_probability(const EmbeddingSD& embedding, std::uint32_t i, std::uint32_t j);

// Expected mixing matrix in edge-count convention (diagonal doubled).
MixingMatrix expected_mixing_from_embedding(const EmbeddingSD& embedding,
                                            const BlockPartition& partition);

// <deg_i> = sum_{j != i} p_ij.
std::vector<double> expected_degrees_from_embedding(const EmbeddingSD& embedding);

// Independent Bernoulli samples from the inferred edge probabilities,
// pair-keyed randomness, one derived seed per graph.
std::vector<Graph> sample_graphs_from_embedding(const EmbeddingSD& embedding, std::size_t count,
                                                std::uint64_t seed);

// D=1 view of a circle-model parameter set: positions (cos theta, sin theta).
// Keeps external-layout conversion at the ingestion boundary.
EmbeddingSD embedding_from_s1(const S1Params& params, const std::vector<double>& theta);

} // namespace rhbm
