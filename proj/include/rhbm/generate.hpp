#pragma once

#include <cstdint>
#include <vector>

#include "rhbm/graph.hpp"
#include "rhbm/latent.hpp"
#include "rhbm/rng.hpp"

namespace rhbm {

// Shortest arc between two angles, in [0, pi].
double arc_distance(double theta_a, double theta_b);

// p_ij = 1 / (1 + (x_ij / (mu~ phi_i phi_j Phi_IJ))^beta), x_ij = R * arc.
// Zero force disconnects the pair regardless of distance.
double edge_probability(std::uint32_t i, std::uint32_t j, const LatentState& state);

// Independent Bernoulli edges over the full pair scan; the draw for (i, j)
// comes from pair_uniform(seed, i, j), so the edge set is a pure function of
// (state, seed).
Graph sample_graph(const LatentState& state, std::uint64_t seed);

// Union of the per-block-pair mono/bipartite subgraphs sharing the one draw
// of latents. Identical probabilities and identical pair-keyed randomness
// make the result bit-equal to sample_graph for the same seed.
Graph sample_graph_blockwise(const LatentState& state, std::uint64_t seed);

// Plain circle-model baseline with hidden degrees kappa.
struct S1Params {
    std::vector<double> kappa;
    double beta = 2.0;
    double mu = 0.0;
    double radius = 0.0;
    static constexpr int dimension = 1;
};

// mu = beta sin(pi/beta) / (2 pi kbar), the choice under which expected
// degrees converge to the hidden degrees.
double s1_default_mu(double beta, double avg_degree);

double s1_edge_probability(const S1Params& params, const std::vector<double>& theta,
                           std::uint32_t i, std::uint32_t j);

Graph sample_s1_graph(const S1Params& params, const std::vector<double>& theta,
                      std::uint64_t seed);

// Pareto hidden degrees rescaled to mean avg_degree; gamma > 2.
std::vector<double> sample_hidden_degrees(std::size_t count, double gamma, double avg_degree,
                                          SplitMix64& rng);

} // namespace rhbm
