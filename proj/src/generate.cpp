#include "rhbm/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rhbm {

double arc_distance(double theta_a, double theta_b) {
    const double d = std::abs(theta_a - theta_b);
    return std::numbers::pi - std::abs(std::numbers::pi - std::fmod(d, 2.0 * std::numbers::pi));
}

namespace {

// Fermi-Dirac form shared by every model variant: 1 / (1 + (x/scale)^beta).
double fermi_dirac(double distance, double scale, double beta) {
    if (!(scale > 0.0)) return 0.0; // zero coupling disconnects the pair
    if (distance <= 0.0) return 1.0;
    const double ratio = std::pow(distance / scale, beta);
    return 1.0 / (1.0 + ratio);
}

} // namespace

double edge_probability(std::uint32_t i, std::uint32_t j, const LatentState& state) {
    if (i == j) throw std::invalid_argument("edge_probability: self-pairs are excluded");
    const double x = state.radius * arc_distance(state.theta[i], state.theta[j]);
    const double scale = state.mu_tilde * state.phi[i] * state.phi[j] *
                         state.forces.at(state.partition.block_of(i), state.partition.block_of(j));
    return fermi_dirac(x, scale, state.beta);
}

Graph sample_graph(const LatentState& state, std::uint64_t seed) {
    const std::uint32_t n = state.partition.num_nodes();
    Graph graph;
    graph.num_nodes = n;
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (pair_uniform(seed, i, j) < edge_probability(i, j, state))
                graph.edges.emplace_back(i, j);
    return graph;
}

Graph sample_graph_blockwise(const LatentState& state, std::uint64_t seed) {
    const auto& part = state.partition;
    Graph graph;
    graph.num_nodes = part.num_nodes();

    // Union over block pairs; pair-keyed draws make each subgraph see exactly
    // the bits the direct scan would have used.
    for (std::uint32_t bi = 0; bi < part.num_blocks(); ++bi) {
        const auto& mi = part.members(bi);
        for (std::uint32_t bj = bi; bj < part.num_blocks(); ++bj) {
            if (bi == bj) {
                for (std::size_t a = 0; a < mi.size(); ++a)
                    for (std::size_t b = a + 1; b < mi.size(); ++b) {
                        const std::uint32_t i = mi[a];
                        const std::uint32_t j = mi[b];
                        if (pair_uniform(seed, i, j) < edge_probability(i, j, state))
                            graph.edges.emplace_back(std::min(i, j), std::max(i, j));
                    }
            } else {
                for (const std::uint32_t i : mi)
                    for (const std::uint32_t j : part.members(bj))
                        if (pair_uniform(seed, i, j) < edge_probability(i, j, state))
                            graph.edges.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    return graph;
}

double s1_default_mu(double beta, double avg_degree) {
    if (!(beta > 1.0)) throw std::invalid_argument("s1: beta must exceed 1");
    if (!(avg_degree > 0.0)) throw std::invalid_argument("s1: average degree must be positive");
    return beta * std::sin(std::numbers::pi / beta) / (2.0 * std::numbers::pi * avg_degree);
}

double s1_edge_probability(const S1Params& params, const std::vector<double>& theta,
                           std::uint32_t i, std::uint32_t j) {
    if (i == j) throw std::invalid_argument("s1_edge_probability: self-pairs are excluded");
    const double x = params.radius * arc_distance(theta[i], theta[j]);
    return fermi_dirac(x, params.mu * params.kappa[i] * params.kappa[j], params.beta);
}

Graph sample_s1_graph(const S1Params& params, const std::vector<double>& theta,
                      std::uint64_t seed) {
    if (params.kappa.size() != theta.size())
        throw std::invalid_argument("sample_s1_graph: kappa and theta sizes differ");
    const std::uint32_t n = static_cast<std::uint32_t>(theta.size());
    Graph graph;
    graph.num_nodes = n;
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (pair_uniform(seed, i, j) < s1_edge_probability(params, theta, i, j))
                graph.edges.emplace_back(i, j);
    return graph;
}

std::vector<double> sample_hidden_degrees(std::size_t count, double gamma, double avg_degree,
                                          SplitMix64& rng) {
    if (!(gamma > 2.0)) throw std::invalid_argument("hidden degrees: gamma must exceed 2");
    auto kappa = sample_pareto(count, gamma, rng);
    // Pareto(min 1, exponent gamma) has mean (gamma-1)/(gamma-2).
    const double scale = avg_degree * (gamma - 2.0) / (gamma - 1.0);
    for (double& k : kappa) k *= scale;
    return kappa;
}

} // namespace rhbm
