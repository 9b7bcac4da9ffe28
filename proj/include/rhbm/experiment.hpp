#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rhbm/embedding.hpp"
#include "rhbm/latent.hpp"
#include "rhbm/metrics.hpp"

namespace rhbm {

// One experiment cell. Defaults are the base configuration every sweep varies
// around: N=3000, kbar=10, gamma=2.5, n=10, rho=0.5, q=1, beta=2.
struct ExperimentConfig {
    std::uint32_t nodes = 3000;
    double avg_degree = 10.0;
    double gamma = 2.5;
    double beta = 2.0;
    std::uint32_t communities = 10;
    double rho = 0.5;
    double q = 1.0;
    std::uint64_t seed = 1;
    double tol = 1e-2;
    std::size_t max_iter = 1000;
    std::size_t samples = 10;
    std::filesystem::path out = ".";

    void validate() const;
    std::string canonical_string() const;
    std::uint64_t config_hash() const;
};

// Everything one pipeline run produces in memory: latents calibrated against
// the scaled rho/q targets, one sampled graph, and its statistics.
struct CellResult {
    ExperimentConfig config;
    MixingMatrix targets; // edge-count scale
    std::vector<double> shares;
    LatentState state;
    CalibrationReport calibration;
    Graph graph;
    StatsReport stats;
    double mixing_error = 0.0;     // empirical vs target
    double median_phi_deviation = 0.0; // median_i |phi_i - f_i| / f_i
    double wall_seconds = 0.0;
    std::size_t target_warnings = 0; // soft (blockwise-only) feasibility notes
};

// Deterministic inputs of one pipeline run: partition, scaled targets and
// the latent draws for the config's seed.
struct CellInputs {
    BlockPartition partition;
    MixingMatrix targets;
    std::vector<double> shares;
    std::vector<double> theta;
};

CellInputs draw_cell_inputs(const ExperimentConfig& config);

// Feasibility of the config's targets without running the calibration.
TargetReport probe_targets(const ExperimentConfig& config);

// Draws latents, calibrates, samples one graph and measures it. Throws on
// hard-infeasible targets (the validation report text is in the exception).
CellResult run_cell(const ExperimentConfig& config);

struct GenerateResult {
    bool converged = false;
    std::uint32_t isolated_nodes = 0;
    double mixing_error = 0.0;
    std::vector<std::filesystem::path> files;
};

// Full `generate` command: run_cell plus persistence of mixing target,
// partition, latent state, calibration report, edge list and stats.
GenerateResult run_generate(const ExperimentConfig& config);

struct SweepSpec {
    std::string parameter; // nodes | avg-degree | communities | rho | q | beta
    // Unset: the standard grid for the parameter. An engaged empty list
    // yields a header-only table.
    std::optional<std::vector<double>> values;
    std::size_t seeds_per_cell = 10;
    ExperimentConfig base;
    bool parallel = false;
};

// Standard sweep grid for one parameter name (empty for unknown names).
std::vector<double> standard_grid_values(const std::string& parameter);

struct SweepRow {
    std::string parameter;
    double value = 0.0;
    std::uint64_t seed = 0;
    ExperimentConfig config;
    bool converged = false;
    std::size_t calibration_iterations = 0;
    double calibration_residual = 0.0;
    double mixing_error = 0.0;
    double mean_degree = 0.0;
    double mean_degree_error = 0.0;
    double global_clustering = 0.0;
    double avg_local_clustering = 0.0;
    double median_phi_deviation = 0.0;
    double wall_seconds = 0.0;
};

// One row per (value, seed); cells that fail to calibrate are recorded with
// converged=false and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

struct EvalReport {
    std::size_t dimension = 0;
    double mixing_error = 0.0;
    double mean_degree_error = 0.0;
    double global_clustering_error_mean = 0.0;
    double global_clustering_error_std = 0.0;
    double local_clustering_error_mean = 0.0;
    double local_clustering_error_std = 0.0;
    std::vector<double> expected_degrees;
    std::vector<std::uint32_t> observed_degrees;
};

// Embedding evaluation pipeline: expected mixing vs the input graph's
// empirical mixing (or an explicit target), expected vs observed degrees, and
// clustering errors over `samples` graphs sampled from the embedding.
EvalReport evaluate_embedding(const Graph& graph, const BlockPartition& partition,
                              const EmbeddingSD& embedding, std::size_t samples,
                              std::uint64_t seed,
                              const std::optional<MixingMatrix>& target = std::nullopt);

} // namespace rhbm
