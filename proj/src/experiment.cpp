#include "rhbm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rhbm/generate.hpp"
#include "rhbm/io.hpp"
#include "rhbm/rng.hpp"

namespace rhbm {

namespace {

// Stream tags deriving the per-purpose seeds from the master seed.
enum : std::uint64_t { kFitnessStream = 1, kAngleStream = 2, kEdgeStream = 3 };

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double m = values[mid];
    if (values.size() % 2 == 0) {
        const double lower = *std::max_element(values.begin(), values.begin() + mid);
        m = 0.5 * (m + lower);
    }
    return m;
}

} // namespace

void ExperimentConfig::validate() const {
    if (nodes == 0) throw std::invalid_argument("config: need at least one node");
    if (communities == 0 || communities > nodes)
        throw std::invalid_argument("config: communities must lie in [1, nodes]");
    if (!(avg_degree > 0.0)) throw std::invalid_argument("config: average degree must be positive");
    if (!(gamma > 2.0)) throw std::invalid_argument("config: gamma must exceed 2");
    if (!(beta > 1.0)) throw std::invalid_argument("config: beta must exceed 1");
    if (rho < -1.0 || rho > 1.0) throw std::invalid_argument("config: rho must lie in [-1, 1]");
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("config: q must lie in (0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
    if (samples == 0) throw std::invalid_argument("config: samples must be >= 1");
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream out;
    out.precision(17);
    out << "nodes=" << nodes << " avg_degree=" << avg_degree << " gamma=" << gamma
        << " beta=" << beta << " communities=" << communities << " rho=" << rho << " q=" << q
        << " seed=" << seed << " tol=" << tol << " max_iter=" << max_iter;
    return out.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
    // FNV-1a over the canonical key=value string.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : canonical_string()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

CellInputs draw_cell_inputs(const ExperimentConfig& config) {
    config.validate();
    CellInputs inputs;
    inputs.partition = make_partition(config.nodes, config.communities);
    const auto normalized = build_normalized_mixing({config.communities, config.rho, config.q});
    inputs.targets = scale_mixing_to_edges(normalized, config.nodes, config.avg_degree);
    SplitMix64 fitness_rng(derive_stream(config.seed, kFitnessStream));
    SplitMix64 angle_rng(derive_stream(config.seed, kAngleStream));
    inputs.shares = sample_fitness(inputs.partition, config.gamma, fitness_rng);
    inputs.theta = sample_angles(config.nodes, angle_rng);
    return inputs;
}

TargetReport probe_targets(const ExperimentConfig& config) {
    const auto inputs = draw_cell_inputs(config);
    return validate_targets(inputs.targets, inputs.partition, inputs.shares);
}

CellResult run_cell(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    CellResult cell;
    cell.config = config;

    auto inputs = draw_cell_inputs(config);
    const auto& partition = inputs.partition;
    cell.targets = inputs.targets;
    cell.shares = inputs.shares;

    const auto feasibility = validate_targets(cell.targets, partition, cell.shares);
    if (!feasibility.hard_ok())
        throw std::invalid_argument("infeasible targets: " + feasibility.to_string());
    for (const auto& v : feasibility.violations)
        if (!v.hard()) ++cell.target_warnings;

    CalibrateOptions options;
    options.tol = config.tol;
    options.max_iter = config.max_iter;
    auto calibrated = calibrate(std::move(inputs.theta), cell.shares, cell.targets, config.beta,
                                default_radius(config.nodes), partition, options);
    cell.state = std::move(calibrated.state);
    cell.calibration = std::move(calibrated.report);

    cell.graph = sample_graph(cell.state, derive_stream(config.seed, kEdgeStream));
    cell.stats = compute_stats(cell.graph, partition);
    cell.mixing_error = mixing_relative_error(cell.stats.mixing, cell.targets);

    std::vector<double> deviations(config.nodes);
    for (std::uint32_t i = 0; i < config.nodes; ++i)
        deviations[i] = std::abs(cell.state.phi[i] - cell.shares[i]) / cell.shares[i];
    cell.median_phi_deviation = median(std::move(deviations));

    cell.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cell;
}

GenerateResult run_generate(const ExperimentConfig& config) {
    CellResult cell = run_cell(config);
    const auto& dir = config.out;
    std::filesystem::create_directories(dir);

    GenerateResult result;
    result.converged = cell.calibration.converged;
    result.isolated_nodes = cell.stats.isolated_nodes;
    result.mixing_error = cell.mixing_error;

    auto add = [&result](std::filesystem::path p) { result.files.push_back(std::move(p)); };

    save_mixing(cell.targets, dir / "mixing_target.csv");
    add(dir / "mixing_target.csv");
    save_partition(cell.state.partition, dir / "partition.csv");
    add(dir / "partition.csv");
    save_latent_state(cell.state, config.seed, dir / "latent_state.csv",
                      dir / "latent_forces.csv");
    add(dir / "latent_state.csv");
    add(dir / "latent_forces.csv");
    save_calibration_report(cell.calibration, dir / "calibration_report.txt");
    add(dir / "calibration_report.txt");
    save_edge_list(cell.graph, dir / "edges.txt");
    add(dir / "edges.txt");
    save_metadata(
        {
            {"N", std::to_string(config.nodes)},
            {"seed", std::to_string(config.seed)},
            {"model", "rhbm"},
            {"config_hash", std::to_string(config.config_hash())},
            {"isolated_nodes", std::to_string(cell.stats.isolated_nodes)},
        },
        dir / "edges.meta");
    add(dir / "edges.meta");
    save_stats(cell.stats, dir / "stats.csv", dir / "stats_mixing.csv");
    add(dir / "stats.csv");
    add(dir / "stats_mixing.csv");

    return result;
}

std::vector<double> standard_grid_values(const std::string& parameter) {
    if (parameter == "nodes") return {1000.0, 3000.0, 5000.0};
    if (parameter == "avg-degree") return {5.0, 10.0, 20.0};
    if (parameter == "communities") return {2.0, 10.0, 100.0};
    if (parameter == "rho") return {-0.5, 0.0, 0.5};
    if (parameter == "q") return {0.5, 0.75, 1.0};
    if (parameter == "beta") return {2.0, 5.0, 10.0};
    return {};
}

namespace {

ExperimentConfig apply_parameter(ExperimentConfig config, const std::string& parameter,
                                 double value) {
    if (parameter == "nodes") {
        config.nodes = static_cast<std::uint32_t>(value);
    } else if (parameter == "avg-degree") {
        config.avg_degree = value;
    } else if (parameter == "communities") {
        config.communities = static_cast<std::uint32_t>(value);
    } else if (parameter == "rho") {
        config.rho = value;
    } else if (parameter == "q") {
        config.q = value;
    } else if (parameter == "beta") {
        config.beta = value;
    } else {
        throw std::invalid_argument("sweep: unknown parameter `" + parameter + "`");
    }
    return config;
}

SweepRow run_sweep_cell(const std::string& parameter, double value, std::uint64_t seed,
                        const ExperimentConfig& config) {
    SweepRow row;
    row.parameter = parameter;
    row.value = value;
    row.seed = seed;
    row.config = config;
    try {
        CellResult cell = run_cell(config);
        row.converged = cell.calibration.converged;
        row.calibration_iterations = cell.calibration.iterations;
        row.calibration_residual = cell.calibration.max_degree_residual;
        row.mixing_error = cell.mixing_error;
        row.mean_degree = cell.stats.mean_degree;
        row.mean_degree_error =
            std::abs(cell.stats.mean_degree - config.avg_degree) / config.avg_degree;
        row.global_clustering = cell.stats.global_clustering;
        row.avg_local_clustering = cell.stats.avg_local_clustering;
        row.median_phi_deviation = cell.median_phi_deviation;
        row.wall_seconds = cell.wall_seconds;
    } catch (const std::exception&) {
        row.converged = false; // infeasible cell; recorded, sweep continues
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.parameter.empty()) throw std::invalid_argument("sweep: parameter name required");
    const std::vector<double> values =
        spec.values ? *spec.values : standard_grid_values(spec.parameter);

    struct Task {
        double value;
        std::uint64_t seed;
        ExperimentConfig config;
    };
    std::vector<Task> tasks;
    for (double value : values) {
        for (std::size_t s = 0; s < spec.seeds_per_cell; ++s) {
            ExperimentConfig config = apply_parameter(spec.base, spec.parameter, value);
            config.seed = spec.base.seed + s;
            tasks.push_back({value, config.seed, std::move(config)});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    if (spec.parallel && tasks.size() > 1) {
        // Cells are independent; per-cell determinism is seed-keyed, so the
        // schedule cannot change any row.
        std::atomic<std::size_t> next{0};
        const std::size_t workers =
            std::min<std::size_t>(std::thread::hardware_concurrency(), tasks.size());
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::max<std::size_t>(workers, 1); ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < tasks.size(); k = next.fetch_add(1))
                    rows[k] = run_sweep_cell(spec.parameter, tasks[k].value, tasks[k].seed,
                                             tasks[k].config);
            });
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t k = 0; k < tasks.size(); ++k)
            rows[k] =
                run_sweep_cell(spec.parameter, tasks[k].value, tasks[k].seed, tasks[k].config);
    }
    return rows;
}

std::string sweep_csv_header() {
    return "parameter,value,seed,nodes,avg_degree,gamma,beta,communities,rho,q,"
           "converged,calibration_iterations,calibration_residual,mixing_rel_error,"
           "mean_degree,mean_degree_rel_error,global_clustering,avg_local_clustering,"
           "median_phi_deviation,wall_seconds";
}

std::string sweep_csv_row(const SweepRow& row) {
    std::ostringstream out;
    out.precision(12);
    const auto& c = row.config;
    out << row.parameter << ',' << row.value << ',' << row.seed << ',' << c.nodes << ','
        << c.avg_degree << ',' << c.gamma << ',' << c.beta << ',' << c.communities << ',' << c.rho
        << ',' << c.q << ',' << (row.converged ? "true" : "false") << ','
        << row.calibration_iterations << ',' << row.calibration_residual << ','
        << row.mixing_error << ',' << row.mean_degree << ',' << row.mean_degree_error << ','
        << row.global_clustering << ',' << row.avg_local_clustering << ','
        << row.median_phi_deviation << ',' << row.wall_seconds;
    return out.str();
}

EvalReport evaluate_embedding(const Graph& graph, const BlockPartition& partition,
                              const EmbeddingSD& embedding, std::size_t samples,
                              std::uint64_t seed, const std::optional<MixingMatrix>& target) {
    if (embedding.num_nodes() != graph.num_nodes)
        throw std::invalid_argument("evaluate_embedding: node sets disagree (graph has " +
                                    std::to_string(graph.num_nodes) + " nodes, embedding " +
                                    std::to_string(embedding.num_nodes()) + ")");
    if (partition.num_nodes() != graph.num_nodes)
        throw std::invalid_argument("evaluate_embedding: partition does not cover the graph");
    if (samples < 1) throw std::invalid_argument("evaluate_embedding: samples must be >= 1");

    EvalReport report;
    report.dimension = embedding.dimension;

    const auto expected = expected_mixing_from_embedding(embedding, partition);
    const auto reference = target ? *target : empirical_mixing(graph, partition);
    report.mixing_error = mixing_relative_error(expected, reference);

    report.expected_degrees = expected_degrees_from_embedding(embedding);
    report.observed_degrees = degree_sequence(graph);
    double mean_expected = 0.0;
    double mean_observed = 0.0;
    for (std::uint32_t i = 0; i < graph.num_nodes; ++i) {
        mean_expected += report.expected_degrees[i];
        mean_observed += report.observed_degrees[i];
    }
    mean_expected /= graph.num_nodes;
    mean_observed /= graph.num_nodes;
    report.mean_degree_error =
        mean_observed > 0.0 ? std::abs(mean_expected - mean_observed) / mean_observed : 0.0;

    const double global_in = global_clustering(graph);
    const double local_in = average_local_clustering(graph);
    std::vector<double> global_errors, local_errors;
    for (const Graph& sampled : sample_graphs_from_embedding(embedding, samples, seed)) {
        global_errors.push_back(clustering_relative_error(global_clustering(sampled), global_in));
        local_errors.push_back(
            clustering_relative_error(average_local_clustering(sampled), local_in));
    }
    auto mean_std = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
        return std::pair<double, double>(mean, std::sqrt(var));
    };
    std::tie(report.global_clustering_error_mean, report.global_clustering_error_std) =
        mean_std(global_errors);
    std::tie(report.local_clustering_error_mean, report.local_clustering_error_std) =
        mean_std(local_errors);
    return report;
}

} // namespace rhbm
