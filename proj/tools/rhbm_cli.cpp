// Command-line harness around the RHBM toolkit: generate calibrated graphs,
// run one-parameter sweeps, compute graph statistics and evaluate external
// sphere embeddings. Exit codes: 0 success, 1 usage or IO error,
// 2 calibration non-convergence / infeasible targets.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rhbm/experiment.hpp"
#include "rhbm/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

// Flat key=value file, keys named like the long flags without the dashes.
// Values from the file fill only options that were not given on the command
// line, so explicit flags always win.
void apply_config_file(const std::filesystem::path& path, CLI::App& cmd,
                       rhbm::ExperimentConfig& config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        const CLI::Option* given = cmd.get_option_no_throw("--" + key);
        if (given != nullptr && given->count() > 0) continue; // flag wins

        try {
            if (key == "nodes") config.nodes = static_cast<std::uint32_t>(std::stoul(value));
            else if (key == "avg-degree") config.avg_degree = std::stod(value);
            else if (key == "gamma") config.gamma = std::stod(value);
            else if (key == "beta") config.beta = std::stod(value);
            else if (key == "communities")
                config.communities = static_cast<std::uint32_t>(std::stoul(value));
            else if (key == "rho") config.rho = std::stod(value);
            else if (key == "q") config.q = std::stod(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "tol") config.tol = std::stod(value);
            else if (key == "max-iter") config.max_iter = std::stoul(value);
            else if (key == "samples") config.samples = std::stoul(value);
            else if (key == "out") config.out = value;
            else
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": unknown key `" + key + "`");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed value for `" + key + "`");
        }
    }
}

void add_config_flags(CLI::App& cmd, rhbm::ExperimentConfig& config) {
    cmd.add_option("--nodes", config.nodes, "Number of nodes")->capture_default_str();
    cmd.add_option("--avg-degree", config.avg_degree, "Target average degree")
        ->capture_default_str();
    cmd.add_option("--gamma", config.gamma, "Fitness power-law exponent (> 2)")
        ->capture_default_str();
    cmd.add_option("--beta", config.beta, "Inverse temperature (> 1)")->capture_default_str();
    cmd.add_option("--communities", config.communities, "Number of blocks")
        ->capture_default_str();
    cmd.add_option("--rho", config.rho, "Mixing assortativity in [-1, 1]")->capture_default_str();
    cmd.add_option("--q", config.q, "Off-diagonal decay in (0, 1]")->capture_default_str();
    cmd.add_option("--seed", config.seed, "Master 64-bit seed")->capture_default_str();
    cmd.add_option("--tol", config.tol, "Calibration tolerance")->capture_default_str();
    cmd.add_option("--max-iter", config.max_iter, "Calibration sweep limit")
        ->capture_default_str();
    cmd.add_option("--samples", config.samples, "Graphs to sample where applicable")
        ->capture_default_str();
    cmd.add_option("--out", config.out, "Output directory")->capture_default_str();
}

int cmd_generate(const rhbm::ExperimentConfig& config) {
    try {
        const auto result = rhbm::run_generate(config);
        for (const auto& file : result.files) std::cout << file.string() << "\n";
        std::cout << "mixing_rel_error=" << result.mixing_error << "\n";
        std::cout << "isolated_nodes=" << result.isolated_nodes << "\n";
        std::cout << "converged=" << (result.converged ? "true" : "false") << std::endl;
        return result.converged ? kExitOk : kExitNotConverged;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitNotConverged;
    }
}

int cmd_sweep(const rhbm::SweepSpec& spec, const std::filesystem::path& out_path) {
    const auto rows = rhbm::run_sweep(spec);
    std::ofstream out;
    std::ostream* sink = &std::cout;
    if (!out_path.empty()) {
        if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
        out.open(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << std::endl;
            return kExitUsage;
        }
        sink = &out;
    }
    *sink << rhbm::sweep_csv_header() << "\n";
    for (const auto& row : rows) *sink << rhbm::sweep_csv_row(row) << "\n";
    return kExitOk;
}

int cmd_stats(const std::filesystem::path& edges_path, const std::filesystem::path& partition_path,
              const std::filesystem::path& out_dir) {
    const auto partition = rhbm::load_partition(partition_path);
    const auto graph = rhbm::load_edge_list(edges_path, partition.num_nodes());
    const auto stats = rhbm::compute_stats(graph, partition);
    std::filesystem::create_directories(out_dir);
    rhbm::save_stats(stats, out_dir / "stats.csv", out_dir / "stats_mixing.csv");
    std::cout << (out_dir / "stats.csv").string() << "\n"
              << (out_dir / "stats_mixing.csv").string() << std::endl;
    return kExitOk;
}

int cmd_eval(const std::filesystem::path& edges_path, const std::filesystem::path& partition_path,
             const std::filesystem::path& embedding_path, std::size_t samples, std::uint64_t seed,
             const std::filesystem::path& out_dir, const std::string& target_path) {
    const auto partition = rhbm::load_partition(partition_path);
    const auto graph = rhbm::load_edge_list(edges_path, partition.num_nodes());
    const auto embedding = rhbm::load_embedding(embedding_path);

    std::optional<rhbm::MixingMatrix> target;
    if (!target_path.empty()) target = rhbm::load_mixing(target_path);

    const auto report = rhbm::evaluate_embedding(graph, partition, embedding, samples, seed, target);

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "evaluation.csv");
        out.precision(12);
        out << "D,mixing_rel_error,mean_degree_error,"
               "global_clustering_rel_error_mean,global_clustering_rel_error_std,"
               "local_clustering_rel_error_mean,local_clustering_rel_error_std\n";
        out << report.dimension << ',' << report.mixing_error << ',' << report.mean_degree_error
            << ',' << report.global_clustering_error_mean << ','
            << report.global_clustering_error_std << ',' << report.local_clustering_error_mean
            << ',' << report.local_clustering_error_std << "\n";
    }
    {
        std::ofstream out(out_dir / "degrees_scatter.csv");
        out.precision(12);
        out << "node,observed_degree,expected_degree\n";
        for (std::size_t i = 0; i < report.expected_degrees.size(); ++i)
            out << i << ',' << report.observed_degrees[i] << ',' << report.expected_degrees[i]
                << "\n";
    }
    std::cout << (out_dir / "evaluation.csv").string() << "\n"
              << (out_dir / "degrees_scatter.csv").string() << std::endl;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random Hyperbolic Block Model generator and evaluation toolkit"};
    app.require_subcommand(1);

    rhbm::ExperimentConfig config;

    auto* generate = app.add_subcommand(
        "generate", "Calibrate latents for the rho/q mixing targets and sample one graph");
    add_config_flags(*generate, config);
    std::string generate_config_file;
    generate->add_option("--config", generate_config_file,
                         "Read defaults from a flat key=value file (flags override)");

    auto* sweep =
        app.add_subcommand("sweep", "Run one-parameter sweeps and emit a CSV row per (cell, seed)");
    rhbm::SweepSpec spec;
    std::string sweep_out;
    std::string sweep_config_file;
    add_config_flags(*sweep, spec.base);
    sweep->add_option("--config", sweep_config_file,
                      "Read defaults from a flat key=value file (flags override)");
    sweep
        ->add_option("--param", spec.parameter,
                     "Varied parameter: nodes|avg-degree|communities|rho|q|beta")
        ->required();
    std::vector<double> sweep_values;
    auto* values_option =
        sweep->add_option("--values", sweep_values,
                          "Values for the varied parameter (default: the standard grid)")
            ->delimiter(',');
    sweep->add_option("--seeds", spec.seeds_per_cell, "Seeds per cell")->capture_default_str();
    sweep->add_flag("--parallel", spec.parallel, "Run cells on every hardware thread");
    sweep->add_option("--table", sweep_out, "Write the CSV table here instead of stdout");

    auto* stats = app.add_subcommand("stats", "Statistics of an edge list against a partition");
    std::filesystem::path stats_edges, stats_partition;
    stats->add_option("edges", stats_edges, "Edge-list file")->required();
    stats->add_option("partition", stats_partition, "Partition CSV")->required();
    stats->add_option("--out", config.out, "Output directory")->capture_default_str();

    auto* eval = app.add_subcommand("eval-embedding",
                                    "Evaluate an external S^D embedding against a graph");
    std::filesystem::path eval_edges, eval_partition, eval_embedding;
    std::string eval_target;
    eval->add_option("edges", eval_edges, "Edge-list file")->required();
    eval->add_option("partition", eval_partition, "Partition CSV")->required();
    eval->add_option("embedding", eval_embedding, "Embedding CSV")->required();
    eval->add_option("--samples", config.samples, "Graphs sampled from the embedding")
        ->capture_default_str();
    eval->add_option("--seed", config.seed, "Sampling seed")->capture_default_str();
    eval->add_option("--out", config.out, "Output directory")->capture_default_str();
    eval->add_option("--target", eval_target,
                     "Compare against this mixing target instead of the empirical matrix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            if (!generate_config_file.empty())
                apply_config_file(generate_config_file, *generate, config);
            return cmd_generate(config);
        }
        if (sweep->parsed()) {
            if (!sweep_config_file.empty()) apply_config_file(sweep_config_file, *sweep, spec.base);
            if (values_option->count() > 0) spec.values = sweep_values;
            return cmd_sweep(spec, sweep_out);
        }
        if (stats->parsed()) return cmd_stats(stats_edges, stats_partition, config.out);
        if (eval->parsed())
            return cmd_eval(eval_edges, eval_partition, eval_embedding, config.samples,
                            config.seed, config.out, eval_target);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }
    return kExitUsage;
}
