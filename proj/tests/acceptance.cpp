// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavy cells (calibration at N up to 5000) are shared between
// criteria through a memoized cache, so the suite runs each configuration
// exactly once.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "rhbm/experiment.hpp"
#include "rhbm/generate.hpp"
#include "rhbm/io.hpp"
#include "rhbm/kernel.hpp"
#include "rhbm/latent.hpp"
#include "rhbm/metrics.hpp"

using namespace rhbm;

namespace {

constexpr double kPi = std::numbers::pi;

std::map<std::string, CellResult>& cell_cache() {
    static std::map<std::string, CellResult> cache;
    return cache;
}

const CellResult& cell(const ExperimentConfig& config) {
    auto& cache = cell_cache();
    const std::string key = config.canonical_string();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, run_cell(config)).first;
    return it->second;
}

ExperimentConfig default_config(std::uint64_t seed) {
    ExperimentConfig config; // stock defaults
    config.seed = seed;
    return config;
}

// The sweep grid: every parameter varied one at a time around the defaults.
std::vector<ExperimentConfig> grid_configs() {
    std::vector<ExperimentConfig> configs;
    const char* names[] = {"nodes", "avg-degree", "communities", "rho", "q", "beta"};
    for (const char* name : names) {
        for (double value : standard_grid_values(name)) {
            ExperimentConfig config = default_config(1);
            if (std::string(name) == "nodes") config.nodes = static_cast<std::uint32_t>(value);
            if (std::string(name) == "avg-degree") config.avg_degree = value;
            if (std::string(name) == "communities")
                config.communities = static_cast<std::uint32_t>(value);
            if (std::string(name) == "rho") config.rho = value;
            if (std::string(name) == "q") config.q = value;
            if (std::string(name) == "beta") config.beta = value;
            configs.push_back(config);
        }
    }
    // Deduplicate (the default cell appears once per parameter list).
    std::vector<ExperimentConfig> unique;
    std::map<std::string, bool> seen;
    for (const auto& config : configs)
        if (!seen[config.canonical_string()]) {
            seen[config.canonical_string()] = true;
            unique.push_back(config);
        }
    return unique;
}

// Generation requires hard-feasible targets (the generate command refuses
// infeasible draws), so seed lists are collected by scanning seeds in order
// and skipping draws that validate_targets rejects as hard-infeasible.
// Feasibility depends only on (N, kbar, n, rho, q, gamma, seed), not on beta.
std::vector<std::uint64_t> feasible_seeds(const ExperimentConfig& base, std::size_t count,
                                          std::ostream& log) {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t seed = 1; seed <= 60 && seeds.size() < count; ++seed) {
        ExperimentConfig config = base;
        config.seed = seed;
        if (probe_targets(config).hard_ok()) {
            seeds.push_back(seed);
        } else {
            log << "[seed " << seed << " skipped: infeasible targets] ";
        }
    }
    return seeds;
}

// One resolved run per grid cell: the first hard-feasible seed, or a direct
// calibration on the seed-1 draw when no candidate seed is feasible.
struct GridOutcome {
    ExperimentConfig config;
    bool feasible = false;
    std::uint64_t seed = 0;
    CalibrationReport report;
    double mean_degree = 0.0;
    double median_phi_deviation = 0.0;
    double wall_seconds = 0.0;
};

const std::vector<GridOutcome>& grid_outcomes() {
    static std::vector<GridOutcome> outcomes = [] {
        std::vector<GridOutcome> all;
        for (const auto& config : grid_configs()) {
            GridOutcome outcome;
            outcome.config = config;
            for (std::uint64_t seed = 1; seed <= 20; ++seed) {
                ExperimentConfig candidate = config;
                candidate.seed = seed;
                if (probe_targets(candidate).hard_ok()) {
                    outcome.feasible = true;
                    outcome.seed = seed;
                    break;
                }
            }
            if (outcome.feasible) {
                ExperimentConfig candidate = config;
                candidate.seed = outcome.seed;
                const auto& c = cell(candidate);
                outcome.report = c.calibration;
                outcome.mean_degree = c.stats.mean_degree;
                outcome.median_phi_deviation = c.median_phi_deviation;
                outcome.wall_seconds = c.wall_seconds;
            } else {
                // No feasible draw exists at this cell; calibrate the seed-1
                // draw anyway and record the honest outcome.
                ExperimentConfig candidate = config;
                candidate.seed = 1;
                const auto inputs = draw_cell_inputs(candidate);
                CalibrateOptions options;
                options.tol = candidate.tol;
                options.max_iter = candidate.max_iter;
                const auto start = std::chrono::steady_clock::now();
                auto result = calibrate(inputs.theta, inputs.shares, inputs.targets,
                                        candidate.beta, default_radius(candidate.nodes),
                                        inputs.partition, options);
                outcome.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                outcome.seed = 1;
                outcome.report = result.report;
                // Sample from the best state anyway so the degree clause is
                // still measured on a generated graph.
                const auto graph = sample_graph(result.state, derive_stream(candidate.seed, 3));
                outcome.mean_degree =
                    2.0 * static_cast<double>(graph.num_edges()) / candidate.nodes;
            }
            all.push_back(std::move(outcome));
        }
        return all;
    }();
    return outcomes;
}


bool criterion_mixing_fidelity(std::ostream& log) {
    const auto seeds = feasible_seeds(default_config(1), 10, log);
    if (seeds.size() < 10) {
        log << "could not collect 10 feasible seeds";
        return false;
    }
    double error_sum = 0.0;
    double wall_sum = 0.0;
    for (std::uint64_t seed : seeds) {
        const auto& c = cell(default_config(seed));
        error_sum += c.mixing_error;
        wall_sum += c.wall_seconds;
    }
    const double mean_error = error_sum / 10.0;
    const double mean_wall = wall_sum / 10.0;
    log << "mean mixing_rel_error=" << mean_error << " (limit 0.10), mean wall="
        << mean_wall << "s (limit 60s)";
    return mean_error <= 0.10 && mean_wall <= 60.0;
}

bool criterion_degree_fidelity(std::ostream& log) {
    bool ok = true;
    double worst_degree = 0.0;
    double worst_residual = 0.0;
    for (const auto& outcome : grid_outcomes()) {
        const double rel =
            std::abs(outcome.mean_degree - outcome.config.avg_degree) / outcome.config.avg_degree;
        worst_degree = std::max(worst_degree, rel);
        worst_residual = std::max(worst_residual, outcome.report.max_degree_residual);
        if (rel > 0.05) {
            ok = false;
            log << "[cell " << outcome.config.canonical_string()
                << ": mean_deg=" << outcome.mean_degree << "] ";
        }
        if (outcome.report.max_degree_residual > 1e-2) {
            ok = false;
            log << "[cell " << outcome.config.canonical_string() << ": residual "
                << outcome.report.max_degree_residual
                << (outcome.feasible ? "" : ", no feasible fitness draw in 20 seeds") << "] ";
        }
    }
    log << "worst mean-degree error=" << worst_degree << " (limit 0.05), worst residual="
        << worst_residual << " (limit 1e-2)";
    return ok;
}

bool criterion_calibration_convergence(std::ostream& log) {
    bool ok = true;
    std::size_t worst_iterations = 0;
    double n100_wall = 0.0;
    for (const auto& outcome : grid_outcomes()) {
        worst_iterations = std::max(worst_iterations, outcome.report.iterations);
        if (!outcome.report.converged || outcome.report.iterations > 1000) {
            ok = false;
            log << "[cell " << outcome.config.canonical_string() << " did not converge"
                << (outcome.feasible ? "" : " (no feasible fitness draw exists)") << ", residual "
                << outcome.report.max_degree_residual << "] ";
        }
        if (outcome.config.communities == 100) n100_wall = outcome.wall_seconds;
    }
    log << "max sweeps=" << worst_iterations << " (limit 1000), n=100 cell wall=" << n100_wall
        << "s (limit 600s)";
    return ok && n100_wall <= 600.0;
}

bool criterion_clustering_temperature(std::ostream& log) {
    const auto seeds = feasible_seeds(default_config(1), 10, log);
    if (seeds.size() < 10) {
        log << "could not collect 10 feasible seeds";
        return false;
    }
    double previous = -1.0;
    bool ok = true;
    log << "mean local clustering:";
    for (double beta : {2.0, 5.0, 10.0}) {
        double mean = 0.0;
        for (std::uint64_t seed : seeds) {
            ExperimentConfig config = default_config(seed);
            config.beta = beta;
            mean += cell(config).stats.avg_local_clustering;
        }
        mean /= 10.0;
        log << " beta=" << beta << ":" << mean;
        if (mean <= previous) ok = false;
        previous = mean;
    }
    return ok;
}

bool criterion_gauge_invariance(std::ostream& log) {
    const auto& c = cell(default_config(1));
    SplitMix64 rng(90210);
    const std::uint32_t n = c.state.partition.num_nodes();
    double worst = 0.0;
    for (int probe = 0; probe < 1000; ++probe) {
        const auto i = static_cast<std::uint32_t>(rng.uniform01() * n);
        auto j = static_cast<std::uint32_t>(rng.uniform01() * n);
        if (i == j) j = (j + 1) % n;
        const double before = edge_probability(i, j, c.state);

        LatentState scaled = c.state;
        const auto block =
            static_cast<std::uint32_t>(rng.uniform01() * c.state.partition.num_blocks());
        rescale_block_gauge(scaled, block, 0.05 + 20.0 * rng.uniform01());
        worst = std::max(worst, std::abs(edge_probability(i, j, scaled) - before));
    }
    log << "max |delta p| over 1000 probes=" << worst << " (limit 1e-12)";
    return worst <= 1e-12;
}

bool criterion_construction_equivalence(std::ostream& log) {
    // Bit-exact equality under shared pair-keyed randomness.
    const auto& c = cell(default_config(1));
    const auto direct = sample_graph(c.state, 424242);
    const auto blockwise = sample_graph_blockwise(c.state, 424242);
    if (direct.edges != blockwise.edges) {
        log << "pair-keyed construction differs";
        return false;
    }

    // Independent seeds: two-sample comparison of per-block-pair edge counts.
    ExperimentConfig small = default_config(1);
    small.nodes = 600;
    small.communities = 3;
    small.avg_degree = 8.0;
    const auto small_seeds = feasible_seeds(small, 1, log);
    if (small_seeds.empty()) {
        log << "no feasible small cell";
        return false;
    }
    small.seed = small_seeds.front();
    const auto& sc = cell(small);
    const std::size_t blocks = 3;
    const int runs = 20;

    std::vector<double> mean_a(blocks * blocks, 0.0), sq_a(blocks * blocks, 0.0);
    std::vector<double> mean_b(blocks * blocks, 0.0), sq_b(blocks * blocks, 0.0);
    for (int run = 0; run < runs; ++run) {
        const auto ga = sample_graph(sc.state, derive_stream(111, run));
        const auto gb = sample_graph_blockwise(sc.state, derive_stream(999, run));
        const auto ma = empirical_mixing(ga, sc.state.partition);
        const auto mb = empirical_mixing(gb, sc.state.partition);
        for (std::size_t k = 0; k < ma.data.size(); ++k) {
            mean_a[k] += ma.data[k];
            sq_a[k] += ma.data[k] * ma.data[k];
            mean_b[k] += mb.data[k];
            sq_b[k] += mb.data[k] * mb.data[k];
        }
    }
    double worst_z = 0.0;
    for (std::size_t k = 0; k < blocks * blocks; ++k) {
        mean_a[k] /= runs;
        mean_b[k] /= runs;
        const double var_a = sq_a[k] / runs - mean_a[k] * mean_a[k];
        const double var_b = sq_b[k] / runs - mean_b[k] * mean_b[k];
        const double se = std::sqrt(std::max(var_a + var_b, 1e-12) / runs);
        worst_z = std::max(worst_z, std::abs(mean_a[k] - mean_b[k]) / se);
    }
    log << "bit-exact ok; worst two-sample z over block pairs=" << worst_z << " (limit 2)";
    return worst_z <= 2.0;
}

bool criterion_thermodynamic_trend(std::ostream& log) {
    // Mean over feasible seeds of the per-run median deviation; a single
    // draw can sit close to its feasibility boundary and buck the trend.
    double previous = std::numeric_limits<double>::infinity();
    bool ok = true;
    log << "mean median |phi-f|/f over 5 seeds:";
    for (double nodes : {1000.0, 3000.0, 5000.0}) {
        ExperimentConfig config = default_config(1);
        config.nodes = static_cast<std::uint32_t>(nodes);
        const auto seeds = feasible_seeds(config, 5, log);
        if (seeds.size() < 5) {
            log << " N=" << nodes << ": not enough feasible seeds";
            ok = false;
            continue;
        }
        double mean = 0.0;
        for (std::uint64_t seed : seeds) {
            config.seed = seed;
            mean += cell(config).median_phi_deviation;
        }
        mean /= static_cast<double>(seeds.size());
        log << " N=" << nodes << ":" << mean;
        if (mean >= previous) ok = false;
        previous = mean;
    }
    return ok;
}

bool criterion_kernel_correctness(std::ostream& log) {
    const double r = default_radius(3000);
    double worst_closed = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double a = std::pow(10.0, -4.0 + 8.0 * k / 99.0) * r;
        const double reference = (a / (kPi * r)) * std::atan(kPi * r / a);
        worst_closed = std::max(
            worst_closed, std::abs(angular_connection_kernel(a, 2.0, r) - reference));
        // The quadrature/series path must agree independently of the closed
        // form the public kernel dispatches at beta = 2.
        const double generic =
            (a / (kPi * r)) * kernel_detail::kernel_integral(kPi * r / a, 2.0);
        worst_closed = std::max(worst_closed, std::abs(generic - reference));
    }

    double worst_small = 0.0;
    const double mu = r * 2.0 * std::sin(kPi / 2.0);
    for (int k = 0; k < 30; ++k) {
        const double a = std::pow(10.0, -5.0 + 3.0 * k / 29.0) * kPi * r / 100.0;
        const double approx = a / mu;
        const double g = angular_connection_kernel(a, 2.0, r);
        worst_small = std::max(worst_small, std::abs(g - approx) / approx);
    }
    log << "max |g - closed form|=" << worst_closed << " (limit 1e-8), max small-a error="
        << worst_small << " (limit 0.01)";
    return worst_closed <= 1e-8 && worst_small <= 0.01;
}

bool criterion_metrics_oracle(std::ostream& log) {
    SplitMix64 rng(20250101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.uniform01() * 57.0);
        const double p = 0.05 + 0.4 * rng.uniform01();
        Graph g;
        g.num_nodes = n;
        for (std::uint32_t i = 0; i + 1 < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j)
                if (rng.uniform01() < p) g.edges.emplace_back(i, j);

        // O(N^3) reference: triangles, paths, per-node local clustering.
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (const auto& [i, j] : g.edges) adj[i][j] = adj[j][i] = true;
        std::size_t triangles = 0;
        double paths2 = 0.0;
        double local_sum = 0.0;
        for (std::uint32_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> nb;
            for (std::uint32_t u = 0; u < n; ++u)
                if (adj[i][u]) nb.push_back(u);
            paths2 += 0.5 * static_cast<double>(nb.size()) * (nb.size() - 1.0);
            std::size_t links = 0;
            for (std::size_t a = 0; a < nb.size(); ++a)
                for (std::size_t b = a + 1; b < nb.size(); ++b)
                    if (adj[nb[a]][nb[b]]) ++links;
            triangles += links; // sums each triangle three times
            if (nb.size() >= 2)
                local_sum += 2.0 * static_cast<double>(links) /
                             (static_cast<double>(nb.size()) * (nb.size() - 1.0));
        }
        const double global_ref = paths2 > 0.0 ? static_cast<double>(triangles) / paths2 : 0.0;
        const double local_ref = n > 0 ? local_sum / n : 0.0;

        if (global_clustering(g) != global_ref || average_local_clustering(g) != local_ref) {
            log << "clustering mismatch at trial " << trial;
            return false;
        }

        const auto part = make_partition(n, 1 + trial % 3);
        const auto mix = empirical_mixing(g, part);
        SquareMatrix ref(part.num_blocks());
        for (const auto& [i, j] : g.edges) {
            ref.at(part.block_of(i), part.block_of(j)) += 1.0;
            ref.at(part.block_of(j), part.block_of(i)) += 1.0;
        }
        for (std::size_t k = 0; k < mix.data.size(); ++k)
            if (mix.data[k] != ref.data[k]) {
                log << "mixing mismatch at trial " << trial;
                return false;
            }
    }
    log << "200 random graphs, exact agreement";
    return true;
}

bool criterion_self_consistent_embedding(std::ostream& log) {
    // An S1 graph evaluated against its own generating parameters as a D=1
    // embedding: the evaluation pipeline must see its own statistics.
    const std::uint32_t n = 3000;
    const double kbar = 10.0;
    SplitMix64 kap_rng(derive_stream(777, 1));
    SplitMix64 ang_rng(derive_stream(777, 2));
    S1Params params;
    params.kappa = sample_hidden_degrees(n, 2.5, kbar, kap_rng);
    params.beta = 2.0;
    params.mu = s1_default_mu(2.0, kbar);
    params.radius = default_radius(n);
    const auto theta = sample_angles(n, ang_rng);
    const auto graph = sample_s1_graph(params, theta, 20250808);
    const auto embedding = embedding_from_s1(params, theta);
    const auto part = make_partition(n, 10);

    const auto report = evaluate_embedding(graph, part, embedding, 10, 5150);

    // Mean degree against the exact expectation, within three standard
    // errors of the Poisson-binomial edge count.
    double expected_edges = 0.0;
    double variance = 0.0;
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double p = sd_edge_probability(embedding, i, j);
            expected_edges += p;
            variance += p * (1.0 - p);
        }
    const double mean_expected = 2.0 * expected_edges / n;
    double mean_observed = 0.0;
    for (auto d : report.observed_degrees) mean_observed += d;
    mean_observed /= n;
    const double se_mean = 2.0 * std::sqrt(variance) / n;
    const double z = std::abs(mean_observed - mean_expected) / se_mean;

    // Per-node: at 3 sigma about 0.27% of nodes may fall outside by chance.
    std::size_t outside = 0;
    std::vector<double> node_var(n, 0.0);
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double p = sd_edge_probability(embedding, i, j);
            node_var[i] += p * (1.0 - p);
            node_var[j] += p * (1.0 - p);
        }
    for (std::uint32_t i = 0; i < n; ++i) {
        const double se = std::sqrt(std::max(node_var[i], 1e-12));
        if (std::abs(report.observed_degrees[i] - report.expected_degrees[i]) > 3.0 * se)
            ++outside;
    }
    const double outside_rate = static_cast<double>(outside) / n;

    log << "mixing error=" << report.mixing_error << " (limit 0.10), mean-degree z=" << z
        << " (limit 3), nodes outside 3se=" << outside_rate << " (limit 0.01)";
    return report.mixing_error <= 0.10 && z <= 3.0 && outside_rate <= 0.01;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
};

} // namespace

int main() {
    std::cout.precision(6);
    const std::vector<Criterion> criteria{
        {1, "mixing fidelity at the default configuration", criterion_mixing_fidelity},
        {2, "degree fidelity across the sweep grid", criterion_degree_fidelity},
        {3, "calibration convergence across the sweep grid", criterion_calibration_convergence},
        {4, "clustering strictly ordered by beta", criterion_clustering_temperature},
        {5, "gauge invariance of edge probabilities", criterion_gauge_invariance},
        {6, "blockwise/direct construction equivalence", criterion_construction_equivalence},
        {7, "thermodynamic trend of phi towards f", criterion_thermodynamic_trend},
        {8, "angular kernel against closed forms", criterion_kernel_correctness},
        {9, "metrics against brute-force counters", criterion_metrics_oracle},
        {10, "self-consistent embedding evaluation", criterion_self_consistent_embedding},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::ostringstream detail;
        bool passed = false;
        try {
            passed = criterion.run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        if (!passed) ++failures;
        std::cout << (passed ? "[PASS] " : "[FAIL] ") << "criterion " << criterion.id << ": "
                  << criterion.name << " -- " << detail.str() << std::endl;
    }
    if (failures) std::cout << failures << " criterion(s) failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
