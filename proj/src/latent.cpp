#include "rhbm/latent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rhbm {

double default_radius(std::uint32_t num_nodes) {
    return static_cast<double>(num_nodes) / (2.0 * std::numbers::pi);
}

double mu_tilde_of(double beta, double radius) {
    return radius * beta * std::sin(std::numbers::pi / beta);
}

void LatentState::validate() const {
    const std::uint32_t n_nodes = partition.num_nodes();
    const std::uint32_t n_blocks = partition.num_blocks();
    if (theta.size() != n_nodes) throw std::invalid_argument("latent state: one angle per node");
    if (phi.size() != n_nodes) throw std::invalid_argument("latent state: one fitness per node");
    if (forces.n != n_blocks)
        throw std::invalid_argument("latent state: force matrix does not match block count");
    if (!(beta > 1.0)) throw std::invalid_argument("latent state: beta must exceed 1");
    if (!(radius > 0.0)) throw std::invalid_argument("latent state: radius must be positive");
    if (std::abs(mu_tilde - mu_tilde_of(beta, radius)) > 1e-12)
        throw std::invalid_argument("latent state: mu~ is inconsistent with beta and R");

    for (double p : phi)
        if (!(p > 0.0)) throw std::invalid_argument("latent state: fitness values must be positive");
    for (std::uint32_t b = 0; b < n_blocks; ++b) {
        double s = 0.0;
        for (std::uint32_t node : partition.members(b)) s += phi[node];
        if (std::abs(s - 1.0) > 1e-9)
            throw std::invalid_argument("latent state: block " + std::to_string(b) +
                                        " fitness sum deviates from 1");
    }
    if (!forces.symmetric(0.0))
        throw std::invalid_argument("latent state: force matrix must be symmetric");
    for (double v : forces.data)
        if (v < 0.0) throw std::invalid_argument("latent state: negative block force");
}

void rescale_block_gauge(LatentState& state, std::uint32_t block, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("gauge rescale: factor must be positive");
    for (std::uint32_t node : state.partition.members(block)) state.phi[node] *= factor;
    const std::size_t n = state.forces.n;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == block) continue;
        state.forces.at(block, j) /= factor;
        state.forces.at(j, block) /= factor;
    }
    state.forces.at(block, block) /= factor * factor;
}

std::vector<double> sample_pareto(std::size_t count, double gamma, SplitMix64& rng) {
    if (!(gamma > 2.0))
        throw std::invalid_argument("fitness: gamma must exceed 2 (infinite-mean regime unsupported)");
    std::vector<double> raw(count);
    const double inv_alpha = 1.0 / (gamma - 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        // 1 - u lies in (0, 1], so the draw is finite and >= 1.
        raw[i] = std::pow(1.0 - rng.uniform01(), -inv_alpha);
    }
    return raw;
}

std::vector<double> normalize_per_block(std::vector<double> raw, const BlockPartition& partition) {
    if (raw.size() != partition.num_nodes())
        throw std::invalid_argument("normalize_per_block: one value per node required");
    for (std::uint32_t b = 0; b < partition.num_blocks(); ++b) {
        double sum = 0.0;
        for (std::uint32_t node : partition.members(b)) sum += raw[node];
        if (!(sum > 0.0))
            throw std::invalid_argument("normalize_per_block: block sum must be positive");
        for (std::uint32_t node : partition.members(b)) raw[node] /= sum;
    }
    return raw;
}

std::vector<double> sample_fitness(const BlockPartition& partition, double gamma, SplitMix64& rng) {
    return normalize_per_block(sample_pareto(partition.num_nodes(), gamma, rng), partition);
}

std::vector<double> sample_angles(std::uint32_t num_nodes, SplitMix64& rng) {
    std::vector<double> theta(num_nodes);
    for (std::uint32_t i = 0; i < num_nodes; ++i)
        theta[i] = 2.0 * std::numbers::pi * rng.uniform01();
    return theta;
}

namespace {

// Shared pair loop: adds g(mu~ phi_i phi_j Phi_IJ) to both deg[i][J] and
// deg[j][I]. Arguments reach the table as sums of logs, so the hot path does
// no transcendental work per pair.
std::vector<double> block_degrees_impl(const LatentState& state, const KernelTable& table) {
    const auto& part = state.partition;
    const std::uint32_t n_nodes = part.num_nodes();
    const std::uint32_t n_blocks = part.num_blocks();

    std::vector<double> log_phi(n_nodes);
    for (std::uint32_t i = 0; i < n_nodes; ++i) log_phi[i] = std::log(state.phi[i]);
    const double log_mu = std::log(state.mu_tilde);

    std::vector<double> deg(static_cast<std::size_t>(n_nodes) * n_blocks, 0.0);
    for (std::uint32_t bi = 0; bi < n_blocks; ++bi) {
        const auto& mi = part.members(bi);
        for (std::uint32_t bj = bi; bj < n_blocks; ++bj) {
            const double force = state.forces.at(bi, bj);
            if (force <= 0.0) continue;
            const double base = log_mu + std::log(force);
            const auto& mj = part.members(bj);
            if (bi == bj) {
                for (std::size_t a = 0; a < mi.size(); ++a) {
                    const std::uint32_t i = mi[a];
                    const double li = base + log_phi[i];
                    for (std::size_t b = a + 1; b < mi.size(); ++b) {
                        const std::uint32_t j = mi[b];
                        const double g = table.from_log(li + log_phi[j]);
                        deg[static_cast<std::size_t>(i) * n_blocks + bi] += g;
                        deg[static_cast<std::size_t>(j) * n_blocks + bi] += g;
                    }
                }
            } else {
                for (const std::uint32_t i : mi) {
                    const double li = base + log_phi[i];
                    double sum_i = 0.0;
                    for (const std::uint32_t j : mj) {
                        const double g = table.from_log(li + log_phi[j]);
                        sum_i += g;
                        deg[static_cast<std::size_t>(j) * n_blocks + bi] += g;
                    }
                    deg[static_cast<std::size_t>(i) * n_blocks + bj] += sum_i;
                }
            }
        }
    }
    return deg;
}

// Table range wide enough for the current state, with margin for the
// calibration updates to move phi and Phi around.
KernelTable make_table(const LatentState& state, double margin = 1e3) {
    double phi_min = std::numeric_limits<double>::infinity();
    double phi_max = 0.0;
    for (double p : state.phi) {
        phi_min = std::min(phi_min, p);
        phi_max = std::max(phi_max, p);
    }
    double force_min = std::numeric_limits<double>::infinity();
    double force_max = 0.0;
    for (double v : state.forces.data) {
        if (v <= 0.0) continue;
        force_min = std::min(force_min, v);
        force_max = std::max(force_max, v);
    }
    if (!(force_max > 0.0)) { // all forces zero: any range will do
        force_min = 1.0;
        force_max = 1.0;
    }
    const double a_lo = std::clamp(state.mu_tilde * phi_min * phi_min * force_min / margin,
                                   1e-300, 1e290);
    const double a_hi = std::clamp(state.mu_tilde * phi_max * phi_max * force_max * margin,
                                   a_lo * 2.0, 1e300);
    return KernelTable(state.beta, state.radius, a_lo, a_hi);
}

} // namespace

std::vector<double> expected_block_degrees(const LatentState& state, const KernelTable& table) {
    return block_degrees_impl(state, table);
}

std::vector<double> expected_block_degrees(const LatentState& state) {
    return block_degrees_impl(state, make_table(state, 10.0));
}

Multipliers reconstruct_multipliers(const LatentState& state) {
    const auto& part = state.partition;
    Multipliers m;
    m.lambda.resize(part.num_nodes());
    for (std::uint32_t i = 0; i < part.num_nodes(); ++i) {
        const double ni = part.block_size(part.block_of(i));
        m.lambda[i] = -state.beta * std::log(state.phi[i] * ni);
    }
    m.eta = SquareMatrix(part.num_blocks());
    for (std::size_t I = 0; I < m.eta.n; ++I)
        for (std::size_t J = 0; J < m.eta.n; ++J) {
            const double ni = part.block_size(static_cast<std::uint32_t>(I));
            const double nj = part.block_size(static_cast<std::uint32_t>(J));
            const double f = state.forces.at(I, J);
            m.eta.at(I, J) = f > 0.0
                                 ? -state.beta * std::log(state.mu_tilde * f / (ni * nj))
                                 : std::numeric_limits<double>::infinity();
        }
    return m;
}

CalibrationResult calibrate(std::vector<double> theta, const std::vector<double>& shares,
                            const MixingMatrix& edge_targets, double beta, double radius,
                            const BlockPartition& partition, const CalibrateOptions& options) {
    if (edge_targets.scale != MixingScale::edge_counts)
        throw std::invalid_argument("calibrate: targets must be in edge-count form");
    if (edge_targets.n != partition.num_blocks())
        throw std::invalid_argument("calibrate: target matrix does not match block count");
    if (shares.size() != partition.num_nodes())
        throw std::invalid_argument("calibrate: one share per node required");
    if (!(options.tol > 0.0)) throw std::invalid_argument("calibrate: tolerance must be positive");
    if (!(beta > 1.0)) throw std::invalid_argument("calibrate: beta must exceed 1");
    if (theta.size() != partition.num_nodes() && !theta.empty())
        throw std::invalid_argument("calibrate: angle vector does not match node count");

    const std::uint32_t n_nodes = partition.num_nodes();
    const std::uint32_t n_blocks = partition.num_blocks();

    LatentState state;
    state.partition = partition;
    state.theta = theta.empty() ? std::vector<double>(n_nodes, 0.0) : std::move(theta);
    state.phi = shares;
    state.forces = static_cast<const SquareMatrix&>(edge_targets);
    state.beta = beta;
    state.radius = radius;
    state.mu_tilde = mu_tilde_of(beta, radius);

    std::vector<double> row_target(n_blocks, 0.0); // sum_J F_IJ
    for (std::size_t I = 0; I < n_blocks; ++I)
        for (std::size_t J = 0; J < n_blocks; ++J) row_target[I] += edge_targets.at(I, J);

    KernelTable table = make_table(state);

    CalibrationReport report;
    std::vector<double> deg;

    // NaN-proof max: divergence must surface as an infinite residual, never
    // masked by NaN comparison rules.
    const auto fold_max = [](double& acc, double value) {
        if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
        if (value > acc) acc = value;
    };

    // Best state seen so far; returned when the iteration fails to converge.
    double best_residual = std::numeric_limits<double>::infinity();
    std::vector<double> best_phi = state.phi;
    SquareMatrix best_forces = state.forces;
    CalibrationReport best_report;

    for (std::size_t iter = 0;; ++iter) {
        deg = expected_block_degrees(state, table);

        // Residuals of the solved constraints: per-node totals and block
        // counts. The entrywise <deg_iJ> deviation is tracked as a
        // diagnostic only.
        double degree_residual = 0.0;
        double pair_residual = 0.0;
        for (std::uint32_t i = 0; i < n_nodes; ++i) {
            const std::size_t I = partition.block_of(i);
            double have = 0.0;
            for (std::size_t J = 0; J < n_blocks; ++J) {
                const double value = deg[static_cast<std::size_t>(i) * n_blocks + J];
                have += value;
                const double target = shares[i] * edge_targets.at(I, J);
                if (target > 0.0) fold_max(pair_residual, std::abs(value - target) / target);
            }
            const double want = shares[i] * row_target[I];
            if (want > 0.0) fold_max(degree_residual, std::abs(have - want) / want);
        }
        double block_residual = 0.0;
        SquareMatrix link_counts(n_blocks);
        for (std::size_t I = 0; I < n_blocks; ++I)
            for (const std::uint32_t i : partition.members(static_cast<std::uint32_t>(I)))
                for (std::size_t J = 0; J < n_blocks; ++J)
                    link_counts.at(I, J) += deg[static_cast<std::size_t>(i) * n_blocks + J];
        for (std::size_t I = 0; I < n_blocks; ++I)
            for (std::size_t J = 0; J < n_blocks; ++J) {
                const double target = edge_targets.at(I, J);
                if (target <= 0.0) continue;
                fold_max(block_residual, std::abs(link_counts.at(I, J) - target) / target);
            }

        report.iterations = iter;
        report.max_degree_residual = degree_residual;
        report.max_block_residual = block_residual;
        report.max_pair_residual = pair_residual;
        report.residual_trace.push_back(std::max(degree_residual, block_residual));
        report.block_residual_trace.push_back(block_residual);

        if (std::max(degree_residual, block_residual) < best_residual) {
            best_residual = std::max(degree_residual, block_residual);
            best_phi = state.phi;
            best_forces = state.forces;
            best_report = report;
            best_report.residual_trace.clear();
            best_report.block_residual_trace.clear();
        }

        if (degree_residual <= options.tol && block_residual <= options.tol) {
            report.converged = true;
            break;
        }
        if (iter >= options.max_iter) break;
        // Diverged state (infeasible targets drive phi/Phi to the limits of
        // double range): stop and fall back to the best sweep.
        if (!std::isfinite(degree_residual) || !std::isfinite(block_residual)) break;

        // Undamped multiplicative force update towards <L_IJ> = F_IJ.
        for (std::size_t I = 0; I < n_blocks; ++I)
            for (std::size_t J = I; J < n_blocks; ++J) {
                const double target = edge_targets.at(I, J);
                if (target <= 0.0 || link_counts.at(I, J) <= 0.0) continue;
                const double ratio =
                    std::clamp(target / link_counts.at(I, J), 1e-6, 1e6);
                state.forces.at(I, J) *= ratio;
                if (I != J) state.forces.at(J, I) = state.forces.at(I, J);
            }

        // Damped fitness update towards the row targets f_i sum_J F_IJ.
        for (std::uint32_t i = 0; i < n_nodes; ++i) {
            const std::size_t I = partition.block_of(i);
            double have = 0.0;
            for (std::size_t J = 0; J < n_blocks; ++J)
                have += deg[static_cast<std::size_t>(i) * n_blocks + J];
            const double want = shares[i] * row_target[I];
            if (want <= 0.0 || have <= 0.0) continue;
            const double ratio = std::clamp(want / have, 1e-6, 1e6);
            state.phi[i] *= std::pow(ratio, options.damping);
        }

        // Re-impose the gauge; the compensating force rescale keeps the edge
        // probabilities produced by the phi update intact.
        std::vector<double> block_sum(n_blocks, 0.0);
        for (std::uint32_t i = 0; i < n_nodes; ++i)
            block_sum[partition.block_of(i)] += state.phi[i];
        for (std::uint32_t i = 0; i < n_nodes; ++i)
            state.phi[i] /= block_sum[partition.block_of(i)];
        for (std::size_t I = 0; I < n_blocks; ++I)
            for (std::size_t J = 0; J < n_blocks; ++J)
                state.forces.at(I, J) *= block_sum[I] * block_sum[J];

        // Keep the memoized kernel valid if the updates walked out of range.
        double u_min = std::numeric_limits<double>::infinity();
        double u_max = -std::numeric_limits<double>::infinity();
        double phi_min = std::numeric_limits<double>::infinity();
        double phi_max = 0.0;
        for (double p : state.phi) {
            phi_min = std::min(phi_min, p);
            phi_max = std::max(phi_max, p);
        }
        for (double v : state.forces.data) {
            if (v <= 0.0) continue;
            u_min = std::min(u_min, std::log(state.mu_tilde * phi_min * phi_min * v));
            u_max = std::max(u_max, std::log(state.mu_tilde * phi_max * phi_max * v));
        }
        if (std::isfinite(u_min) && std::isfinite(u_max) &&
            (!table.covers_log(u_min) || !table.covers_log(u_max)))
            table = make_table(state);
    }

    if (!report.converged) {
        // Hand back the best sweep, with the full trace of the attempt.
        state.phi = std::move(best_phi);
        state.forces = std::move(best_forces);
        best_report.residual_trace = std::move(report.residual_trace);
        best_report.block_residual_trace = std::move(report.block_residual_trace);
        report = std::move(best_report);
    }

    if (options.with_multipliers) report.multipliers = reconstruct_multipliers(state);

    return CalibrationResult{std::move(state), std::move(report)};
}

} // namespace rhbm
