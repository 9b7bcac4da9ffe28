#include "rhbm/mixing.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rhbm {

namespace {

void check_params(const MixingParams& p) {
    if (p.n < 1) throw std::invalid_argument("mixing: block count must be >= 1");
    if (p.rho < -1.0 || p.rho > 1.0)
        throw std::invalid_argument("mixing: rho must lie in [-1, 1]");
    if (!(p.q > 0.0) || p.q > 1.0)
        throw std::invalid_argument("mixing: q must lie in (0, 1]");
}

} // namespace

MixingMatrix build_normalized_mixing(const MixingParams& params) {
    check_params(params);
    const std::size_t n = params.n;

    if (n == 1) {
        // The off-diagonal normalizer is an empty sum; only rho = 1 places
        // all mass on the single diagonal entry.
        if (params.rho < 1.0)
            throw std::invalid_argument("mixing: n = 1 requires rho = 1 (no off-diagonal mass)");
        MixingMatrix f(1, MixingScale::normalized);
        f.at(0, 0) = 2.0;
        return f;
    }

    double denom = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        denom += static_cast<double>(n - i) * std::pow(params.q, static_cast<double>(i));

    const double diagonal = (params.rho + 1.0) / static_cast<double>(n);
    const double off_coeff = (1.0 - params.rho) / (2.0 * denom);

    MixingMatrix f(n, MixingScale::normalized);
    for (std::size_t i = 0; i < n; ++i) {
        f.at(i, i) = diagonal;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = off_coeff * std::pow(params.q, static_cast<double>(j - i));
            f.at(i, j) = v;
            f.at(j, i) = v;
        }
    }
    return f;
}

MixingMatrix scale_mixing_to_edges(const MixingMatrix& normalized, std::uint32_t num_nodes,
                                   double avg_degree) {
    if (normalized.scale != MixingScale::normalized)
        throw std::invalid_argument("scale_mixing_to_edges: input is not in normalized form");
    if (std::abs(normalized.total() - 2.0) > 1e-9)
        throw std::invalid_argument("scale_mixing_to_edges: normalized entries must sum to 2");
    if (avg_degree < 0.0)
        throw std::invalid_argument("scale_mixing_to_edges: negative average degree");

    const double edges = static_cast<double>(num_nodes) * avg_degree / 2.0;
    MixingMatrix scaled = normalized;
    scaled.scale = MixingScale::edge_counts;
    for (double& v : scaled.data) v *= edges;
    return scaled;
}

std::string TargetReport::to_string() const {
    std::ostringstream out;
    if (violations.empty()) {
        out << "targets feasible";
        return out.str();
    }
    out << violations.size() << " violation(s):";
    for (const auto& v : violations) out << "\n  " << v.message;
    return out.str();
}

TargetReport validate_targets(const MixingMatrix& edge_targets, const BlockPartition& partition,
                              const std::vector<double>& shares) {
    if (edge_targets.scale != MixingScale::edge_counts)
        throw std::invalid_argument("validate_targets: targets must be in edge-count form");
    if (edge_targets.n != partition.num_blocks())
        throw std::invalid_argument("validate_targets: matrix size does not match block count");
    if (shares.size() != partition.num_nodes())
        throw std::invalid_argument("validate_targets: one share per node required");

    TargetReport report;
    const std::size_t n = edge_targets.n;

    auto add = [&report](TargetViolation v) { report.violations.push_back(std::move(v)); };

    for (std::uint32_t node = 0; node < shares.size(); ++node) {
        if (shares[node] <= 0.0) {
            TargetViolation v;
            v.kind = TargetViolation::Kind::nonpositive_share;
            v.node = node;
            v.value = shares[node];
            v.message = "share f_" + std::to_string(node) + " = " + std::to_string(shares[node]) +
                        " is not positive";
            add(std::move(v));
        }
    }

    for (std::size_t I = 0; I < n; ++I) {
        double sum = 0.0;
        for (std::uint32_t node : partition.members(static_cast<std::uint32_t>(I)))
            sum += shares[node];
        if (std::abs(sum - 1.0) > 1e-9) {
            TargetViolation v;
            v.kind = TargetViolation::Kind::share_sum;
            v.block_i = I;
            v.value = sum;
            v.limit = 1.0;
            v.message = "shares of block " + std::to_string(I) + " sum to " + std::to_string(sum);
            add(std::move(v));
        }
    }

    for (std::size_t I = 0; I < n; ++I) {
        const double ni = partition.block_size(static_cast<std::uint32_t>(I));
        for (std::size_t J = I; J < n; ++J) {
            const double nj = partition.block_size(static_cast<std::uint32_t>(J));
            const double f_ij = edge_targets.at(I, J);
            const double cap = (I == J) ? ni * (ni - 1.0) : ni * nj;
            if (f_ij > cap) {
                TargetViolation v;
                v.kind = (I == J) ? TargetViolation::Kind::intra_capacity
                                  : TargetViolation::Kind::pair_capacity;
                v.block_i = I;
                v.block_j = J;
                v.value = f_ij;
                v.limit = cap;
                v.message = "F_" + std::to_string(I) + std::to_string(J) + " = " +
                            std::to_string(f_ij) + " exceeds capacity " + std::to_string(cap);
                add(std::move(v));
            }
        }
    }

    // Per-node block-degree targets against the neighbors actually available.
    for (std::uint32_t node = 0; node < shares.size(); ++node) {
        if (shares[node] <= 0.0) continue;
        const std::size_t I = partition.block_of(node);
        double total_target = 0.0;
        double total_capacity = 0.0;
        for (std::size_t J = 0; J < n; ++J) {
            const double avail = partition.block_size(static_cast<std::uint32_t>(J)) -
                                 (I == J ? 1.0 : 0.0);
            const double target = shares[node] * edge_targets.at(I, J);
            total_target += target;
            total_capacity += std::min(edge_targets.at(I, J), avail);
            if (target > 0.0 && target >= avail) {
                TargetViolation v;
                v.kind = TargetViolation::Kind::node_degree;
                v.block_i = I;
                v.block_j = J;
                v.node = node;
                v.value = target;
                v.limit = avail;
                v.message = "node " + std::to_string(node) + " targets " + std::to_string(target) +
                            " neighbors in block " + std::to_string(J) + " but only " +
                            std::to_string(avail) + " exist (blockwise targets only)";
                add(std::move(v));
            }
        }
        // Total-degree target against what the block budgets can ever route
        // to one node: sum_J min(F_IJ, available neighbors in J).
        if (total_target >= total_capacity) {
            TargetViolation v;
            v.kind = TargetViolation::Kind::node_total;
            v.block_i = I;
            v.node = node;
            v.value = total_target;
            v.limit = total_capacity;
            v.message = "node " + std::to_string(node) + " targets " +
                        std::to_string(total_target) + " total neighbors but at most " +
                        std::to_string(total_capacity) + " are reachable";
            add(std::move(v));
        }
    }

    return report;
}

} // namespace rhbm
