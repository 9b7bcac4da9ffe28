#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhbm/matrix.hpp"
#include "rhbm/partition.hpp"

namespace rhbm {

// Two conventions for the same matrix shape: normalized entries sum to 2,
// edge-count entries sum to N*kbar. In both, the diagonal stores twice the
// intra-block quantity, so row sums equal block total degree.
enum class MixingScale { normalized, edge_counts };

struct MixingMatrix : SquareMatrix {
    MixingScale scale = MixingScale::normalized;

    MixingMatrix() = default;
    MixingMatrix(std::size_t size, MixingScale s) : SquareMatrix(size), scale(s) {}
};

// Parameters of the rho/q mixing family. rho interpolates
// disassortative (-1) to assortative (+1); q controls the decay of
// connectivity away from the diagonal.
struct MixingParams {
    std::size_t n = 10;
    double rho = 0.5;
    double q = 1.0;
};

// F = ((rho+1)/n) I + ((1-rho) / (2 sum_{i=1..n} (n-i) q^i)) T,
// with T[I][J] = q^|I-J| off the diagonal. Entries sum to 2 for n >= 2.
// n = 1 only admits rho = 1 (the off-diagonal normalizer is an empty sum).
MixingMatrix build_normalized_mixing(const MixingParams& params);

// Scales a normalized matrix by M = N*kbar/2 into edge-count form.
MixingMatrix scale_mixing_to_edges(const MixingMatrix& normalized, std::uint32_t num_nodes,
                                   double avg_degree);

struct TargetViolation {
    enum class Kind {
        pair_capacity,     // F_IJ > N_I * N_J for I != J
        intra_capacity,    // F_II > N_I * (N_I - 1)
        node_degree,       // f_i * F_IJ >= available neighbors in J
        node_total,        // f_i sum_J F_IJ exceeds sum_J min(F_IJ, available)
        nonpositive_share, // f_i <= 0
        share_sum,         // block share sum deviates from 1
    };
    Kind kind;
    std::size_t block_i = 0;
    std::size_t block_j = 0;
    long node = -1;
    double value = 0.0;
    double limit = 0.0;
    std::string message;

    // node_degree violations break only the blockwise (per-node-per-block)
    // reading of the targets; the block-count + total-degree system that
    // calibration solves can still be feasible. Everything else is fatal.
    bool hard() const { return kind != Kind::node_degree; }
};

struct TargetReport {
    std::vector<TargetViolation> violations;
    bool ok() const { return violations.empty(); }
    bool hard_ok() const {
        for (const auto& v : violations)
            if (v.hard()) return false;
        return true;
    }
    std::string to_string() const;
};

// Feasibility of edge-count targets against block capacities and per-node
// degree shares. Reports only; callers decide what is fatal.
TargetReport validate_targets(const MixingMatrix& edge_targets, const BlockPartition& partition,
                              const std::vector<double>& shares);

} // namespace rhbm
