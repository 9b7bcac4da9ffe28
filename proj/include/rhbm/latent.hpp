#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rhbm/kernel.hpp"
#include "rhbm/matrix.hpp"
#include "rhbm/mixing.hpp"
#include "rhbm/partition.hpp"
#include "rhbm/rng.hpp"

namespace rhbm {

// Circle radius giving unit node density: R = N / (2 pi).
double default_radius(std::uint32_t num_nodes);

// mu~ = R beta sin(pi / beta).
double mu_tilde_of(double beta, double radius);

// Full latent configuration; determines every edge probability.
// Gauge: sum of phi over each block is 1.
struct LatentState {
    BlockPartition partition;
    std::vector<double> theta; // angular coordinate per node, in [0, 2pi)
    std::vector<double> phi;   // fitness per node, positive
    SquareMatrix forces;       // symmetric block force matrix Phi
    double beta = 2.0;
    double radius = 0.0;
    double mu_tilde = 0.0;

    // Throws std::invalid_argument on any invariant breach.
    void validate() const;
};

// Gauge transformation: phi_i -> c * phi_i inside one block with the
// compensating force rescale (row and column of the block divided by c, the
// diagonal by c^2). Leaves every edge probability unchanged.
void rescale_block_gauge(LatentState& state, std::uint32_t block, double factor);

// Raw Pareto draws with minimum 1 and density exponent gamma.
std::vector<double> sample_pareto(std::size_t count, double gamma, SplitMix64& rng);

// Per-block normalization of raw positive values so each block sums to 1.
std::vector<double> normalize_per_block(std::vector<double> raw, const BlockPartition& partition);

// Power-law fitness shares: Pareto(min 1, exponent gamma) draws normalized
// per block. Requires gamma > 2 (finite mean).
std::vector<double> sample_fitness(const BlockPartition& partition, double gamma, SplitMix64& rng);

// i.i.d. uniform angles on [0, 2pi).
std::vector<double> sample_angles(std::uint32_t num_nodes, SplitMix64& rng);

// Expected degree of every node towards every block under the
// angular-average kernel (not conditioned on the sampled angles):
//   <deg_iJ> = sum_{j in J, j != i} g(mu~ phi_i phi_j Phi_{I_i J}).
// Returned row-major, N rows by n columns.
std::vector<double> expected_block_degrees(const LatentState& state);
std::vector<double> expected_block_degrees(const LatentState& state, const KernelTable& table);

struct CalibrateOptions {
    double tol = 1e-2;
    std::size_t max_iter = 1000;
    double damping = 0.5; // exponent on the multiplicative phi correction
    bool with_multipliers = false;
};

// Eliminated Lagrange multipliers, reconstructed from a latent state with the
// free mean fixed to 1: lambda_i = -beta ln(phi_i N_I),
// eta_IJ = -beta ln(mu~ Phi_IJ / (N_I N_J)).
struct Multipliers {
    std::vector<double> lambda;
    SquareMatrix eta;
};

Multipliers reconstruct_multipliers(const LatentState& state);

struct CalibrationReport {
    // Sweep index of the reported state: the converging sweep on success,
    // the best sweep seen when the iteration gives up.
    std::size_t iterations = 0;
    // Residuals of the constraints the fixed point solves: per-node total
    // degrees <deg_i> = f_i sum_J F_IJ and block link counts <L_IJ> = F_IJ.
    double max_degree_residual = 0.0;
    double max_block_residual = 0.0;
    // Diagnostic only: the entrywise <deg_iJ> = f_i F_IJ system is
    // overdetermined at finite N (N*n constraints for N + n(n+1)/2 latents)
    // and carries an intrinsic residual floor that vanishes only in the
    // thermodynamic limit.
    double max_pair_residual = 0.0;
    bool converged = false;
    std::vector<double> residual_trace; // max(degree, block) per sweep
    std::vector<double> block_residual_trace;
    std::optional<Multipliers> multipliers;
};

struct CalibrationResult {
    LatentState state;
    CalibrationReport report;
};

// Solves for (phi, Phi) so the finite-N ensemble hits the block link counts
// <L_IJ> = F_IJ and the per-node total degrees <deg_i> = f_i sum_J F_IJ.
// Fixed-point iteration from the thermodynamic-limit solution phi = f,
// Phi = F; each sweep rescales Phi by the block-count ratio, phi by the
// damped degree ratio, then re-imposes the gauge. The angles are carried
// through untouched (calibration is angle-independent).
CalibrationResult calibrate(std::vector<double> theta, const std::vector<double>& shares,
                            const MixingMatrix& edge_targets, double beta, double radius,
                            const BlockPartition& partition, const CalibrateOptions& options = {});

} // namespace rhbm
