#pragma once

#include <cstddef>
#include <vector>

namespace rhbm {

// Expected connection probability for a pair with scale parameter a, averaged
// over a uniform angular separation on a circle of radius R:
//
//   g(a) = (a / (pi R)) * integral_0^{pi R / a} dt / (1 + t^beta)
//
// g(0) = 0, g is continuous, strictly increasing and bounded by 1. Requires
// beta > 1 for the integral to stay finite as a -> 0.
double angular_connection_kernel(double a, double beta, double radius);

namespace kernel_detail {

// integral_0^X dt / (1 + t^beta); closed form has no general expression, so
// this dispatches between adaptive quadrature and an alternating tail series.
double kernel_integral(double upper, double beta);

// Quadrature-only path, exposed so tests can pit it against closed forms.
double kernel_integral_quadrature(double upper, double beta);

// integral_0^inf dt / (1 + t^beta) = pi / (beta sin(pi/beta)).
double kernel_integral_full(double beta);

} // namespace kernel_detail

// Memoized kernel on a log-spaced grid with monotone cubic (Fritsch-Carlson)
// interpolation. Arguments outside the table range fall back to the exact
// evaluator. Built once per (beta, R); the grid covers [a_lo, a_hi].
class KernelTable {
public:
    KernelTable(double beta, double radius, double a_lo, double a_hi, std::size_t points = 4096);

    double operator()(double a) const;

    // Lookup keyed on ln(a); hot path for the calibration sweeps where
    // ln(a) = ln(mu~) + ln(phi_i) + ln(phi_j) + ln(Phi_IJ) is a sum of
    // precomputed terms.
    double from_log(double log_a) const;

    double beta() const { return beta_; }
    double radius() const { return radius_; }
    bool covers_log(double log_a) const { return log_a >= u_lo_ && log_a <= u_hi_; }

private:
    double beta_;
    double radius_;
    double u_lo_;
    double u_hi_;
    double step_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

} // namespace rhbm
