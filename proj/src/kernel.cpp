#include "rhbm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rhbm {

namespace kernel_detail {

namespace {

double integrand(double t, double beta) { return 1.0 / (1.0 + std::pow(t, beta)); }

double simpson(double fa, double fm, double fb, double h) { return h * (fa + 4.0 * fm + fb) / 6.0; }

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, double beta, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = integrand(lm, beta);
    const double frm = integrand(rm, beta);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, beta, depth - 1) +
           adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, beta, depth - 1);
}

// integral_X^inf dt / (1 + t^beta) as an alternating series, valid for
// X^beta > 1; the error is bounded by the first omitted term.
double tail_series(double upper, double beta) {
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 0; k < 512; ++k) {
        const double expo = beta * (k + 1) - 1.0;
        const double term = std::pow(upper, -expo) / expo;
        sum += sign * term;
        if (term < 1e-14) break;
        sign = -sign;
    }
    return sum;
}

} // namespace

double kernel_integral_full(double beta) {
    return std::numbers::pi / (beta * std::sin(std::numbers::pi / beta));
}

double kernel_integral_quadrature(double upper, double beta) {
    if (upper <= 0.0) return 0.0;
    const double fa = integrand(0.0, beta);
    const double fb = integrand(upper, beta);
    const double fm = integrand(0.5 * upper, beta);
    const double whole = simpson(fa, fm, fb, upper);
    return adaptive_simpson(0.0, upper, fa, fm, fb, whole, 1e-12, beta, 52);
}

double kernel_integral(double upper, double beta) {
    if (upper <= 0.0) return 0.0;
    // The series needs X^-beta small; below the switch point the integrand is
    // cheap to resolve directly.
    const double switch_point = std::pow(10.0, 1.0 / beta);
    if (upper <= switch_point) return kernel_integral_quadrature(upper, beta);
    return kernel_integral_full(beta) - tail_series(upper, beta);
}

} // namespace kernel_detail

double angular_connection_kernel(double a, double beta, double radius) {
    if (beta <= 1.0)
        throw std::invalid_argument("kernel: beta must exceed 1 for the integral to converge");
    if (radius <= 0.0) throw std::invalid_argument("kernel: radius must be positive");
    if (a < 0.0) throw std::invalid_argument("kernel: scale parameter must be non-negative");
    if (a == 0.0) return 0.0;
    if (std::isinf(a)) return 1.0;

    const double half_circle = std::numbers::pi * radius;
    if (beta == 2.0) return (a / half_circle) * std::atan(half_circle / a);

    const double upper = half_circle / a;
    const double g = (a / half_circle) * kernel_detail::kernel_integral(upper, beta);
    return std::min(g, 1.0);
}

KernelTable::KernelTable(double beta, double radius, double a_lo, double a_hi, std::size_t points)
    : beta_(beta), radius_(radius) {
    if (points < 4) throw std::invalid_argument("kernel table: need at least 4 grid points");
    if (!(a_lo > 0.0) || !(a_hi > a_lo))
        throw std::invalid_argument("kernel table: require 0 < a_lo < a_hi");

    u_lo_ = std::log(a_lo);
    u_hi_ = std::log(a_hi);
    step_ = (u_hi_ - u_lo_) / static_cast<double>(points - 1);

    values_.resize(points);
    for (std::size_t k = 0; k < points; ++k)
        values_[k] = angular_connection_kernel(std::exp(u_lo_ + step_ * k), beta_, radius_);

    // Fritsch-Carlson slopes: centered differences clamped to three times the
    // neighboring secant, which keeps the interpolant monotone.
    const std::size_t m = points - 1;
    std::vector<double> secant(m);
    for (std::size_t k = 0; k < m; ++k) secant[k] = (values_[k + 1] - values_[k]) / step_;

    slopes_.resize(points);
    slopes_[0] = secant[0];
    slopes_[m] = secant[m - 1];
    for (std::size_t k = 1; k < m; ++k) slopes_[k] = 0.5 * (secant[k - 1] + secant[k]);
    for (std::size_t k = 0; k < m; ++k) {
        if (secant[k] == 0.0) {
            slopes_[k] = 0.0;
            slopes_[k + 1] = 0.0;
            continue;
        }
        const double limit = 3.0 * secant[k];
        if (slopes_[k] / secant[k] > 3.0) slopes_[k] = limit;
        if (slopes_[k + 1] / secant[k] > 3.0) slopes_[k + 1] = limit;
    }
}

double KernelTable::from_log(double log_a) const {
    // The negated comparison also routes NaN (a diverged caller state) to the
    // exact evaluator instead of into the index arithmetic.
    if (!(log_a >= u_lo_ && log_a <= u_hi_))
        return angular_connection_kernel(std::exp(log_a), beta_, radius_);

    const double pos = (log_a - u_lo_) / step_;
    std::size_t k = static_cast<std::size_t>(pos);
    if (k >= values_.size() - 1) k = values_.size() - 2;
    const double t = pos - static_cast<double>(k);

    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    const double g = h00 * values_[k] + h10 * step_ * slopes_[k] + h01 * values_[k + 1] +
                     h11 * step_ * slopes_[k + 1];
    return std::clamp(g, 0.0, 1.0);
}

double KernelTable::operator()(double a) const {
    if (a <= 0.0) return 0.0;
    if (std::isinf(a)) return 1.0;
    return from_log(std::log(a));
}

} // namespace rhbm
