#include "pathint/kernels.hpp"

#include <cmath>
#include <numbers>

#include "pathint/errors.hpp"

namespace pathint {

namespace {

constexpr double kSeriesThreshold = 1e-6;

void require_interval(double t0, double tf) {
    if (!(tf > t0)) throw DomainError("kernel: need tf > t0");
}

double require_omega(const KernelQuery& q) {
    if (!q.omega) throw DomainError("kernel: omega required");
    if (!(*q.omega >= 0.0)) throw DomainError("kernel: omega must be non-negative");
    return *q.omega;
}

// log(w / sinh(w d)), switching to the small-argument series below the threshold.
double log_w_over_sinh(double w, double d) {
    const double u = w * d;
    if (u < kSeriesThreshold) return -std::log(d) - u * u / 6.0;
    return std::log(w) - (u + std::log1p(-std::exp(-2.0 * u)) - std::numbers::ln2);
}

double w_coth(double w, double d) {
    const double u = w * d;
    if (u < kSeriesThreshold) return (1.0 + u * u / 3.0) / d;
    return w / std::tanh(u);
}

double log_cosh(double u) { return u + std::log1p(std::exp(-2.0 * u)) - std::numbers::ln2; }

}  // namespace

double free_kernel(const KernelQuery& q) {
    require_interval(q.t0, q.tf);
    const double d = q.tf - q.t0;
    const double dx = q.xf - q.x0;
    return q.history * std::exp(-dx * dx / (2.0 * d)) / std::sqrt(2.0 * std::numbers::pi * d);
}

double ho_kernel_fixed(const KernelQuery& q) {
    require_interval(q.t0, q.tf);
    const double w = require_omega(q);
    const double d = q.tf - q.t0;
    const double lws = log_w_over_sinh(w, d);
    const double ws = std::exp(lws);
    const double action =
        0.5 * ((q.x0 * q.x0 + q.xf * q.xf) * w_coth(w, d) - 2.0 * q.x0 * q.xf * ws);
    return q.history * std::exp(0.5 * (lws - std::log(2.0 * std::numbers::pi)) - action);
}

double ho_kernel_free(const KernelQuery& q) {
    require_interval(q.t0, q.tf);
    const double w = require_omega(q);
    const double u = w * (q.tf - q.t0);
    return q.history * std::exp(-0.5 * log_cosh(u) - 0.5 * w * q.x0 * q.x0 * std::tanh(u));
}

double drift_expectation(const KernelQuery& q, bool fixed_endpoint) {
    require_interval(q.t0, q.tf);
    const PiecewiseLinearCurve zero = PiecewiseLinearCurve::constant(0.0);
    const PiecewiseLinearCurve& rho = q.rho ? *q.rho : zero;
    if (!rho.covers(q.t0, q.tf)) throw DomainError("drift_expectation: rho does not cover [t0, tf]");
    const double half_sq = 0.5 * rho.integral_of_square(q.t0, q.tf);
    if (!fixed_endpoint) return q.history * std::exp(half_sq);
    // Pinned endpoint: Brownian bridge density of the shifted increment.
    const double d = q.tf - q.t0;
    const double shift = q.xf - q.x0 + rho.integral(q.t0, q.tf);
    return q.history * std::exp(-shift * shift / (2.0 * d) + half_sq) /
           std::sqrt(2.0 * std::numbers::pi * d);
}

double measure_change_kernel(double y0, double t0, double yf, double tf, double alpha) {
    require_interval(t0, tf);
    if (!(alpha >= 0.0)) throw DomainError("measure_change_kernel: alpha must be non-negative");
    const double d = tf - t0;
    const double yf_hat = yf * std::exp(0.5 * alpha * d);
    const double y0_hat = y0 * std::exp(-0.5 * alpha * d);
    const double lws = log_w_over_sinh(alpha, d);
    const double gap = yf_hat - y0_hat;
    return std::exp(0.5 * (lws - std::log(2.0 * std::numbers::pi)) - 0.5 * gap * gap * std::exp(lws));
}

}  // namespace pathint
