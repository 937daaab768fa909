#pragma once

#include <optional>

#include "pathint/curve.hpp"

namespace pathint {

/// Endpoints of a Brownian bridge segment plus optional oscillator frequency
/// and drift-weight curve.
///
/// `history` multiplies every kernel value. It stands for the factor
/// exp(-int_0^{t0} ...) accumulated along a realized initial segment and
/// defaults to 1, treating t0 as the start of the path.
struct KernelQuery {
    double x0 = 0.0;
    double t0 = 0.0;
    double xf = 0.0;
    double tf = 1.0;
    std::optional<double> omega;
    std::optional<PiecewiseLinearCurve> rho;
    double history = 1.0;
};

/// Gaussian transition density of standard Brownian motion.
double free_kernel(const KernelQuery& q);

/// <exp(-omega^2/2 int x^2)> with both endpoints pinned.
double ho_kernel_fixed(const KernelQuery& q);

/// <exp(-omega^2/2 int x^2)> with the endpoint integrated out.
double ho_kernel_free(const KernelQuery& q);

/// <exp(-int rho(t) dx)>, either pinned at xf or with xf integrated out.
double drift_expectation(const KernelQuery& q, bool fixed_endpoint);

/// Transition kernel of the measure-changed OU bridge, exp(-1/2 int (y' + alpha y)^2),
/// normalized over the scaled endpoint yf exp(alpha (tf - t0) / 2).
double measure_change_kernel(double y0, double t0, double yf, double tf, double alpha);

}  // namespace pathint
