#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pathint {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over [a, b].
///
/// `breakpoints` inside (a, b) split the range first, so kinks of piecewise
/// integrands sit on panel edges.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, std::span<const double> breakpoints = {});

/// Composite Simpson weights for `n` equally spaced samples with spacing `h`.
/// An odd number of intervals is closed with a 3/8 panel at the end.
std::vector<double> simpson_weights(std::size_t n, double h);

/// Composite Simpson sum over equally spaced samples.
double simpson(std::span<const double> samples, double h);

}  // namespace pathint
