#pragma once

#include <span>
#include <vector>

namespace pathint {

/// Piecewise-linear function of time defined on [knots.front(), knots.back()].
///
/// Knots must be non-decreasing. A repeated knot encodes a jump; evaluation at
/// the jump returns the right-hand value. A curve built with `constant()` is
/// defined on [0, +inf).
class PiecewiseLinearCurve {
public:
    PiecewiseLinearCurve() : PiecewiseLinearCurve(constant(0.0)) {}
    PiecewiseLinearCurve(std::vector<double> knots, std::vector<double> values);

    static PiecewiseLinearCurve constant(double value);

    double operator()(double t) const;

    double integral(double a, double b) const;
    /// Exact integral of the squared curve.
    double integral_of_square(double a, double b) const;

    double t_min() const { return knots_.front(); }
    double t_max() const;
    bool covers(double a, double b) const { return a >= t_min() && b <= t_max(); }
    bool is_constant() const { return constant_; }
    double min_value() const;
    double max_value() const;

    std::span<const double> knots() const { return knots_; }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
    bool constant_ = false;

    double antiderivative(double t) const;
    void check_domain(double a, double b) const;
};

}  // namespace pathint
