#include "pathint/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pathint/errors.hpp"

namespace pathint {

PiecewiseLinearCurve::PiecewiseLinearCurve(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.empty() || knots_.size() != values_.size())
        throw DomainError("curve: knots and values must be non-empty and of equal length");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i]))
            throw DomainError("curve: non-finite knot or value");
        if (i > 0 && knots_[i] < knots_[i - 1])
            throw DomainError("curve: knots must be non-decreasing");
    }
    if (knots_.size() == 1) {
        constant_ = true;
    } else {
        constant_ = std::all_of(values_.begin(), values_.end(),
                                [&](double v) { return v == values_.front(); });
        if (knots_.back() <= knots_.front())
            throw DomainError("curve: knot span must have positive length");
    }
    cumulative_.assign(knots_.size(), 0.0);
    for (std::size_t i = 1; i < knots_.size(); ++i)
        cumulative_[i] =
            cumulative_[i - 1] + 0.5 * (values_[i] + values_[i - 1]) * (knots_[i] - knots_[i - 1]);
}

PiecewiseLinearCurve PiecewiseLinearCurve::constant(double value) {
    return PiecewiseLinearCurve({0.0}, {value});
}

double PiecewiseLinearCurve::t_max() const {
    return knots_.size() == 1 ? std::numeric_limits<double>::infinity() : knots_.back();
}

double PiecewiseLinearCurve::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double PiecewiseLinearCurve::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

void PiecewiseLinearCurve::check_domain(double a, double b) const {
    if (!(a >= t_min() && b <= t_max()))
        throw DomainError("curve: [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] outside the curve domain");
}

double PiecewiseLinearCurve::operator()(double t) const {
    if (knots_.size() == 1) {
        if (t < knots_.front()) check_domain(t, t);
        return values_.front();
    }
    check_domain(t, t);
    if (t >= knots_.back()) return values_.back();
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    const double w = (t - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double PiecewiseLinearCurve::antiderivative(double t) const {
    if (knots_.size() == 1) return values_.front() * (t - knots_.front());
    if (t >= knots_.back()) return cumulative_.back();
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    const double h = t - knots_[i];
    const double slope = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
    return cumulative_[i] + values_[i] * h + 0.5 * slope * h * h;
}

double PiecewiseLinearCurve::integral(double a, double b) const {
    if (b < a) return -integral(b, a);
    check_domain(a, b);
    return antiderivative(b) - antiderivative(a);
}

double PiecewiseLinearCurve::integral_of_square(double a, double b) const {
    if (b < a) return -integral_of_square(b, a);
    check_domain(a, b);
    if (knots_.size() == 1) return values_.front() * values_.front() * (b - a);
    // On a linear piece with end values p, q over length h: h (p^2 + p q + q^2) / 3.
    double total = 0.0;
    auto piece = [&](double lo, double hi) {
        if (hi <= lo) return;
        const double p = (*this)(lo);
        // Left limit at hi, so a jump at hi is not picked up.
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), lo);
        const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
        const double slope = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
        const double q = p + slope * (hi - lo);
        total += (hi - lo) * (p * p + p * q + q * q) / 3.0;
    };
    double lo = a;
    for (double k : knots_) {
        if (k <= lo) continue;
        if (k >= b) break;
        piece(lo, k);
        lo = k;
    }
    piece(lo, b);
    return total;
}

}  // namespace pathint
