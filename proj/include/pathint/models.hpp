#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pathint/curve.hpp"

namespace pathint {

using ScalarField = std::function<double(double x, double t)>;

/// Linear Gaussian short rate dr = sigma(t) dW + [theta(t) - alpha(t) r] dt.
struct HullWhiteParams {
    PiecewiseLinearCurve sigma;
    PiecewiseLinearCurve theta;
    PiecewiseLinearCurve alpha;

    static HullWhiteParams constant(double alpha, double theta, double sigma);

    /// Largest time covered by all three curves.
    double horizon() const;
    void validate() const;
};

/// beta(t,T) = exp(-int_t^T alpha(s) ds).
double discount_factor_beta(const PiecewiseLinearCurve& alpha, double t, double T);

/// eta(t,T) = int_t^T beta(t,u) du, by adaptive quadrature.
double eta(const PiecewiseLinearCurve& alpha, double t, double T, double rel_tol = 1e-12);

/// f(x,t) with f(0,0) = 1, mapping the OU state onto a multiple of r0.
class RateMap {
public:
    enum class Kind { linear, exponential, quadratic, custom };

    static RateMap linear(double slope);
    static RateMap exponential();
    /// f(x) = 1 + b x + a x^2.
    static RateMap quadratic(double a, double b);
    static RateMap custom(ScalarField f, ScalarField f_x, ScalarField f_xx,
                          bool time_homogeneous = false);

    Kind kind() const { return kind_; }
    double slope() const { return slope_; }
    double a() const { return a_; }
    double b() const { return b_; }
    bool time_homogeneous() const { return time_homogeneous_; }
    /// True when f is strictly increasing in x for every t.
    bool monotone() const;

    double f(double x, double t) const;
    double f_x(double x, double t) const;
    double f_xx(double x, double t) const;

    std::string name() const;

private:
    Kind kind_ = Kind::exponential;
    double slope_ = 0.0;
    double a_ = 0.0;
    double b_ = 0.0;
    bool time_homogeneous_ = true;
    ScalarField f_, f_x_, f_xx_;
};

/// r_t = r0 f(X_t, t), dX = sigma dW + [theta - alpha X] dt, X_0 = 0.
struct MappedModel {
    double sigma = 0.0;
    double theta = 0.0;
    double alpha = 0.0;
    double r0 = 0.0;
    RateMap map = RateMap::exponential();

    /// The Linear-map model that reproduces constant-parameter Hull-White.
    static MappedModel hull_white_equivalent(double alpha, double theta, double sigma, double r0);

    double nu() const { return theta / sigma; }
    double r_star() const;
    void validate() const;
};

/// r_t = V(W_t, t) for a Q-Brownian motion W.
struct PotentialModel {
    ScalarField V, V_x, V_xx;
    bool time_homogeneous = true;
    std::string name = "custom";

    /// V(x) = omega^2 x^2 / 2 - v0.
    static PotentialModel harmonic(double omega, double v0 = 0.0);
    static PotentialModel constant(double value);

    /// Max relative mismatch between the analytic derivatives and central
    /// differences over a grid on [x_lo, x_hi] at time t.
    double derivative_mismatch(double x_lo, double x_hi, double t) const;
};

struct StateRoots {
    std::vector<double> roots;
};

/// All real x with r0 f(sigma x, t) = z.
StateRoots solve_state_roots(const MappedModel& model, double z, double t);

/// All real x with g(x) = target in [-half_width, half_width], expanding the
/// bracket geometrically twice. A level set on which g is flat returns {0}.
StateRoots solve_level_set(const std::function<double(double)>& g,
                           const std::function<double(double)>& g_x, double target,
                           double half_width);

}  // namespace pathint
