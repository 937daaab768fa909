#include "pathint/models.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

#include "pathint/errors.hpp"
#include "pathint/quadrature.hpp"

namespace pathint {

// ---------------------------------------------------------------- Hull-White

HullWhiteParams HullWhiteParams::constant(double alpha, double theta, double sigma) {
    return {PiecewiseLinearCurve::constant(sigma), PiecewiseLinearCurve::constant(theta),
            PiecewiseLinearCurve::constant(alpha)};
}

double HullWhiteParams::horizon() const {
    return std::min({sigma.t_max(), theta.t_max(), alpha.t_max()});
}

void HullWhiteParams::validate() const {
    if (sigma.min_value() < 0.0) throw DomainError("hull_white: sigma must be non-negative");
    if (std::max({sigma.t_min(), theta.t_min(), alpha.t_min()}) > 0.0)
        throw DomainError("hull_white: curves must start at t = 0");
    if (!(horizon() > 0.0)) throw DomainError("hull_white: horizon must be positive");
}

double discount_factor_beta(const PiecewiseLinearCurve& alpha, double t, double T) {
    return std::exp(-alpha.integral(t, T));
}

double eta(const PiecewiseLinearCurve& alpha, double t, double T, double rel_tol) {
    if (T < t) throw DomainError("eta: T < t");
    if (!alpha.covers(t, T)) throw DomainError("eta: alpha curve does not cover [t, T]");
    if (T == t) return 0.0;
    const double base = alpha.integral(alpha.t_min(), t);
    auto beta = [&](double u) { return std::exp(base - alpha.integral(alpha.t_min(), u)); };
    return integrate_adaptive(beta, t, T, rel_tol, alpha.knots()).value;
}

// ------------------------------------------------------------------ rate map

RateMap RateMap::linear(double slope) {
    RateMap m;
    m.kind_ = Kind::linear;
    m.slope_ = slope;
    return m;
}

RateMap RateMap::exponential() { return RateMap{}; }

RateMap RateMap::quadratic(double a, double b) {
    RateMap m;
    m.kind_ = Kind::quadratic;
    m.a_ = a;
    m.b_ = b;
    return m;
}

RateMap RateMap::custom(ScalarField f, ScalarField f_x, ScalarField f_xx, bool time_homogeneous) {
    if (!f || !f_x || !f_xx) throw DomainError("rate map: custom map needs f, f_x and f_xx");
    if (std::abs(f(0.0, 0.0) - 1.0) > 1e-12) throw DomainError("rate map: f(0,0) must equal 1");
    RateMap m;
    m.kind_ = Kind::custom;
    m.time_homogeneous_ = time_homogeneous;
    m.f_ = std::move(f);
    m.f_x_ = std::move(f_x);
    m.f_xx_ = std::move(f_xx);
    return m;
}

bool RateMap::monotone() const {
    switch (kind_) {
        case Kind::linear: return slope_ > 0.0;
        case Kind::exponential: return true;
        case Kind::quadratic: return a_ == 0.0 && b_ > 0.0;
        case Kind::custom: return false;
    }
    return false;
}

double RateMap::f(double x, double t) const {
    switch (kind_) {
        case Kind::linear: return 1.0 + slope_ * x;
        case Kind::exponential: return std::exp(x);
        case Kind::quadratic: return 1.0 + b_ * x + a_ * x * x;
        case Kind::custom: return f_(x, t);
    }
    return 0.0;
}

double RateMap::f_x(double x, double t) const {
    switch (kind_) {
        case Kind::linear: return slope_;
        case Kind::exponential: return std::exp(x);
        case Kind::quadratic: return b_ + 2.0 * a_ * x;
        case Kind::custom: return f_x_(x, t);
    }
    return 0.0;
}

double RateMap::f_xx(double x, double t) const {
    switch (kind_) {
        case Kind::linear: return 0.0;
        case Kind::exponential: return std::exp(x);
        case Kind::quadratic: return 2.0 * a_;
        case Kind::custom: return f_xx_(x, t);
    }
    return 0.0;
}

std::string RateMap::name() const {
    switch (kind_) {
        case Kind::linear: return "linear";
        case Kind::exponential: return "exp";
        case Kind::quadratic: return "quadratic";
        case Kind::custom: return "custom";
    }
    return "?";
}

// -------------------------------------------------------------- mapped model

MappedModel MappedModel::hull_white_equivalent(double alpha, double theta, double sigma,
                                               double r0) {
    // r = r0 + X reproduces dr = sigma dW + (theta - alpha r) dt when X carries
    // the shifted drift theta - alpha r0.
    return {sigma, theta - alpha * r0, alpha, r0, RateMap::linear(1.0 / r0)};
}

double MappedModel::r_star() const { return r0 * std::exp(theta / alpha); }

void MappedModel::validate() const {
    if (!(sigma > 0.0)) throw DomainError("mapped model: sigma must be positive");
    if (!(alpha > 0.0)) throw DomainError("mapped model: alpha must be positive");
    if (!(r0 > 0.0)) throw DomainError("mapped model: r0 must be positive");
}

// ------------------------------------------------------------ potential model

PotentialModel PotentialModel::harmonic(double omega, double v0) {
    const double w2 = omega * omega;
    PotentialModel pm;
    pm.V = [w2, v0](double x, double) { return 0.5 * w2 * x * x - v0; };
    pm.V_x = [w2](double x, double) { return w2 * x; };
    pm.V_xx = [w2](double, double) { return w2; };
    pm.name = "harmonic";
    return pm;
}

PotentialModel PotentialModel::constant(double value) {
    PotentialModel pm;
    pm.V = [value](double, double) { return value; };
    pm.V_x = [](double, double) { return 0.0; };
    pm.V_xx = [](double, double) { return 0.0; };
    pm.name = "constant";
    return pm;
}

double PotentialModel::derivative_mismatch(double x_lo, double x_hi, double t) const {
    double worst = 0.0;
    const int n = 41;
    for (int i = 0; i < n; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (n - 1);
        const double h = 1e-4 * (1.0 + std::abs(x));
        const double d1 = (V(x + h, t) - V(x - h, t)) / (2 * h);
        const double d2 = (V_x(x + h, t) - V_x(x - h, t)) / (2 * h);
        worst = std::max(worst, std::abs(d1 - V_x(x, t)) / (1.0 + std::abs(V_x(x, t))));
        worst = std::max(worst, std::abs(d2 - V_xx(x, t)) / (1.0 + std::abs(V_xx(x, t))));
    }
    return worst;
}

// -------------------------------------------------------------- root finding

namespace {

void push_unique(std::vector<double>& roots, double x) {
    for (double r : roots)
        if (std::abs(r - x) <= 1e-9 * (1.0 + std::abs(x))) return;
    roots.push_back(x);
}

// Newton polish; stops when the residual stops improving.
double polish(const std::function<double(double)>& h, const std::function<double(double)>& h_x,
              double x) {
    double r = h(x);
    for (int it = 0; it < 8 && r != 0.0; ++it) {
        const double d = h_x(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        const double xn = x - r / d;
        const double rn = h(xn);
        if (!(std::abs(rn) < std::abs(r))) break;
        x = xn;
        r = rn;
    }
    return x;
}

StateRoots scan_roots(const std::function<double(double)>& g,
                      const std::function<double(double)>& g_x, double target, double lo,
                      double hi, double& min_seen) {
    const int n = 4001;
    const double tol = 1e-12 * std::abs(target) + 1e-15;
    std::vector<double> xs(n), hs(n);
    bool flat = true;
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * i / (n - 1);
        const double gv = g(xs[i]);
        hs[i] = gv - target;
        if (std::isfinite(gv)) min_seen = std::min(min_seen, gv);
        if (!(std::abs(hs[i]) <= tol)) flat = false;
    }
    StateRoots out;
    if (flat) {
        out.roots.push_back(0.0);
        return out;
    }
    auto h = [&](double x) { return g(x) - target; };
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(hs[i])) continue;
        if (hs[i] == 0.0) {
            push_unique(out.roots, xs[i]);
            continue;
        }
        if (i + 1 < n && std::isfinite(hs[i + 1]) && hs[i + 1] != 0.0 &&
            std::signbit(hs[i]) != std::signbit(hs[i + 1])) {
            std::uintmax_t iters = 200;
            auto [a, b] = boost::math::tools::toms748_solve(
                h, xs[i], xs[i + 1], hs[i], hs[i + 1],
                boost::math::tools::eps_tolerance<double>(52), iters);
            push_unique(out.roots, polish(h, g_x, 0.5 * (a + b)));
            continue;
        }
        // Tangency: a local minimum of |h| that does not change sign.
        if (i > 0 && i + 1 < n && std::abs(hs[i]) < std::abs(hs[i - 1]) &&
            std::abs(hs[i]) <= std::abs(hs[i + 1]) && std::isfinite(hs[i - 1]) &&
            std::isfinite(hs[i + 1])) {
            const double sgn = hs[i] > 0 ? 1.0 : -1.0;
            auto [xm, hm] = boost::math::tools::brent_find_minima(
                [&](double x) { return sgn * h(x); }, xs[i - 1], xs[i + 1], 52);
            if (std::abs(hm) <= tol * 1e3 + 1e-14) {
                const double xr = polish(h, g_x, xm);
                if (std::abs(h(xr)) <= std::max(tol, std::abs(hm))) push_unique(out.roots, xr);
            }
        }
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

}  // namespace

StateRoots solve_level_set(const std::function<double(double)>& g,
                           const std::function<double(double)>& g_x, double target,
                           double half_width) {
    double min_seen = std::numeric_limits<double>::infinity();
    double width = half_width;
    for (int attempt = 0; attempt < 3; ++attempt, width *= 4.0) {
        auto found = scan_roots(g, g_x, target, -width, width, min_seen);
        if (!found.roots.empty()) return found;
    }
    throw NoRootError("no state solves the level-set equation for target " +
                          std::to_string(target) + "; attainable minimum " +
                          std::to_string(min_seen),
                      min_seen);
}

StateRoots solve_state_roots(const MappedModel& model, double z, double t) {
    model.validate();
    const RateMap& map = model.map;
    const double s = model.sigma;
    const double r0 = model.r0;
    auto h = [&](double x) { return r0 * map.f(s * x, t) - z; };
    auto h_x = [&](double x) { return r0 * s * map.f_x(s * x, t); };
    const double tol = 1e-12 * std::abs(z);

    StateRoots out;
    switch (map.kind()) {
        case RateMap::Kind::exponential:
            if (!(z > 0.0)) throw NoRootError("exponential map: z must be positive", 0.0);
            out.roots.push_back(std::log(z / r0) / s);
            break;
        case RateMap::Kind::linear:
            if (map.slope() == 0.0) {
                if (std::abs(z - r0) > tol) throw NoRootError("flat linear map: z != r0", r0);
                out.roots.push_back(0.0);
            } else {
                out.roots.push_back((z / r0 - 1.0) / map.slope() / s);
            }
            break;
        case RateMap::Kind::quadratic: {
            const double a = map.a(), b = map.b(), c = 1.0 - z / r0;
            if (a == 0.0) {
                if (b == 0.0) {
                    if (std::abs(z - r0) > tol) throw NoRootError("flat quadratic map", r0);
                    out.roots.push_back(0.0);
                } else {
                    out.roots.push_back(-c / b / s);
                }
                break;
            }
            const double disc = b * b - 4.0 * a * c;
            const double scale = b * b + 4.0 * std::abs(a * c);
            if (disc < -1e-14 * scale) {
                const double fmin = r0 * (1.0 - b * b / (4.0 * a));
                throw NoRootError("quadratic map: z=" + std::to_string(z) +
                                      " below attainable minimum " + std::to_string(fmin),
                                  fmin);
            }
            if (disc <= 1e-14 * scale) {
                out.roots.push_back(-b / (2.0 * a) / s);
            } else {
                const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b == 0.0 ? 1.0 : b));
                double u1 = q / a;
                double u2 = q != 0.0 ? c / q : -u1;
                if (u1 > u2) std::swap(u1, u2);
                out.roots.push_back(u1 / s);
                out.roots.push_back(u2 / s);
            }
            break;
        }
        case RateMap::Kind::custom: {
            auto g = [&](double x) { return r0 * map.f(s * x, t); };
            return solve_level_set(g, h_x, z, 50.0 / s);
        }
    }
    for (double& x : out.roots) {
        x = polish(h, h_x, x);
        if (std::abs(h(x)) > tol && std::abs(h_x(x)) > 0.0)
            throw NonConvergenceError("state root residual above tolerance", std::abs(h(x)));
    }
    return out;
}

}  // namespace pathint
