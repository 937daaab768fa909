#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pathint/errors.hpp"
#include "pathint/oracles.hpp"

namespace pathint {

void PdeConfig::validate() const {
    if (n_z < 100 || n_t < 100) throw ConfigError("pde: n_z and n_t must be >= 100");
    if (!(z_max > z_min)) throw ConfigError("pde: need z_max > z_min");
}

namespace {

using Coef = std::function<double(double z, double s)>;

struct Problem {
    Coef nu, var;             // drift and squared volatility of r
    bool degenerate_lower = false;  // var vanishes at z_min: apply the PDE there with an upwind derivative
};

// Thomas algorithm; a sub-, b main, c super-diagonal.
void solve_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                       std::vector<double>& d) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

double solve(const Problem& pb, const PriceQuery& q, const PdeConfig& c) {
    c.validate();
    if (q.z < c.z_min || q.z > c.z_max) throw DomainError("pde: z outside the grid");
    // Put z on a node by adjusting the step.
    std::size_t n = c.n_z;
    double h = (c.z_max - c.z_min) / static_cast<double>(n - 1);
    const std::size_t iz = static_cast<std::size_t>(std::llround((q.z - c.z_min) / h));
    if (iz > 0) h = (q.z - c.z_min) / static_cast<double>(iz);
    if (iz == 0 && !pb.degenerate_lower) throw DomainError("pde: z sits on the lower boundary");
    if (iz + 2 >= n) throw DomainError("pde: z too close to the upper boundary");

    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = c.z_min + h * static_cast<double>(i);

    const double theta = c.scheme == PdeScheme::crank_nicolson ? 0.5 : 1.0;
    const double tau_end = q.T - q.t;
    const double dtau = tau_end / static_cast<double>(c.n_t);

    // Operator rows L v at calendar time s.
    std::vector<double> la(n), lb(n), lc(n);
    auto build = [&](double s) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double nu = pb.nu(z[i], s), v2 = pb.var(z[i], s);
            la[i] = 0.5 * v2 / (h * h) - 0.5 * nu / h;
            lb[i] = -v2 / (h * h) - z[i];
            lc[i] = 0.5 * v2 / (h * h) + 0.5 * nu / h;
        }
        if (pb.degenerate_lower) {
            const double nu = pb.nu(z[0], s);
            la[0] = 0.0;
            lb[0] = -nu / h - z[0];
            lc[0] = nu / h;
        }
    };

    std::vector<double> v(n, 1.0), a(n), b(n), cc(n), d(n);
    for (std::size_t k = 0; k < c.n_t; ++k) {
        const double s_old = q.T - dtau * static_cast<double>(k);
        const double s_new = q.T - dtau * static_cast<double>(k + 1);
        build(s_old);
        const std::size_t first = pb.degenerate_lower ? 0 : 1;
        for (std::size_t i = first; i + 1 < n; ++i) {
            const double left = i > 0 ? la[i] * v[i - 1] : 0.0;
            d[i] = v[i] + (1.0 - theta) * dtau * (left + lb[i] * v[i] + lc[i] * v[i + 1]);
        }
        build(s_new);
        for (std::size_t i = first; i + 1 < n; ++i) {
            a[i] = -theta * dtau * la[i];
            b[i] = 1.0 - theta * dtau * lb[i];
            cc[i] = -theta * dtau * lc[i];
        }
        // Linear extrapolation v0 - 2 v1 + v2 = 0, with v2 eliminated through row 1.
        if (!pb.degenerate_lower) {
            a[0] = 0.0;
            b[0] = 1.0 - a[1] / cc[1];
            cc[0] = -2.0 - b[1] / cc[1];
            d[0] = -d[1] / cc[1];
        }
        // Same at the top, eliminating v_{n-3} through row n-2.
        const std::size_t m = n - 1;
        a[m] = -2.0 - b[m - 1] / a[m - 1];
        b[m] = 1.0 - cc[m - 1] / a[m - 1];
        cc[m] = 0.0;
        d[m] = -d[m - 1] / a[m - 1];
        solve_tridiagonal(a, b, cc, d);
        v = d;
    }
    const double out = v[iz];
    if (!(out > 0.0) || out > 1.05 || !std::isfinite(out))
        throw InstabilityError("pde: value " + std::to_string(out) + " outside (0, 1.05]");
    return out;
}

}  // namespace

PdeConfig default_pde_config(const HullWhiteParams& p, const PriceQuery& q) {
    const double span = q.T - q.t;
    const double sd = p.sigma.max_value() * std::sqrt(span);
    double spread = std::max(std::abs(p.theta.max_value()), std::abs(p.theta.min_value())) * span;
    if (p.alpha.is_constant() && p.theta.is_constant() && p.alpha(0.0) > 0.0)
        spread = std::abs(p.theta(0.0) / p.alpha(0.0) - q.z);
    PdeConfig c;
    c.z_min = q.z - 8.0 * sd - spread - 0.01;
    c.z_max = q.z + 8.0 * sd + spread + 0.01;
    c.n_z = 801;
    c.n_t = std::max<std::size_t>(400, static_cast<std::size_t>(std::ceil(100.0 * span)));
    return c;
}

PdeConfig default_pde_config(const MappedModel& m, const PriceQuery& q) {
    const double span = q.T - q.t;
    const double sd = m.sigma * std::sqrt(std::min(span, 1.0 / (2.0 * m.alpha)) + 1e-300);
    PdeConfig c;
    c.n_z = 801;
    c.n_t = std::max<std::size_t>(400, static_cast<std::size_t>(std::ceil(100.0 * span)));
    const StateRoots roots = solve_state_roots(m, q.z, q.t);
    double X = 0.0;
    for (double x : roots.roots) X = std::max(X, std::abs(m.sigma * x));
    const double lvl = m.theta / m.alpha;
    const double reach = X + std::abs(lvl) + 8.0 * sd + 0.1;
    switch (m.map.kind()) {
        case RateMap::Kind::linear: {
            const double k = m.r0 * std::abs(m.map.slope());
            c.z_min = q.z - k * reach;
            c.z_max = q.z + k * reach;
            break;
        }
        case RateMap::Kind::exponential:
            c.z_min = m.r0 * std::exp(std::log(q.z / m.r0) - reach);
            c.z_max = m.r0 * std::exp(std::log(q.z / m.r0) + reach);
            break;
        case RateMap::Kind::quadratic: {
            const double a = m.map.a(), b = m.map.b();
            const double y = reach + std::abs(b / (2.0 * a));
            c.z_min = m.r0 * (1.0 - b * b / (4.0 * a));
            c.z_max = m.r0 * (1.0 - b * b / (4.0 * a) + a * y * y);
            break;
        }
        case RateMap::Kind::custom:
            throw DomainError("pde: custom maps have no short-rate SDE here");
    }
    return c;
}

PriceResult pde_price(const HullWhiteParams& p, const PriceQuery& q, const PdeConfig& c) {
    p.validate();
    if (q.T < q.t) throw DomainError("pde_price: T < t");
    if (q.t < 0.0 || q.T > p.horizon()) throw DomainError("pde_price: curves do not cover [t, T]");
    if (q.T == q.t) return make_price_result(1.0, q, Method::pde);
    Problem pb;
    pb.nu = [&p](double z, double s) { return p.theta(s) - p.alpha(s) * z; };
    pb.var = [&p](double, double s) { return p.sigma(s) * p.sigma(s); };
    return make_price_result(solve(pb, q, c), q, Method::pde);
}

PriceResult pde_price(const MappedModel& m, const PriceQuery& q, const PdeConfig& c) {
    m.validate();
    if (q.T < q.t) throw DomainError("pde_price: T < t");
    if (q.T == q.t) return make_price_result(1.0, q, Method::pde);
    if (!m.map.time_homogeneous()) throw DomainError("pde: time-dependent maps are not supported");
    const double r0 = m.r0, s = m.sigma, th = m.theta, al = m.alpha;
    Problem pb;
    switch (m.map.kind()) {
        case RateMap::Kind::linear: {
            const double k = m.map.slope();
            // dr = r0 k dX with X = (r/r0 - 1)/k
            pb.nu = [=](double z, double) { return r0 * k * th - al * (z - r0); };
            pb.var = [=](double, double) { return r0 * k * s * r0 * k * s; };
            break;
        }
        case RateMap::Kind::exponential:
            pb.nu = [=](double z, double) { return z * (th - al * std::log(z / r0) + 0.5 * s * s); };
            pb.var = [=](double z, double) { return s * s * z * z; };
            break;
        case RateMap::Kind::quadratic: {
            const double a = m.map.a(), b = m.map.b();
            const double lin = th + al * b / (2.0 * a);
            if (std::abs(lin) > 1e-12 * (1.0 + std::abs(th)))
                throw DomainError("pde: quadratic map is Markov in r only when theta + alpha b/(2a) = 0");
            const double c0 = 1.0 - b * b / (4.0 * a);
            pb.nu = [=](double z, double) {
                const double u = std::max(0.0, z / r0 - c0);
                return r0 * (2.0 * al * c0 + a * s * s + 2.0 * std::sqrt(a) * lin * std::sqrt(u) -
                             2.0 * al * z / r0);
            };
            pb.var = [=](double z, double) {
                const double u = std::max(0.0, z / r0 - c0);
                return 4.0 * a * s * s * r0 * r0 * u;
            };
            pb.degenerate_lower = true;
            if (std::abs(c.z_min - r0 * c0) > 1e-12 * r0)
                throw DomainError("pde: quadratic grid must start at the minimal rate");
            break;
        }
        case RateMap::Kind::custom:
            throw DomainError("pde: custom maps have no short-rate SDE here");
    }
    return make_price_result(solve(pb, q, c), q, Method::pde);
}

}  // namespace pathint
