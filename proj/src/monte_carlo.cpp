#include <omp.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "pathint/errors.hpp"
#include "pathint/oracles.hpp"

namespace pathint {

void McConfig::validate() const {
    if (n_paths < 1000) throw ConfigError("mc: n_paths must be >= 1000");
    if (n_steps < 50) throw ConfigError("mc: n_steps must be >= 50");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-based stream: unit u of seed s always sees the same numbers.
class Substream {
public:
    using result_type = std::uint64_t;
    Substream(std::uint64_t seed, std::uint64_t unit)
        : state_(splitmix64(seed ^ splitmix64(unit + 1))) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ull;
        return splitmix64(state_);
    }

private:
    std::uint64_t state_;
};

// Discount factor of one path driven by standard normals z[0..n_steps) times sign.
using PathFn = std::function<double(const std::vector<double>& z, double sign)>;

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

McEstimate run_paths(const PathFn& path, const McConfig& c, const McRunOptions& run) {
    c.validate();
    const bool anti = c.antithetic;
    const std::size_t n_units = anti ? (c.n_paths + 1) / 2 : c.n_paths;
    const std::size_t n_steps = c.n_steps;

    auto unit_value = [&](std::size_t u, std::vector<double>& z) {
        Substream rng(c.seed, u);
        std::normal_distribution<double> normal;
        for (std::size_t k = 0; k < n_steps; ++k) z[k] = normal(rng);
        return anti ? 0.5 * (path(z, 1.0) + path(z, -1.0)) : path(z, 1.0);
    };

    // Deviations from the first unit keep the variance exact (zero when paths coincide).
    std::vector<double> buf(n_steps);
    const double shift = unit_value(0, buf);

    constexpr std::size_t block = 1024;
    const std::size_t n_blocks = (n_units + block - 1) / block;
    std::vector<double> s1(n_blocks, 0.0), s2(n_blocks, 0.0);
    auto do_block = [&](std::size_t b, std::vector<double>& z) {
        double a1 = 0.0, a2 = 0.0;
        const std::size_t end = std::min(n_units, (b + 1) * block);
        for (std::size_t u = b * block; u < end; ++u) {
            const double d = unit_value(u, z) - shift;
            a1 += d;
            a2 += d * d;
        }
        s1[b] = a1;
        s2[b] = a2;
    };

    if (run.execution == Execution::serial) {
        for (std::size_t b = 0; b < n_blocks; ++b) do_block(b, buf);
    } else {
        const int workers = run.workers > 0 ? run.workers : default_workers();
#pragma omp parallel num_threads(workers)
        {
            std::vector<double> z(n_steps);
#pragma omp for schedule(dynamic, 4)
            for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b)
                do_block(static_cast<std::size_t>(b), z);
        }
    }

    double t1 = 0.0, t2 = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        t1 += s1[b];
        t2 += s2[b];
    }
    const double n = static_cast<double>(n_units);
    const double mean_dev = t1 / n;
    const double var = n > 1 ? std::max(0.0, (t2 - n * mean_dev * mean_dev) / (n - 1.0)) : 0.0;
    return {shift + mean_dev, std::sqrt(var / n)};
}

struct OuStep {
    double decay, level, sd;
};

// Exact transition of dX = s dW + (th - a X) dt over dt.
OuStep ou_step(double a, double th, double s, double dt) {
    if (a == 0.0) return {1.0, 0.0, s * std::sqrt(dt)};
    const double decay = std::exp(-a * dt);
    return {decay, th / a, s * std::sqrt(-std::expm1(-2.0 * a * dt) / (2.0 * a))};
}

PriceResult finish(const McEstimate& e, const PriceQuery& q) {
    PriceResult r = make_price_result(e.mean, q, Method::mc);
    r.diagnostics.std_error = e.std_error;
    return r;
}

}  // namespace

PriceResult mc_price(const HullWhiteParams& p, const PriceQuery& q, const McConfig& c,
                     const McRunOptions& run) {
    p.validate();
    c.validate();
    if (q.T < q.t) throw DomainError("mc_price: T < t");
    if (q.t < 0.0 || q.T > p.horizon()) throw DomainError("mc_price: curves do not cover [t, T]");
    if (q.T == q.t) {
        PriceResult r = make_price_result(1.0, q, Method::mc);
        r.diagnostics.std_error = 0.0;
        return r;
    }
    const std::size_t n = c.n_steps;
    const double dt = (q.T - q.t) / static_cast<double>(n);
    const bool constant = p.sigma.is_constant() && p.theta.is_constant() && p.alpha.is_constant();

    PathFn path;
    if (constant) {
        const OuStep st = ou_step(p.alpha(q.t), p.theta(q.t), p.sigma(q.t), dt);
        const double drift = p.alpha(q.t) == 0.0 ? p.theta(q.t) * dt : 0.0;
        path = [=, z0 = q.z](const std::vector<double>& z, double sign) {
            double r = z0, integral = 0.5 * z0;
            for (std::size_t k = 0; k < n; ++k) {
                r = st.level + (r - st.level) * st.decay + drift + st.sd * sign * z[k];
                integral += k + 1 == n ? 0.5 * r : r;
            }
            return std::exp(-integral * dt);
        };
    } else {
        std::vector<double> th(n), al(n), sg(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double s = q.t + dt * static_cast<double>(k);
            th[k] = p.theta(s);
            al[k] = p.alpha(s);
            sg[k] = p.sigma(s);
        }
        const double sq = std::sqrt(dt);
        path = [=, z0 = q.z](const std::vector<double>& z, double sign) {
            double r = z0, integral = 0.5 * z0;
            for (std::size_t k = 0; k < n; ++k) {
                r += (th[k] - al[k] * r) * dt + sg[k] * sq * sign * z[k];
                integral += k + 1 == n ? 0.5 * r : r;
            }
            return std::exp(-integral * dt);
        };
    }
    return finish(run_paths(path, c, run), q);
}

PriceResult mc_price(const MappedModel& m, const PriceQuery& q, const McConfig& c,
                     const McRunOptions& run) {
    m.validate();
    c.validate();
    if (q.T < q.t) throw DomainError("mc_price: T < t");
    if (q.T == q.t) {
        PriceResult r = make_price_result(1.0, q, Method::mc);
        r.diagnostics.std_error = 0.0;
        return r;
    }
    const StateRoots roots = solve_state_roots(m, q.z, q.t);
    const std::size_t n = c.n_steps;
    const double dt = (q.T - q.t) / static_cast<double>(n);
    const OuStep st = ou_step(m.alpha, m.theta, m.sigma, dt);
    const RateMap map = m.map;
    const double r0 = m.r0, t0 = q.t;

    double mean = 0.0, var = 0.0;
    for (double x_star : roots.roots) {
        const double X0 = m.sigma * x_star;
        PathFn path = [=](const std::vector<double>& z, double sign) {
            double X = X0, integral = 0.5 * r0 * map.f(X0, t0);
            for (std::size_t k = 0; k < n; ++k) {
                X = st.level + (X - st.level) * st.decay + st.sd * sign * z[k];
                const double r = r0 * map.f(X, t0 + dt * static_cast<double>(k + 1));
                integral += k + 1 == n ? 0.5 * r : r;
            }
            return std::exp(-integral * dt);
        };
        const McEstimate e = run_paths(path, c, run);
        mean += e.mean;
        var += e.std_error * e.std_error;
    }
    const double k = static_cast<double>(roots.roots.size());
    return finish({mean / k, std::sqrt(var) / k}, q);
}

}  // namespace pathint
