#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "pathint/errors.hpp"
#include "pathint/oracles.hpp"
#include "pathint/quadrature.hpp"

namespace pathint {

void LatticeConfig::validate() const {
    if (n_time_slices < 1) throw ConfigError("lattice: n_time_slices must be >= 1");
    if (n_space < 101 || n_space % 2 == 0) throw ConfigError("lattice: n_space must be odd and >= 101");
    if (!(x_max > x_min)) throw ConfigError("lattice: need x_max > x_min");
}

LatticeConfig default_lattice_config(double x0, double t0, double tf, std::size_t n_time_slices) {
    const double half = 10.0 * std::sqrt(tf - t0) + 1.0;
    LatticeConfig c;
    c.n_time_slices = n_time_slices;
    c.x_min = x0 - half;
    c.x_max = x0 + half;
    c.n_space = 1001;
    return c;
}

namespace {

double gauss(double dx, double dt) {
    return std::exp(-dx * dx / (2.0 * dt)) / std::sqrt(2.0 * std::numbers::pi * dt);
}

// Weight of one slice leaving x at time s.
double slice_weight(const std::optional<DriftWeight>& rho, const ScalarField& V, double x,
                    double s, double dx, double dt) {
    double e = V(x, s) * dt;
    if (rho) e += rho->value(x, s) * dx;
    return std::exp(-e);
}

}  // namespace

LatticeResult lattice_expectation(const std::optional<DriftWeight>& rho, const ScalarField& V,
                                  double x0, double t0, std::optional<double> xf, double tf,
                                  const LatticeConfig& c, bool time_homogeneous) {
    c.validate();
    if (!(tf > t0)) throw DomainError("lattice_expectation: need tf > t0");
    const std::size_t N = c.n_time_slices;
    const std::size_t M = c.n_space;
    const double dt = (tf - t0) / static_cast<double>(N);
    const double h = (c.x_max - c.x_min) / static_cast<double>(M - 1);
    Eigen::VectorXd x(M);
    for (std::size_t i = 0; i < M; ++i) x[i] = c.x_min + h * static_cast<double>(i);
    const std::vector<double> sw = simpson_weights(M, h);

    LatticeResult out;
    if (N == 1 && xf) {
        out.value = gauss(*xf - x0, dt) * slice_weight(rho, V, x0, t0, *xf - x0, dt);
        return out;
    }

    // psi after the first slice, leaving the point x0.
    Eigen::VectorXd psi(M);
    for (std::size_t i = 0; i < M; ++i)
        psi[i] = gauss(x[i] - x0, dt) * slice_weight(rho, V, x0, t0, x[i] - x0, dt);

    const std::size_t full_steps = xf ? N - 2 : N - 1;
    Eigen::MatrixXd T(M, M);
    bool built = false;
    for (std::size_t k = 1; k <= full_steps; ++k) {
        const double s = t0 + dt * static_cast<double>(k);
        if (!built || !time_homogeneous) {
            for (std::size_t j = 0; j < M; ++j)
                for (std::size_t i = 0; i < M; ++i) {
                    const double d = x[i] - x[j];
                    T(i, j) = sw[j] * gauss(d, dt) * slice_weight(rho, V, x[j], s, d, dt);
                }
            built = true;
        }
        psi = T * psi;
    }

    if (xf) {
        const double s = t0 + dt * static_cast<double>(N - 1);
        double acc = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const double d = *xf - x[j];
            acc += sw[j] * gauss(d, dt) * slice_weight(rho, V, x[j], s, d, dt) * psi[j];
        }
        out.value = acc;
    } else {
        double acc = 0.0, edge = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            acc += sw[i] * psi[i];
            if (i < 4 || i + 4 >= M) edge += sw[i] * std::abs(psi[i]);
        }
        out.value = acc;
        if (edge > 1e-10)
            out.warnings.push_back("lattice: final-slice mass near the grid boundary exceeds 1e-10");
    }
    return out;
}

double richardson(double v_n, double v_2n, double v_4n) {
    return (8.0 * v_4n - 6.0 * v_2n + v_n) / 3.0;
}

LatticeResult lattice_expectation_extrapolated(const std::optional<DriftWeight>& rho,
                                               const ScalarField& V, double x0, double t0,
                                               std::optional<double> xf, double tf,
                                               const LatticeConfig& c, bool time_homogeneous) {
    LatticeResult out;
    double v[3];
    for (int k = 0; k < 3; ++k) {
        LatticeConfig ck = c;
        ck.n_time_slices = c.n_time_slices << k;
        LatticeResult r = lattice_expectation(rho, V, x0, t0, xf, tf, ck, time_homogeneous);
        v[k] = r.value;
        out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    out.value = richardson(v[0], v[1], v[2]);
    return out;
}

PriceResult lattice_price(const PotentialModel& pm, const PriceQuery& q, const LatticeConfig& c,
                          bool extrapolate) {
    if (q.T < q.t) throw DomainError("lattice_price: T < t");
    if (q.T == q.t) return make_price_result(1.0, q, Method::lattice);
    const StateRoots roots = solve_level_set([&](double x) { return pm.V(x, q.t); },
                                             [&](double x) { return pm.V_x(x, q.t); }, q.z, 50.0);
    double total = 0.0;
    std::vector<std::string> warnings;
    for (double x_r : roots.roots) {
        LatticeConfig cr = c;
        const double centre = 0.5 * (c.x_min + c.x_max);
        cr.x_min += x_r - centre;
        cr.x_max += x_r - centre;
        const LatticeResult r =
            extrapolate ? lattice_expectation_extrapolated(std::nullopt, pm.V, x_r, q.t, std::nullopt, q.T, cr, pm.time_homogeneous)
                        : lattice_expectation(std::nullopt, pm.V, x_r, q.t, std::nullopt, q.T, cr, pm.time_homogeneous);
        total += r.value;
        warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    PriceResult out = make_price_result(total / static_cast<double>(roots.roots.size()), q,
                                        Method::lattice);
    out.diagnostics.roots_summed = static_cast<int>(roots.roots.size());
    out.diagnostics.warnings = std::move(warnings);
    return out;
}

}  // namespace pathint
