#include "pathint/fluctuation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pathint {

FluctuationResult gelfand_yaglom(const std::function<double(double)>& U, double t, double T,
                                 std::size_t grid_points) {
    if (grid_points < 64) throw DomainError("gelfand_yaglom: grid_points must be >= 64");
    if (!(T > t)) throw DomainError("gelfand_yaglom: need T > t");
    const double h = (T - t) / static_cast<double>(grid_points - 1);

    FluctuationResult r;
    r.phi_samples.reserve(grid_points);
    r.min_phi_interior = std::numeric_limits<double>::infinity();
    double phi = 0.0, dphi = 1.0;
    r.phi_samples.emplace_back(t, phi);
    for (std::size_t i = 0; i + 1 < grid_points; ++i) {
        const double s = t + h * static_cast<double>(i);
        const double um = U(s + 0.5 * h);
        const double k1p = dphi, k1d = U(s) * phi;
        const double k2p = dphi + 0.5 * h * k1d, k2d = um * (phi + 0.5 * h * k1p);
        const double k3p = dphi + 0.5 * h * k2d, k3d = um * (phi + 0.5 * h * k2p);
        const double k4p = dphi + h * k3d, k4d = U(s + h) * (phi + h * k3p);
        phi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        dphi += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
        const double s1 = i + 2 == grid_points ? T : s + h;
        if (!std::isfinite(phi) || phi <= 0.0)
            throw FocalPointError("gelfand_yaglom: focal point near s=" + std::to_string(s1), s1);
        r.phi_samples.emplace_back(s1, phi);
        r.min_phi_interior = std::min(r.min_phi_interior, phi);
    }
    r.phi_T = phi;
    r.phi_dot_T = dphi;
    return r;
}

std::function<double(double)> fluctuation_potential(const EffectiveProblem& p,
                                                    const ClassicalSolution& sol) {
    return [&p, &sol](double s) { return p.force_dy(sol.position(s), s); };
}

double van_vleck_step(const EffectiveProblem& p) {
    return 1e-4 * (1.0 + std::abs(p.y_end - p.y_start));
}

double van_vleck_check(const EffectiveProblem& p, const ClassicalSolution& sol,
                       const FluctuationResult& fr, double h) {
    const std::size_t n = sol.samples.size();
    auto action_at = [&](double ds, double de) {
        EffectiveProblem q = p;
        q.y_start += ds;
        q.y_end += de;
        return solve_classical_path(q, n).action;
    };
    const double mixed =
        (action_at(h, h) - action_at(h, -h) - action_at(-h, h) + action_at(-h, -h)) / (4.0 * h * h);
    return std::abs(1.0 / fr.phi_T + mixed);
}

}  // namespace pathint
