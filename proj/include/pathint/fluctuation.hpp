#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "pathint/classical.hpp"

namespace pathint {

/// Jacobi field phi of -phi'' + U phi = 0 with phi(t) = 0, phi'(t) = 1.
struct FluctuationResult {
    double phi_T = 0.0;
    double phi_dot_T = 0.0;
    std::vector<std::pair<double, double>> phi_samples;
    double min_phi_interior = 0.0;
};

/// Gelfand-Yaglom initial-value solve by RK4 on a uniform grid. Throws
/// FocalPointError if phi <= 0 anywhere on (t, T].
FluctuationResult gelfand_yaglom(const std::function<double(double)>& U, double t, double T,
                                 std::size_t grid_points);

/// U(s) = V_yy - rho_ys evaluated along the classical path.
std::function<double(double)> fluctuation_potential(const EffectiveProblem& p,
                                                    const ClassicalSolution& sol);

/// |1/phi(T) + d^2 S_cl / dy_start dy_end|, the mixed derivative taken by
/// central differences over four re-solved boundary-value problems.
double van_vleck_check(const EffectiveProblem& p, const ClassicalSolution& sol,
                       const FluctuationResult& fr, double h);

/// Default Van Vleck step, 1e-4 (1 + |y_end - y_start|).
double van_vleck_step(const EffectiveProblem& p);

}  // namespace pathint
