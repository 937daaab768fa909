#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pathint/errors.hpp"
#include "pathint/models.hpp"

namespace pathint {

/// V(y, s) with its first two y-derivatives.
struct Potential {
    ScalarField value, d1, d2;
    bool time_homogeneous = false;
};

/// Weight rho(y, s) of the rho * y' term, with d rho/ds and d^2 rho/dy ds.
struct DriftWeight {
    ScalarField value, d_s, d_ys;
};

/// Effective Lagrangian L = y'^2/2 + rho(y,s) y' + V(y,s) on [t, T] with
/// Dirichlet endpoints.
struct EffectiveProblem {
    Potential V;
    std::optional<DriftWeight> rho;
    double t = 0.0;
    double T = 1.0;
    double y_start = 0.0;
    double y_end = 0.0;

    /// Force of the Euler-Lagrange equation y'' = dV/dy - d rho/ds.
    double force(double y, double s) const;
    double force_dy(double y, double s) const;
    double lagrangian(double y, double v, double s) const;
};

struct PathSample {
    double s, y, v;
};

struct ClassicalSolution {
    std::vector<PathSample> samples;  ///< uniform grid over [t, T]
    double action = 0.0;
    double initial_velocity = 0.0;
    std::optional<double> energy;  ///< first integral y'^2/2 - V, time-homogeneous case only
    double terminal_residual = 0.0;
    int newton_iterations = 0;
    int segments = 1;

    double step() const { return samples[1].s - samples[0].s; }
    double terminal_velocity() const { return samples.back().v; }
    /// Cubic Hermite interpolation of the path between samples.
    double position(double s) const;
};

/// Raised when the bracket scan converges to more than one classical path.
class MultipleSolutionsError : public Error {
public:
    MultipleSolutionsError(const std::string& what, std::vector<ClassicalSolution> solutions)
        : Error(ErrorKind::multiple_solutions, what), solutions_(std::move(solutions)) {}
    const std::vector<ClassicalSolution>& solutions() const { return solutions_; }

private:
    std::vector<ClassicalSolution> solutions_;
};

/// Solves the Euler-Lagrange boundary-value problem by shooting on the
/// initial velocity with fixed-step RK4 and a damped Newton iteration driven
/// by the variational equations.
///
/// Intervals longer than a few e-folds of the Jacobi field are split into
/// segments solved simultaneously (multiple shooting); a single segment is
/// plain shooting, seeded by a velocity bracket scan.
ClassicalSolution solve_classical_path(const EffectiveProblem& p, std::size_t grid_points);

/// Composite Simpson integral of the effective Lagrangian along `sol`.
double evaluate_action(const EffectiveProblem& p, const ClassicalSolution& sol);

}  // namespace pathint
