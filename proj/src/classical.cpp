#include "pathint/classical.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pathint/quadrature.hpp"

namespace pathint {

double EffectiveProblem::force(double y, double s) const {
    double g = V.d1(y, s);
    if (rho) g -= rho->d_s(y, s);
    return g;
}

double EffectiveProblem::force_dy(double y, double s) const {
    double g = V.d2(y, s);
    if (rho) g -= rho->d_ys(y, s);
    return g;
}

double EffectiveProblem::lagrangian(double y, double v, double s) const {
    double L = 0.5 * v * v + V.value(y, s);
    if (rho) L += rho->value(y, s) * v;
    return L;
}

double ClassicalSolution::position(double s) const {
    const double t0 = samples.front().s;
    const double h = step();
    const std::size_t last = samples.size() - 1;
    const double u = (s - t0) / h;
    std::size_t i = u <= 0.0 ? 0 : static_cast<std::size_t>(u);
    if (i >= last) i = last - 1;
    const PathSample& a = samples[i];
    const PathSample& b = samples[i + 1];
    const double x = (s - a.s) / h;
    const double x2 = x * x, x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * a.y + (x3 - 2 * x2 + x) * h * a.v + (-2 * x3 + 3 * x2) * b.y +
           (x3 - x2) * h * b.v;
}

namespace {

constexpr int kMaxNewton = 50;
constexpr double kTol = 1e-10;
constexpr int kScanCount = 21;

struct SegmentEnd {
    double y = 0.0, v = 0.0;
    // d(y_end, v_end) / d(y_start, v_start)
    double j00 = 1.0, j01 = 0.0, j10 = 0.0, j11 = 1.0;
    bool finite = true;
};

class Shooter {
public:
    Shooter(const EffectiveProblem& p, std::size_t grid_points)
        : p_(p), n_(grid_points), h_((p.T - p.t) / static_cast<double>(grid_points - 1)) {}

    double s_at(std::size_t i) const { return p_.t + h_ * static_cast<double>(i); }
    double h() const { return h_; }
    std::size_t grid_points() const { return n_; }

    SegmentEnd integrate(std::size_t i0, std::size_t i1, double y, double v, bool tangent,
                         std::vector<PathSample>* record) const {
        SegmentEnd e{y, v};
        const double h = h_;
        for (std::size_t i = i0; i < i1; ++i) {
            const double s = s_at(i);
            if (record) record->push_back({s, e.y, e.v});
            if (!tangent) {
                const double k1y = e.v, k1v = p_.force(e.y, s);
                const double k2y = e.v + 0.5 * h * k1v, k2v = p_.force(e.y + 0.5 * h * k1y, s + 0.5 * h);
                const double k3y = e.v + 0.5 * h * k2v, k3v = p_.force(e.y + 0.5 * h * k2y, s + 0.5 * h);
                const double k4y = e.v + h * k3v, k4v = p_.force(e.y + h * k3y, s + h);
                e.y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
                e.v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
            } else {
                step_with_tangent(e, s);
            }
            if (!std::isfinite(e.y) || !std::isfinite(e.v)) {
                e.finite = false;
                return e;
            }
        }
        return e;
    }

private:
    // RK4 on (y, v) augmented with the two columns of the variational system
    // d(dy)/ds = dv, d(dv)/ds = g_y dy.
    void step_with_tangent(SegmentEnd& e, double s) const {
        const double h = h_;
        struct D {
            double y, v, a0, b0, a1, b1;
        };
        auto rhs = [&](const D& x, double ss) {
            const double gy = p_.force_dy(x.y, ss);
            return D{x.v, p_.force(x.y, ss), x.b0, gy * x.a0, x.b1, gy * x.a1};
        };
        auto axpy = [](const D& x, double c, const D& k) {
            return D{x.y + c * k.y, x.v + c * k.v, x.a0 + c * k.a0, x.b0 + c * k.b0,
                     x.a1 + c * k.a1, x.b1 + c * k.b1};
        };
        const D x{e.y, e.v, e.j00, e.j10, e.j01, e.j11};
        const D k1 = rhs(x, s);
        const D k2 = rhs(axpy(x, 0.5 * h, k1), s + 0.5 * h);
        const D k3 = rhs(axpy(x, 0.5 * h, k2), s + 0.5 * h);
        const D k4 = rhs(axpy(x, h, k3), s + h);
        auto comb = [&](double D::*m) {
            return x.*m + h / 6.0 * (k1.*m + 2 * k2.*m + 2 * k3.*m + k4.*m);
        };
        e.y = comb(&D::y);
        e.v = comb(&D::v);
        e.j00 = comb(&D::a0);
        e.j10 = comb(&D::b0);
        e.j01 = comb(&D::a1);
        e.j11 = comb(&D::b1);
    }

    const EffectiveProblem& p_;
    std::size_t n_;
    double h_;
};

// Multiple-shooting layout: segment k covers grid indices [edge[k], edge[k+1]].
struct Layout {
    std::vector<std::size_t> edges;
    int segments() const { return static_cast<int>(edges.size()) - 1; }
};

Layout make_layout(const EffectiveProblem& p, std::size_t n) {
    // Growth rate of the Jacobi field, sampled along the straight line.
    double lambda2 = 0.0;
    for (int i = 0; i <= 32; ++i) {
        const double w = i / 32.0;
        const double s = p.t + w * (p.T - p.t);
        const double y = p.y_start + w * (p.y_end - p.y_start);
        const double g = std::abs(p.force_dy(y, s));
        if (std::isfinite(g)) lambda2 = std::max(lambda2, g);
    }
    const double growth = std::sqrt(lambda2) * (p.T - p.t);
    const std::size_t steps = n - 1;
    std::size_t k = static_cast<std::size_t>(std::ceil(growth / 2.5));
    k = std::clamp<std::size_t>(k, 1, std::max<std::size_t>(1, steps / 4));
    Layout layout;
    for (std::size_t j = 0; j <= k; ++j) layout.edges.push_back(j * steps / k);
    return layout;
}

struct NewtonOutcome {
    bool converged = false;
    std::vector<double> starts;  // v0, then (y_k, v_k) for k >= 1
    double terminal_residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

// Residual vector and (optionally) Jacobian of the multiple-shooting system.
bool residual(const Shooter& sh, const EffectiveProblem& p, const Layout& L,
              const std::vector<double>& u, Eigen::VectorXd& F, Eigen::MatrixXd* J) {
    const int K = L.segments();
    const int n = 2 * K - 1;
    F.resize(n);
    if (J) J->setZero(n, n);
    for (int k = 0; k < K; ++k) {
        const double y0 = k == 0 ? p.y_start : u[2 * k - 1];
        const double v0 = k == 0 ? u[0] : u[2 * k];
        const SegmentEnd e = sh.integrate(L.edges[k], L.edges[k + 1], y0, v0, J != nullptr, nullptr);
        if (!e.finite) return false;
        if (k < K - 1) {
            F[2 * k] = e.y - u[2 * k + 1];
            F[2 * k + 1] = e.v - u[2 * k + 2];
        } else {
            F[2 * k] = e.y - p.y_end;
        }
        if (!J) continue;
        const int rows = k < K - 1 ? 2 : 1;
        const double jm[2][2] = {{e.j00, e.j01}, {e.j10, e.j11}};
        for (int r = 0; r < rows; ++r) {
            if (k == 0) {
                (*J)(2 * k + r, 0) = jm[r][1];
            } else {
                (*J)(2 * k + r, 2 * k - 1) = jm[r][0];
                (*J)(2 * k + r, 2 * k) = jm[r][1];
            }
        }
        if (k < K - 1) {
            (*J)(2 * k, 2 * k + 1) = -1.0;
            (*J)(2 * k + 1, 2 * k + 2) = -1.0;
        }
    }
    return true;
}

double scaled_norm(const Eigen::VectorXd& F, const std::vector<double>& u, double y_end) {
    const int n = static_cast<int>(F.size());
    double worst = std::abs(F[n - 1]) / (1.0 + std::abs(y_end));
    for (int i = 0; i + 1 < n; ++i) worst = std::max(worst, std::abs(F[i]) / (1.0 + std::abs(u[i + 1])));
    return worst;
}

NewtonOutcome newton(const Shooter& sh, const EffectiveProblem& p, const Layout& L,
                     std::vector<double> u) {
    NewtonOutcome out;
    const int n = 2 * L.segments() - 1;
    Eigen::VectorXd F(n), Ft(n);
    Eigen::MatrixXd J(n, n);
    if (!residual(sh, p, L, u, F, &J)) return out;
    bool met = false;
    for (int it = 0; it < kMaxNewton; ++it) {
        out.iterations = it + 1;
        const double err = scaled_norm(F, u, p.y_end);
        out.terminal_residual = std::abs(F[n - 1]);
        if (err < kTol) {
            if (met) break;
            met = true;  // one polishing step after meeting the tolerance
        }
        const Eigen::VectorXd step = J.partialPivLu().solve(-F);
        if (!step.allFinite()) break;
        const double merit = F.squaredNorm();
        bool accepted = false;
        for (double lam = 1.0; lam > 1e-4; lam *= 0.5) {
            std::vector<double> trial = u;
            for (int i = 0; i < n; ++i) trial[i] += lam * step[i];
            if (residual(sh, p, L, trial, Ft, nullptr) && Ft.squaredNorm() <= merit) {
                u = std::move(trial);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (met) break;
            return out;
        }
        if (!residual(sh, p, L, u, F, &J)) return out;
    }
    out.terminal_residual = std::abs(F[n - 1]);
    out.converged = scaled_norm(F, u, p.y_end) < kTol;
    out.starts = std::move(u);
    return out;
}

ClassicalSolution assemble(const Shooter& sh, const EffectiveProblem& p, const Layout& L,
                           const NewtonOutcome& nw) {
    ClassicalSolution sol;
    sol.samples.reserve(sh.grid_points());
    const int K = L.segments();
    SegmentEnd e;
    for (int k = 0; k < K; ++k) {
        const double y0 = k == 0 ? p.y_start : nw.starts[2 * k - 1];
        const double v0 = k == 0 ? nw.starts[0] : nw.starts[2 * k];
        e = sh.integrate(L.edges[k], L.edges[k + 1], y0, v0, false, &sol.samples);
    }
    sol.samples.push_back({p.T, e.y, e.v});
    sol.initial_velocity = nw.starts[0];
    sol.terminal_residual = nw.terminal_residual;
    sol.newton_iterations = nw.iterations;
    sol.segments = K;
    sol.action = evaluate_action(p, sol);
    if (p.V.time_homogeneous && !p.rho)
        sol.energy = 0.5 * sol.samples.front().v * sol.samples.front().v -
                     p.V.value(sol.samples.front().y, p.t);
    return sol;
}

// Safeguarded Newton-bisection on the single-shooting terminal map.
std::optional<double> refine_bracket(const Shooter& sh, const EffectiveProblem& p, double a,
                                     double b, double Fa, double guess) {
    const std::size_t last = sh.grid_points() - 1;
    const double tol = kTol * (1.0 + std::abs(p.y_end));
    double x = (guess > std::min(a, b) && guess < std::max(a, b)) ? guess : 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const SegmentEnd e = sh.integrate(0, last, p.y_start, x, true, nullptr);
        if (!e.finite) {
            x = 0.5 * (a + b);
            continue;
        }
        const double F = e.y - p.y_end;
        if (std::abs(F) < tol) return x;
        if (std::signbit(F) == std::signbit(Fa)) {
            a = x;
            Fa = F;
        } else {
            b = x;
        }
        double xn = e.j01 != 0.0 ? x - F / e.j01 : 0.5 * (a + b);
        if (!(xn > std::min(a, b) && xn < std::max(a, b))) xn = 0.5 * (a + b);
        if (std::abs(b - a) < 1e-15 * (1.0 + std::abs(x))) return x;
        x = xn;
    }
    return std::nullopt;
}

// Uniqueness holds when the force never softens along the straight line.
bool convex_along_line(const EffectiveProblem& p) {
    for (int i = 0; i <= 32; ++i) {
        const double w = i / 32.0;
        const double g = p.force_dy(p.y_start + w * (p.y_end - p.y_start), p.t + w * (p.T - p.t));
        if (std::isfinite(g) && g < 0.0) return false;
    }
    return true;
}

// Coarse scan of initial velocities, each sign change of the miss refined.
std::vector<double> scan_velocities(const Shooter& sh, const EffectiveProblem& p, double slope) {
    const double c = std::abs(slope) + 1.0;
    const std::size_t last = sh.grid_points() - 1;
    std::vector<double> vs(kScanCount), Fs(kScanCount);
    for (int j = 0; j < kScanCount; ++j) {
        vs[j] = c * (-10.0 + 20.0 * j / (kScanCount - 1));
        const SegmentEnd e = sh.integrate(0, last, p.y_start, vs[j], false, nullptr);
        Fs[j] = e.finite ? e.y - p.y_end : std::numeric_limits<double>::quiet_NaN();
    }
    std::vector<double> found;
    for (int j = 0; j + 1 < kScanCount; ++j) {
        if (!std::isfinite(Fs[j]) || !std::isfinite(Fs[j + 1])) continue;
        if (std::signbit(Fs[j]) == std::signbit(Fs[j + 1]) && Fs[j + 1] != 0.0) continue;
        if (auto v = refine_bracket(sh, p, vs[j], vs[j + 1], Fs[j], slope)) {
            const bool dup = std::any_of(found.begin(), found.end(), [&](double w) {
                return std::abs(w - *v) <= 1e-6 * (1.0 + std::abs(w));
            });
            if (!dup) found.push_back(*v);
        }
    }
    return found;
}

ClassicalSolution single_or_throw(std::vector<ClassicalSolution> sols, double residual,
                                  const char* what) {
    if (sols.empty())
        throw NonConvergenceError(std::string("classical path: ") + what + " did not converge", residual);
    if (sols.size() > 1)
        throw MultipleSolutionsError("classical path: " + std::to_string(sols.size()) +
                                         " distinct solutions",
                                     std::move(sols));
    return std::move(sols.front());
}

}  // namespace

ClassicalSolution solve_classical_path(const EffectiveProblem& p, std::size_t grid_points) {
    if (grid_points < 64) throw DomainError("solve_classical_path: grid_points must be >= 64");
    if (!(p.T > p.t)) throw DomainError("solve_classical_path: need T > t");
    if (!p.V.value || !p.V.d1 || !p.V.d2) throw DomainError("solve_classical_path: potential incomplete");

    const Shooter sh(p, grid_points);
    const Layout L = make_layout(p, grid_points);
    const double slope = (p.y_end - p.y_start) / (p.T - p.t);

    if (L.segments() == 1) {
        std::vector<double> found = scan_velocities(sh, p, slope);
        if (found.empty()) found.push_back(slope);
        std::vector<ClassicalSolution> sols;
        double last_residual = std::numeric_limits<double>::infinity();
        for (double v0 : found) {
            const NewtonOutcome nw = newton(sh, p, L, {v0});
            last_residual = nw.terminal_residual;
            if (nw.converged) sols.push_back(assemble(sh, p, L, nw));
        }
        return single_or_throw(std::move(sols), last_residual, "shooting");
    }

    // Straight-line seed for every segment start.
    const int K = L.segments();
    std::vector<std::vector<double>> seeds(1, std::vector<double>(2 * K - 1));
    seeds[0][0] = slope;
    for (int k = 1; k < K; ++k) {
        seeds[0][2 * k - 1] = p.y_start + slope * (sh.s_at(L.edges[k]) - p.t);
        seeds[0][2 * k] = slope;
    }
    // A convex problem has one path; otherwise also seed from single-shot brackets.
    if (!convex_along_line(p)) {
        for (double v0 : scan_velocities(sh, p, slope)) {
            std::vector<double> u(2 * K - 1);
            u[0] = v0;
            double y = p.y_start, v = v0;
            bool ok = true;
            for (int k = 1; k < K && ok; ++k) {
                const SegmentEnd e = sh.integrate(L.edges[k - 1], L.edges[k], y, v, false, nullptr);
                ok = e.finite;
                y = e.y;
                v = e.v;
                u[2 * k - 1] = y;
                u[2 * k] = v;
            }
            if (ok) seeds.push_back(std::move(u));
        }
    }
    std::vector<ClassicalSolution> sols;
    std::vector<double> starts;
    double last_residual = std::numeric_limits<double>::infinity();
    for (auto& u : seeds) {
        const NewtonOutcome nw = newton(sh, p, L, std::move(u));
        last_residual = nw.terminal_residual;
        if (!nw.converged) continue;
        const double v0 = nw.starts[0];
        if (std::any_of(starts.begin(), starts.end(),
                        [&](double w) { return std::abs(w - v0) <= 1e-6 * (1.0 + std::abs(w)); }))
            continue;
        starts.push_back(v0);
        sols.push_back(assemble(sh, p, L, nw));
    }
    return single_or_throw(std::move(sols), last_residual, "multiple shooting");
}

double evaluate_action(const EffectiveProblem& p, const ClassicalSolution& sol) {
    const auto& smp = sol.samples;
    if (smp.size() < 2) throw GridMismatchError("evaluate_action: too few samples");
    const double span = p.T - p.t;
    if (std::abs(smp.front().s - p.t) > 1e-12 * (1.0 + std::abs(p.t)) ||
        std::abs(smp.back().s - p.T) > 1e-9 * (1.0 + std::abs(span)))
        throw GridMismatchError("evaluate_action: samples do not span the problem interval");
    std::vector<double> L(smp.size());
    for (std::size_t i = 0; i < smp.size(); ++i) L[i] = p.lagrangian(smp[i].y, smp[i].v, smp[i].s);
    return simpson(L, span / static_cast<double>(smp.size() - 1));
}

}  // namespace pathint
