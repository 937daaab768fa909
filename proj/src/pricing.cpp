#include "pathint/pricing.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "pathint/fluctuation.hpp"
#include "pathint/quadrature.hpp"

namespace pathint {

std::string to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::semiclassical: return "semiclassical";
        case Method::mc: return "mc";
        case Method::lattice: return "lattice";
        case Method::pde: return "pde";
    }
    return "?";
}

std::optional<Method> method_from_string(const std::string& s) {
    for (Method m : {Method::exact, Method::semiclassical, Method::mc, Method::lattice, Method::pde})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

double yield_from_price(double v, double t, double T) {
    if (!(v > 0.0)) throw DomainError("yield_from_price: price must be positive");
    if (!(T > t)) throw DomainError("yield_from_price: need T > t");
    return -std::log(v) / (T - t);
}

PriceResult make_price_result(double price, const PriceQuery& q, Method method) {
    PriceResult r;
    r.price = price;
    r.method = method;
    r.yield = q.T > q.t ? yield_from_price(price, q.t, q.T) : 0.0;
    return r;
}

// ------------------------------------------------------------- Hull-White

double hull_white_constant_closed_form(double alpha, double theta, double sigma, double z,
                                       double tau) {
    if (alpha == 0.0)
        return std::exp(-z * tau - 0.5 * theta * tau * tau + sigma * sigma * tau * tau * tau / 6.0);
    const double e = -std::expm1(-alpha * tau) / alpha;
    return std::exp(-z * e - theta / alpha * (tau - e) +
                    sigma * sigma / (2.0 * alpha * alpha) * (tau - e - 0.5 * alpha * e * e));
}

PriceResult price_hull_white_exact(const HullWhiteParams& p, const PriceQuery& q) {
    p.validate();
    if (q.T < q.t) throw DomainError("price_hull_white_exact: T < t");
    if (q.t < 0.0 || q.T > p.horizon()) throw DomainError("price_hull_white_exact: curves do not cover [t, T]");
    if (q.T == q.t) return make_price_result(1.0, q, Method::exact);

    std::vector<double> breaks;
    for (const auto* c : {&p.sigma, &p.theta, &p.alpha})
        if (!c->is_constant() || c->knots().size() > 1)
            breaks.insert(breaks.end(), c->knots().begin(), c->knots().end());

    auto integrand = [&](double s) {
        const double e = eta(p.alpha, s, q.T, 1e-13);
        const double sg = p.sigma(s);
        return e * p.theta(s) - 0.5 * e * e * sg * sg;
    };
    const double drift = integrate_adaptive(integrand, q.t, q.T, 1e-13, breaks).value;
    const double exponent = -q.z * eta(p.alpha, q.t, q.T, 1e-13) - drift;
    return make_price_result(std::exp(exponent), q, Method::exact);
}

// ------------------------------------------------------ endpoint integral

namespace {

struct NodeValue {
    double log_value = 0.0;
    double phi_T = 1.0;
    double phi_dot_T = 0.0;
    double y_dot_T = 0.0;
};

// Integrand over the free endpoint y': exp(log_weight(y') - S_cl(y') - ln(2 pi phi)/2).
// log_weight(y') = weight_const - weight_quad y'^2 / 2.
struct EndpointSpec {
    std::function<EffectiveProblem(double)> problem;
    double weight_quad = 0.0;
    double weight_const = 0.0;
    double start_guess = 0.0;
    std::size_t grid_points = 0;
};

NodeValue evaluate_node(const EndpointSpec& spec, double y) {
    const EffectiveProblem p = spec.problem(y);
    std::vector<ClassicalSolution> saddles;
    try {
        saddles.push_back(solve_classical_path(p, spec.grid_points));
    } catch (const MultipleSolutionsError& e) {
        saddles = e.solutions();
    } catch (const NonConvergenceError& e) {
        throw NonConvergenceError(std::string(e.what()) + " at endpoint node y'=" + std::to_string(y),
                                  e.last_residual());
    }
    // Sum over saddles; the least-action one drives the mode search.
    NodeValue out;
    double best_action = std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    for (const ClassicalSolution& sol : saddles) {
        const FluctuationResult fr =
            gelfand_yaglom(fluctuation_potential(p, sol), p.t, p.T, spec.grid_points);
        logs.push_back(-sol.action - 0.5 * std::log(2.0 * std::numbers::pi * fr.phi_T));
        if (sol.action < best_action) {
            best_action = sol.action;
            out.phi_T = fr.phi_T;
            out.phi_dot_T = fr.phi_dot_T;
            out.y_dot_T = sol.terminal_velocity() + (p.rho ? p.rho->value(p.y_end, p.T) : 0.0);
        }
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - top);
    out.log_value = top + std::log(acc) + spec.weight_const - 0.5 * spec.weight_quad * y * y;
    return out;
}

void evaluate_nodes(const EndpointSpec& spec, const std::vector<double>& ys,
                    std::vector<NodeValue>& out, Execution exec, int workers) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(ys.size());
    out.assign(ys.size(), NodeValue{});
    std::vector<std::exception_ptr> errors(ys.size());
    if (exec == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                out[i] = evaluate_node(spec, ys[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                out[i] = evaluate_node(spec, ys[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct EndpointIntegral {
    double log_value = 0.0;
    double rel_error = 0.0;
    double phi_min = std::numeric_limits<double>::infinity();
    double phi_max = 0.0;
    int nodes = 0;
};

EndpointIntegral integrate_endpoint(const EndpointSpec& spec, const SemiclassicalOptions& opt) {
    const int workers = opt.workers > 0 ? opt.workers : default_workers();

    // Mode and width of the integrand from the momentum identity dS/dy_end = y'(T)
    // and d y'(T)/dy_end = phi'(T)/phi(T).
    double mu = spec.start_guess;
    NodeValue at_mode = evaluate_node(spec, mu);
    double curvature = -spec.weight_quad - at_mode.phi_dot_T / at_mode.phi_T;
    for (int it = 0; it < 40; ++it) {
        const double slope = -spec.weight_quad * mu - at_mode.y_dot_T;
        if (!(curvature < 0.0)) break;
        double step = -slope / curvature;
        const double cap = 5.0 / std::sqrt(-curvature);
        step = std::clamp(step, -cap, cap);
        mu += step;
        at_mode = evaluate_node(spec, mu);
        curvature = -spec.weight_quad - at_mode.phi_dot_T / at_mode.phi_T;
        if (std::abs(step) < 1e-10 * (1.0 + std::abs(mu))) break;
    }
    if (!(curvature < 0.0))
        throw NonConvergenceError("endpoint integral: integrand is not log-concave at its mode",
                                  curvature);
    const double width = 1.0 / std::sqrt(-curvature);
    const double lo = mu - 10.0 * width;
    const double hi = mu + 10.0 * width;
    const double ref = at_mode.log_value;

    std::size_t n = std::max<std::size_t>(8, opt.quad_nodes);
    if (n % 2) ++n;
    std::vector<double> ys(n + 1);
    for (std::size_t i = 0; i <= n; ++i) ys[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    std::vector<NodeValue> vals;
    evaluate_nodes(spec, ys, vals, opt.execution, workers);

    EndpointIntegral out;
    auto simpson_sum = [&](const std::vector<NodeValue>& v, std::size_t intervals) {
        std::vector<double> f(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) f[i] = std::exp(v[i].log_value - ref);
        return simpson(f, (hi - lo) / static_cast<double>(intervals));
    };
    double current = simpson_sum(vals, n);
    double change = std::numeric_limits<double>::infinity();
    const std::size_t n_max = 1 << 14;
    while (n < n_max) {
        const std::size_t n2 = 2 * n;
        std::vector<double> fresh;
        for (std::size_t i = 1; i < n2; i += 2)
            fresh.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n2));
        std::vector<NodeValue> fresh_vals;
        evaluate_nodes(spec, fresh, fresh_vals, opt.execution, workers);
        std::vector<NodeValue> merged(n2 + 1);
        for (std::size_t i = 0; i <= n; ++i) merged[2 * i] = vals[i];
        for (std::size_t i = 0; i < fresh_vals.size(); ++i) merged[2 * i + 1] = fresh_vals[i];
        vals = std::move(merged);
        n = n2;
        const double next = simpson_sum(vals, n);
        change = std::abs(next - current) / std::abs(next);
        current = next;
        if (change < opt.quad_rel_tol) break;
    }
    if (!(change < opt.quad_rel_tol))
        throw NonConvergenceError("endpoint integral: Simpson refinement did not settle", change);
    for (const NodeValue& v : vals) {
        out.phi_min = std::min(out.phi_min, v.phi_T);
        out.phi_max = std::max(out.phi_max, v.phi_T);
    }
    out.log_value = ref + std::log(current);
    out.rel_error = change;
    out.nodes = static_cast<int>(n + 1);
    return out;
}

std::size_t auto_grid(double span, double curvature) {
    const double lambda = std::max(1.0, std::sqrt(std::abs(curvature)));
    std::size_t steps = static_cast<std::size_t>(std::ceil(std::max(512.0, 128.0 * span * lambda)));
    steps += steps % 2;
    return steps + 1;
}

void record(PriceDiagnostics& d, const EndpointIntegral& e) {
    d.quad_error_estimate = std::max(d.quad_error_estimate, e.rel_error);
    d.phi_min = std::min(d.phi_min.value_or(e.phi_min), e.phi_min);
    d.phi_max = std::max(d.phi_max.value_or(e.phi_max), e.phi_max);
    d.quad_nodes += e.nodes;
}

}  // namespace

// ---------------------------------------------------------- mapped models

Potential mapped_effective_potential(const MappedModel& m, bool include_rate_term) {
    const double a2 = m.alpha * m.alpha;
    const double k = include_rate_term ? m.r0 : 0.0;
    const double s = m.sigma;
    const double shift = m.theta / m.alpha;
    const RateMap map = m.map;
    Potential V;
    V.value = [=](double y, double t) { return 0.5 * a2 * y * y + k * map.f(s * y + shift, t); };
    V.d1 = [=](double y, double t) { return a2 * y + k * s * map.f_x(s * y + shift, t); };
    V.d2 = [=](double y, double t) { return a2 + k * s * s * map.f_xx(s * y + shift, t); };
    V.time_homogeneous = map.time_homogeneous();
    return V;
}

PriceResult price_semiclassical(const MappedModel& m, const PriceQuery& q,
                                const SemiclassicalOptions& opt) {
    m.validate();
    if (q.T < q.t) throw DomainError("price_semiclassical: T < t");
    if (q.T == q.t) return make_price_result(1.0, q, Method::semiclassical);

    const StateRoots roots = solve_state_roots(m, q.z, q.t);
    const Potential V = mapped_effective_potential(m, opt.include_rate_term);
    const double span = q.T - q.t;

    PriceDiagnostics diag;
    double total = 0.0;
    for (double x_star : roots.roots) {
        const double y_star = x_star - m.theta / (m.sigma * m.alpha);
        EndpointSpec spec;
        spec.problem = [&V, &q, y_star](double y_end) {
            EffectiveProblem p;
            p.V = V;
            p.t = q.t;
            p.T = q.T;
            p.y_start = y_star;
            p.y_end = y_end;
            return p;
        };
        spec.weight_quad = m.alpha;
        spec.weight_const = 0.5 * m.alpha * span + 0.5 * m.alpha * y_star * y_star;
        spec.start_guess = y_star * std::exp(-m.alpha * span);
        spec.grid_points =
            opt.grid_points ? opt.grid_points
                            : auto_grid(span, std::max(std::abs(V.d2(y_star, q.t)), std::abs(V.d2(0.0, q.t))));
        const EndpointIntegral e = integrate_endpoint(spec, opt);
        record(diag, e);
        total += std::exp(e.log_value);
    }
    const double price = total / static_cast<double>(roots.roots.size());
    PriceResult r = make_price_result(price, q, Method::semiclassical);
    diag.roots_summed = static_cast<int>(roots.roots.size());
    diag.epsilon = m.sigma * std::sqrt(span);
    if (*diag.epsilon > 0.3)
        diag.warnings.push_back("epsilon = sigma*sqrt(T-t) exceeds 0.3; semiclassical result unreliable");
    r.diagnostics = std::move(diag);
    return r;
}

// -------------------------------------------------------- potential models

PriceResult price_potential_model(const PotentialModel& pm, const PriceQuery& q,
                                  const SemiclassicalOptions& opt) {
    if (q.T < q.t) throw DomainError("price_potential_model: T < t");
    if (q.T == q.t) return make_price_result(1.0, q, Method::semiclassical);
    const StateRoots roots = solve_level_set([&](double x) { return pm.V(x, q.t); },
                                             [&](double x) { return pm.V_x(x, q.t); }, q.z, 50.0);
    Potential V{pm.V, pm.V_x, pm.V_xx, pm.time_homogeneous};
    const double span = q.T - q.t;

    PriceDiagnostics diag;
    double total = 0.0;
    for (double x_r : roots.roots) {
        EndpointSpec spec;
        spec.problem = [&V, &q, x_r](double x_end) {
            EffectiveProblem p;
            p.V = V;
            p.t = q.t;
            p.T = q.T;
            p.y_start = x_r;
            p.y_end = x_end;
            return p;
        };
        spec.start_guess = x_r;
        spec.grid_points = opt.grid_points ? opt.grid_points : auto_grid(span, V.d2(x_r, q.t));
        const EndpointIntegral e = integrate_endpoint(spec, opt);
        record(diag, e);
        total += std::exp(e.log_value);
    }
    PriceResult r = make_price_result(total / static_cast<double>(roots.roots.size()), q,
                                      Method::semiclassical);
    diag.roots_summed = static_cast<int>(roots.roots.size());
    r.diagnostics = std::move(diag);
    return r;
}

double conditional_expectation_semiclassical(const std::optional<DriftWeight>& rho,
                                             const Potential& V, double x0, double t0, double xf,
                                             double tf, std::size_t grid_points) {
    if (!(tf > t0)) throw DomainError("conditional_expectation_semiclassical: need tf > t0");
    EffectiveProblem p;
    p.V = V;
    p.rho = rho;
    p.t = t0;
    p.T = tf;
    p.y_start = x0;
    p.y_end = xf;
    const ClassicalSolution sol = solve_classical_path(p, grid_points);
    const FluctuationResult fr = gelfand_yaglom(fluctuation_potential(p, sol), t0, tf, grid_points);
    return std::exp(-sol.action) / std::sqrt(2.0 * std::numbers::pi * fr.phi_T);
}

double free_expectation_semiclassical(const std::optional<DriftWeight>& rho, const Potential& V,
                                      double x0, double t0, double tf,
                                      const SemiclassicalOptions& opt) {
    if (!(tf > t0)) throw DomainError("free_expectation_semiclassical: need tf > t0");
    EndpointSpec spec;
    spec.problem = [&V, &rho, x0, t0, tf](double x_end) {
        EffectiveProblem p;
        p.V = V;
        p.rho = rho;
        p.t = t0;
        p.T = tf;
        p.y_start = x0;
        p.y_end = x_end;
        return p;
    };
    spec.start_guess = x0;
    spec.grid_points = opt.grid_points ? opt.grid_points : auto_grid(tf - t0, V.d2(x0, t0));
    return std::exp(integrate_endpoint(spec, opt).log_value);
}

}  // namespace pathint
