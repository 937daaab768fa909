#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pathint/classical.hpp"
#include "pathint/models.hpp"
#include "pathint/parallel.hpp"

namespace pathint {

enum class Method { exact, semiclassical, mc, lattice, pde };

std::string to_string(Method m);
std::optional<Method> method_from_string(const std::string& s);

/// Price v(z, t, T) of the unit zero-coupon bond given r_t = z.
struct PriceQuery {
    double z = 0.0;
    double t = 0.0;
    double T = 1.0;
};

struct PriceDiagnostics {
    double quad_error_estimate = 0.0;
    std::optional<double> phi_min;  ///< phi(T) range over quadrature nodes
    std::optional<double> phi_max;
    int roots_summed = 0;
    int quad_nodes = 0;
    std::optional<double> std_error;
    std::optional<double> epsilon;  ///< sigma sqrt(T - t)
    std::vector<std::string> warnings;
};

struct PriceResult {
    double price = 1.0;
    double yield = 0.0;
    Method method = Method::exact;
    PriceDiagnostics diagnostics;
};

/// -ln(v) / (T - t).
double yield_from_price(double v, double t, double T);

/// Builds a PriceResult with the yield filled in; T == t reports a zero yield.
PriceResult make_price_result(double price, const PriceQuery& q, Method method);

/// Closed-form linear Gaussian bond price with time-dependent curves.
PriceResult price_hull_white_exact(const HullWhiteParams& p, const PriceQuery& q);

/// Constant-parameter closed form in terms of (1 - exp(-alpha tau)) / alpha.
double hull_white_constant_closed_form(double alpha, double theta, double sigma, double z,
                                       double tau);

struct SemiclassicalOptions {
    std::size_t quad_nodes = 64;   ///< initial Simpson intervals over the endpoint range
    std::size_t grid_points = 0;   ///< path grid; 0 picks one from the horizon and curvature
    double quad_rel_tol = 1e-8;
    bool include_rate_term = true; ///< false drops r0 f from the potential (normalization check)
    Execution execution = Execution::parallel;
    int workers = 0;               ///< 0 uses default_workers()
};

/// Semiclassical price for a mapped model: classical action plus
/// Gelfand-Yaglom prefactor, integrated over the free endpoint and
/// renormalized by exp(alpha (T - t) / 2). State roots are averaged.
PriceResult price_semiclassical(const MappedModel& m, const PriceQuery& q,
                                const SemiclassicalOptions& opt = {});

/// Semiclassical price for r_t = V(W_t, t), averaged over the roots of V(x, t) = z.
PriceResult price_potential_model(const PotentialModel& pm, const PriceQuery& q,
                                  const SemiclassicalOptions& opt = {});

/// <exp(-int [rho x' + V] dt)> pinned at both ends, to Gaussian order.
double conditional_expectation_semiclassical(const std::optional<DriftWeight>& rho,
                                             const Potential& V, double x0, double t0, double xf,
                                             double tf, std::size_t grid_points = 2049);

/// Same expectation with the endpoint integrated out, using the pricer's
/// endpoint quadrature.
double free_expectation_semiclassical(const std::optional<DriftWeight>& rho, const Potential& V,
                                      double x0, double t0, double tf,
                                      const SemiclassicalOptions& opt = {});

/// Effective potential of a mapped model in the shifted state y = x - theta/(sigma alpha).
Potential mapped_effective_potential(const MappedModel& m, bool include_rate_term);

}  // namespace pathint
