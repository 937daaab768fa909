#include <doctest.h>

#include <cmath>

#include "pathint/errors.hpp"
#include "pathint/kernels.hpp"
#include "pathint/oracles.hpp"
#include "pathint/pricing.hpp"
#include "reference.hpp"

using namespace pathint;

namespace {

const Potential kHarmonic{[](double x, double) { return 0.5 * x * x; }, [](double x, double) { return x; },
                          [](double, double) { return 1.0; }, true};
const Potential kZero{[](double, double) { return 0.0; }, [](double, double) { return 0.0; },
                      [](double, double) { return 0.0; }, true};

MappedModel bk(double sigma) { return {sigma, 0.0, 1.0, 0.05, RateMap::exponential()}; }

}  // namespace

TEST_CASE("Hull-White exact price") {
    const auto p = HullWhiteParams::constant(1.0, 0.05, 0.01);
    const auto r = price_hull_white_exact(p, {0.05, 0.0, 1.0});
    CHECK(r.price == doctest::Approx(0.951237).epsilon(1e-6));
    CHECK(r.yield == doctest::Approx(0.0499916).epsilon(1e-6));
    CHECK(r.method == Method::exact);
    CHECK(price_hull_white_exact(p, {0.05, 1.0, 1.0}).price == 1.0);
    CHECK(price_hull_white_exact(HullWhiteParams::constant(1.0, 0.0, 0.0), {0.05, 0, 1}).price ==
          doctest::Approx(0.968888).epsilon(1e-6));
    CHECK_THROWS_AS(price_hull_white_exact(p, {0.05, 1.0, 0.5}), DomainError);
}

TEST_CASE("Hull-White closed form against the textbook Vasicek formula") {
    for (double T : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double ref_v = ref::vasicek(1.0, 0.05, 0.01, 0.05, T);
        CHECK(std::abs(hull_white_constant_closed_form(1.0, 0.05, 0.01, 0.05, T) / ref_v - 1) < 1e-13);
        const auto r = price_hull_white_exact(HullWhiteParams::constant(1.0, 0.05, 0.01), {0.05, 0, T});
        CHECK(std::abs(r.price / ref_v - 1) < 1e-12);
    }
}

TEST_CASE("Hull-White with curves against a nested trapezoid oracle") {
    HullWhiteParams p{PiecewiseLinearCurve({0, 1, 3}, {0.01, 0.02, 0.015}),
                      PiecewiseLinearCurve({0, 2, 3}, {0.03, 0.06, 0.05}),
                      PiecewiseLinearCurve({0, 1.5, 3}, {0.8, 1.2, 1.0})};
    const double t = 0.25, T = 2.75, z = 0.04;
    auto a = [&](double s) { return p.alpha(s); };
    const long n = 4000;
    const double drift = ref::trapezoid(
        [&](double s) {
            const double e = ref::eta_trapezoid(a, s, T, 2000);
            return e * p.theta(s) - 0.5 * e * e * p.sigma(s) * p.sigma(s);
        },
        t, T, n);
    const double oracle = std::exp(-z * ref::eta_trapezoid(a, t, T, 200000) - drift);
    CHECK(price_hull_white_exact(p, {z, t, T}).price == doctest::Approx(oracle).epsilon(2e-7));
}

TEST_CASE("yield extraction") {
    CHECK(yield_from_price(1.0, 0, 1) == 0.0);
    CHECK(yield_from_price(std::exp(-0.05), 0, 1) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(yield_from_price(0.951237, 0, 1) == doctest::Approx(0.0499916).epsilon(1e-5));
    CHECK_THROWS_AS(yield_from_price(0.0, 0, 1), DomainError);
    CHECK_THROWS_AS(yield_from_price(0.9, 1, 1), DomainError);
}

TEST_CASE("semiclassical pricer on the linear map equals the exact Hull-White price") {
    const auto m = MappedModel::hull_white_equivalent(1.0, 0.05, 0.01, 0.05);
    const auto hw = HullWhiteParams::constant(1.0, 0.05, 0.01);
    for (double T : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const auto s = price_semiclassical(m, {0.05, 0, T});
        const auto e = price_hull_white_exact(hw, {0.05, 0, T});
        CHECK(std::abs(s.price / e.price - 1) < 1e-7);
    }
    // Off-equilibrium start and strong volatility, where the linear term matters.
    const auto m2 = MappedModel::hull_white_equivalent(0.5, 0.01, 0.1, 0.02);
    const auto s2 = price_semiclassical(m2, {0.08, 0, 3.0});
    const auto e2 = price_hull_white_exact(HullWhiteParams::constant(0.5, 0.01, 0.1), {0.08, 0, 3.0});
    CHECK(std::abs(s2.price / e2.price - 1) < 1e-7);
}

TEST_CASE("semiclassical pricer: boundaries and diagnostics") {
    CHECK(price_semiclassical(bk(0.1), {0.05, 2.0, 2.0}).price == 1.0);
    const auto r = price_semiclassical(bk(0.1), {0.05, 0, 1});
    CHECK(r.diagnostics.roots_summed == 1);
    REQUIRE(r.diagnostics.epsilon.has_value());
    CHECK(*r.diagnostics.epsilon == doctest::Approx(0.1));
    CHECK(r.diagnostics.warnings.empty());
    CHECK(*r.diagnostics.phi_min > 0.0);
    CHECK(*r.diagnostics.phi_max >= *r.diagnostics.phi_min);
    CHECK(r.diagnostics.quad_error_estimate < 1e-8);
    const auto loud = price_semiclassical(bk(0.5), {0.05, 0, 1});
    CHECK_FALSE(loud.diagnostics.warnings.empty());
    CHECK_THROWS_AS(price_semiclassical(bk(0.1), {-0.01, 0, 1}), NoRootError);
}

TEST_CASE("Black-Karasinski semiclassical price") {
    const auto r = price_semiclassical(bk(0.1), {0.05, 0, 1});
    CHECK(std::abs(r.price / std::exp(-0.05) - 1) < 5e-3);
    const auto mc = mc_price(bk(0.1), {0.05, 0, 1}, McConfig{200000, 200, 99, true});
    CHECK(std::abs(r.price - mc.price) < 3.0 * *mc.diagnostics.std_error);
}

TEST_CASE("normalization identity with the rate term removed") {
    SemiclassicalOptions o;
    o.include_rate_term = false;
    for (double a : {0.5, 1.0, 2.0})
        for (double T : {1.0, 5.0}) {
            const MappedModel m{0.1, 0.0, a, 0.05, RateMap::exponential()};
            CHECK(std::abs(price_semiclassical(m, {0.05, 0, T}, o).price - 1.0) < 1e-8);
        }
}

TEST_CASE("property: quadratic prices do not depend on refinement") {
    const MappedModel m{0.2, 0.0, 1.0, 0.05, RateMap::quadratic(1.0, 0.0)};
    SemiclassicalOptions coarse, fine;
    coarse.quad_nodes = 16;
    coarse.grid_points = 513;
    fine.quad_nodes = 128;
    fine.grid_points = 4097;
    const double a = price_semiclassical(m, {0.06, 0, 2}, coarse).price;
    const double b = price_semiclassical(m, {0.06, 0, 2}, fine).price;
    CHECK(std::abs(a / b - 1) < 1e-8);
}

TEST_CASE("property: quadratic prices agree with Monte Carlo") {
    const MappedModel m{0.3, 0.0, 1.0, 0.05, RateMap::quadratic(1.0, 0.0)};
    const auto s = price_semiclassical(m, {0.05, 0, 2});
    const auto mc = mc_price(m, {0.05, 0, 2}, McConfig{200000, 200, 5, true});
    CHECK(std::abs(s.price - mc.price) < 3.0 * *mc.diagnostics.std_error);
}

TEST_CASE("property: prices fall strictly as the short rate rises") {
    for (const MappedModel& m : {bk(0.1), MappedModel{0.05, 0.0, 1.0, 0.05, RateMap::linear(20.0)}}) {
        double last = 2.0;
        for (double z = 0.01; z <= 0.15; z += 0.02) {
            const double v = price_semiclassical(m, {z, 0, 2}).price;
            CHECK(v < last);
            last = v;
        }
    }
}

TEST_CASE("property: serial and parallel endpoint quadrature are bit-identical") {
    SemiclassicalOptions serial, par1, par4;
    serial.execution = Execution::serial;
    par1.workers = 1;
    par4.workers = 4;
    const PriceQuery q{0.06, 0, 1.5};
    const double a = price_semiclassical(bk(0.2), q, serial).price;
    CHECK(a == price_semiclassical(bk(0.2), q, par1).price);
    CHECK(a == price_semiclassical(bk(0.2), q, par4).price);
}

TEST_CASE("conditional expectations in Gaussian cases are exact") {
    KernelQuery k;
    k.omega = 1.0;
    CHECK(std::abs(conditional_expectation_semiclassical(std::nullopt, kHarmonic, 0, 0, 0, 1) - 0.3680051987) < 1e-7);
    CHECK(std::abs(conditional_expectation_semiclassical(std::nullopt, kHarmonic, 0, 0, 0, 1) -
                   ho_kernel_fixed(k)) < 1e-8);
    k.x0 = 0.7;
    k.xf = -0.4;
    k.t0 = 0.5;
    k.tf = 2.0;
    CHECK(std::abs(conditional_expectation_semiclassical(std::nullopt, kHarmonic, 0.7, 0.5, -0.4, 2.0) -
                   ho_kernel_fixed(k)) < 1e-8);
    CHECK(std::abs(conditional_expectation_semiclassical(std::nullopt, kZero, 0.3, 0, 1.1, 2) -
                   free_kernel({0.3, 0, 1.1, 2})) < 1e-12);
}

TEST_CASE("pinned drift weight: semiclassical, closed form and lattice agree") {
    const DriftWeight one{[](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                          [](double, double) { return 0.0; }};
    const double v = conditional_expectation_semiclassical(one, kZero, 0, 0, 1, 1);
    CHECK(v == doctest::Approx(std::exp(-1.5) / std::sqrt(2 * M_PI)).epsilon(1e-9));
    KernelQuery k;
    k.xf = 1.0;
    k.rho = PiecewiseLinearCurve::constant(1.0);
    CHECK(std::abs(v - drift_expectation(k, true)) < 1e-9);
    LatticeConfig c = default_lattice_config(0, 0, 1, 64);
    CHECK(std::abs(lattice_expectation_extrapolated(one, kZero.value, 0, 0, 1.0, 1, c, true).value - v) < 1e-5);
}

TEST_CASE("time-dependent drift weight fixes the sign of the rho_s force") {
    // rho = t: the weight exp(-int t dx) acts as a potential -x, shifting the path.
    const DriftWeight rho{[](double, double s) { return s; }, [](double, double) { return 1.0; },
                          [](double, double) { return 0.0; }};
    const double semi = conditional_expectation_semiclassical(rho, kHarmonic, 0.2, 0, -0.1, 1, 4097);
    LatticeConfig c = default_lattice_config(0.2, 0, 1, 64);
    const double lat = lattice_expectation_extrapolated(rho, kHarmonic.value, 0.2, 0, -0.1, 1, c).value;
    CHECK(std::abs(semi / lat - 1) < 1e-4);
}

TEST_CASE("free-endpoint semiclassical expectations") {
    KernelQuery k;
    k.omega = 1.0;
    CHECK(std::abs(free_expectation_semiclassical(std::nullopt, kHarmonic, 0, 0, 1) - ho_kernel_free(k)) < 1e-8);
    const DriftWeight one{[](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                          [](double, double) { return 0.0; }};
    CHECK(std::abs(free_expectation_semiclassical(one, kZero, 0, 0, 1) - std::exp(0.5)) < 1e-8);
}

TEST_CASE("potential-framework pricer") {
    const auto h = PotentialModel::harmonic(1.0);
    SUBCASE("symmetric roots averaged, against the closed form and the lattice") {
        const auto r = price_potential_model(h, {0.02, 0, 1});
        CHECK(r.diagnostics.roots_summed == 2);
        // Frozen from the integral over xf of the pinned oscillator kernel at x0 = 0.2.
        CHECK(std::abs(r.price - 0.792849153225) < 1e-8);
        const auto lat = lattice_price(h, {0.02, 0, 1}, default_lattice_config(0, 0, 1, 64));
        CHECK(std::abs(r.price / lat.price - 1) < 1e-2);
    }
    SUBCASE("constant potential is a deterministic rate") {
        const auto c = PotentialModel::constant(0.03);
        CHECK(price_potential_model(c, {0.03, 0, 2}).price == doctest::Approx(std::exp(-0.06)).epsilon(1e-10));
    }
    SUBCASE("long-run yield approaches the ground-state energy") {
        const auto r = price_potential_model(h, {0.25, 0, 20});
        CHECK(std::abs(r.yield - 0.5) < 1e-2);
    }
    SUBCASE("no root below the minimum") {
        CHECK_THROWS_AS(price_potential_model(h, {-0.1, 0, 1}), NoRootError);
    }
    CHECK(price_potential_model(h, {0.1, 3, 3}).price == 1.0);
}
