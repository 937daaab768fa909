#include <doctest.h>

#include <cmath>
#include <random>

#include "pathint/curve.hpp"
#include "pathint/errors.hpp"
#include "pathint/fluctuation.hpp"
#include "reference.hpp"

using namespace pathint;

TEST_CASE("Gelfand-Yaglom on constant potentials") {
    CHECK(gelfand_yaglom([](double) { return 0.0; }, 0, 1, 257).phi_T == doctest::Approx(1.0).epsilon(1e-14));
    const auto r = gelfand_yaglom([](double) { return 1.0; }, 0, 1, 1025);
    CHECK(std::abs(r.phi_T - std::sinh(1.0)) < 1e-8);
    CHECK(r.phi_T == doctest::Approx(1.1752012).epsilon(1e-7));
    CHECK(std::abs(r.phi_dot_T - std::cosh(1.0)) < 1e-8);
    CHECK(r.phi_samples.front().second == 0.0);
    CHECK(r.min_phi_interior > 0.0);
}

TEST_CASE("Gelfand-Yaglom on a linear potential against Airy functions") {
    const auto r = gelfand_yaglom([](double s) { return 1.0 + s; }, 0, 1, 2049);
    // Frozen from ref::phi_airy_linear(1).
    CHECK(std::abs(r.phi_T - 1.269326025384) < 1e-10);
    CHECK(std::abs(ref::phi_airy_linear(1.0) - 1.269326025384) < 1e-11);
}

TEST_CASE("a focal point is reported with its location") {
    const double w = 2.0 * M_PI;
    try {
        gelfand_yaglom([w](double) { return -w * w; }, 0, 1, 1025);
        FAIL("expected FocalPointError");
    } catch (const FocalPointError& e) {
        CHECK(e.location() == doctest::Approx(0.5).epsilon(2e-3));
    }
}

TEST_CASE("property: determinant ratios of oscillators") {
    for (double w : {0.3, 1.0, 2.0})
        for (double d : {0.5, 1.0, 3.0}) {
            const double p1 = gelfand_yaglom([w](double) { return w * w; }, 1.0, 1.0 + d, 2049).phi_T;
            const double p0 = gelfand_yaglom([](double) { return 0.0; }, 1.0, 1.0 + d, 2049).phi_T;
            CHECK(std::abs(p1 / p0 - std::sinh(w * d) / (w * d)) < 1e-8);
        }
}

TEST_CASE("property: nonnegative potentials never reach a focal point") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int k = 0; k < 25; ++k) {
        std::vector<double> knots, vals;
        for (int i = 0; i <= 8; ++i) {
            knots.push_back(0.25 * i);
            vals.push_back(u(rng));
        }
        PiecewiseLinearCurve U(knots, vals);
        const auto r = gelfand_yaglom([&](double s) { return U(s); }, 0, 2, 513);
        CHECK(r.phi_T > 0.0);
        CHECK(r.phi_T >= 2.0 - 1e-12);  // U >= 0 only makes phi grow faster than s
    }
}

TEST_CASE("property: fourth-order convergence of phi(T)") {
    const double e1 = std::abs(gelfand_yaglom([](double) { return 1.0; }, 0, 1, 65).phi_T - std::sinh(1.0));
    const double e2 = std::abs(gelfand_yaglom([](double) { return 1.0; }, 0, 1, 129).phi_T - std::sinh(1.0));
    CHECK(e1 / e2 > 14.0);
}

namespace {
EffectiveProblem problem(Potential V, double y0, double y1, double t, double T) {
    EffectiveProblem p;
    p.V = std::move(V);
    p.t = t;
    p.T = T;
    p.y_start = y0;
    p.y_end = y1;
    return p;
}
}  // namespace

TEST_CASE("Van Vleck cross-check") {
    const std::size_t n = 2049;
    SUBCASE("oscillator") {
        const Potential V{[](double y, double) { return 0.5 * y * y; }, [](double y, double) { return y; },
                          [](double, double) { return 1.0; }, true};
        const auto p = problem(V, 0.2, 0.7, 0, 1);
        const auto sol = solve_classical_path(p, n);
        const auto fr = gelfand_yaglom(fluctuation_potential(p, sol), 0, 1, n);
        CHECK(1.0 / fr.phi_T == doctest::Approx(0.8509181).epsilon(1e-7));
        CHECK(van_vleck_check(p, sol, fr, van_vleck_step(p)) < 1e-5);
    }
    SUBCASE("free particle") {
        const Potential V{[](double, double) { return 0.0; }, [](double, double) { return 0.0; },
                          [](double, double) { return 0.0; }, true};
        const auto p = problem(V, 0.0, 1.0, 0, 2);
        const auto sol = solve_classical_path(p, n);
        const auto fr = gelfand_yaglom(fluctuation_potential(p, sol), 0, 2, n);
        CHECK(1.0 / fr.phi_T == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(van_vleck_check(p, sol, fr, van_vleck_step(p)) < 1e-5);
    }
    SUBCASE("Black-Karasinski") {
        const Potential V{[](double y, double) { return 0.5 * y * y + 0.05 * std::exp(0.1 * y); },
                          [](double y, double) { return y + 0.005 * std::exp(0.1 * y); },
                          [](double y, double) { return 1.0 + 0.0005 * std::exp(0.1 * y); }, true};
        const auto p = problem(V, 0.0, 0.4, 0, 1);
        const auto sol = solve_classical_path(p, n);
        const auto fr = gelfand_yaglom(fluctuation_potential(p, sol), 0, 1, n);
        CHECK(van_vleck_check(p, sol, fr, van_vleck_step(p)) < 1e-4);
    }
}
