#include <doctest.h>

#include <cmath>
#include <random>

#include "pathint/errors.hpp"
#include "pathint/models.hpp"
#include "reference.hpp"

using namespace pathint;

TEST_CASE("eta for constant mean reversion") {
    CHECK(eta(PiecewiseLinearCurve::constant(1.0), 0, 1) == doctest::Approx(0.6321206).epsilon(1e-7));
    CHECK(eta(PiecewiseLinearCurve::constant(0.0), 0, 2) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("eta with a jump in alpha matches a fine trapezoid oracle") {
    PiecewiseLinearCurve a({0.0, 0.5, 0.5, 1.0}, {1.0, 1.0, 2.0, 2.0});
    // Frozen from ref::eta_trapezoid with 1e6 steps.
    const double frozen = 0.585169590073;
    CHECK(std::abs(eta(a, 0, 1) - frozen) < 1e-8);
    CHECK(std::abs(ref::eta_trapezoid([&](double u) { return a(u); }, 0, 1, 200000) - frozen) < 1e-8);
}

TEST_CASE("eta rejects reversed or uncovered intervals") {
    PiecewiseLinearCurve a({0.0, 1.0}, {1.0, 1.0});
    CHECK_THROWS_AS(eta(a, 0.5, 0.2), DomainError);
    CHECK_THROWS_AS(eta(a, 0.0, 2.0), DomainError);
}

TEST_CASE("property: eta composes over an intermediate time") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    PiecewiseLinearCurve a({0.0, 3.0, 6.0, 10.0}, {0.5, 1.5, 0.2, 0.9});
    for (int k = 0; k < 50; ++k) {
        double x[3] = {u(rng), u(rng), u(rng)};
        std::sort(x, x + 3);
        const double lhs = eta(a, x[0], x[2]);
        const double rhs = eta(a, x[0], x[1]) + discount_factor_beta(a, x[0], x[1]) * eta(a, x[1], x[2]);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + lhs));
    }
}

TEST_CASE("exponential map roots") {
    MappedModel m{0.1, 0.0, 1.0, 0.05, RateMap::exponential()};
    auto r = solve_state_roots(m, 0.05, 0.0);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0] == doctest::Approx(0.0).epsilon(1e-15));
    r = solve_state_roots(m, 0.06, 0.0);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0] == doctest::Approx(1.823216).epsilon(1e-6));
    CHECK(std::abs(0.05 * std::exp(0.1 * r.roots[0]) - 0.06) < 1e-12 * 0.06);
    CHECK_THROWS_AS(solve_state_roots(m, -0.01, 0.0), NoRootError);
}

TEST_CASE("quadratic map gives two symmetric roots") {
    MappedModel m{0.1, 0.0, 1.0, 0.05, RateMap::quadratic(1.0, 0.0)};
    auto r = solve_state_roots(m, 0.05 * 1.04, 0.0);
    REQUIRE(r.roots.size() == 2);
    CHECK(r.roots[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(r.roots[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("quadratic map below its minimum reports the attainable minimum") {
    MappedModel m{0.1, 0.0, 1.0, 0.05, RateMap::quadratic(1.0, 1.0)};
    try {
        solve_state_roots(m, 0.01, 0.0);
        FAIL("expected NoRootError");
    } catch (const NoRootError& e) {
        CHECK(e.attainable_min() == doctest::Approx(0.05 * 0.75).epsilon(1e-12));
    }
}

TEST_CASE("property: roots reproduce z through the forward map") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> zd(0.001, 0.3);
    const MappedModel models[] = {
        {0.1, 0.02, 1.0, 0.05, RateMap::exponential()},
        {0.3, 0.0, 0.5, 0.04, RateMap::quadratic(2.0, -1.0)},
        {0.02, 0.0, 1.0, 0.05, RateMap::linear(20.0)},
        {0.2, 0.0, 1.0, 0.05,
         RateMap::custom([](double x, double) { return 1.0 + std::sinh(x); },
                         [](double x, double) { return std::cosh(x); },
                         [](double x, double) { return std::sinh(x); }, true)},
    };
    for (const MappedModel& m : models) {
        for (int k = 0; k < 40; ++k) {
            const double z = zd(rng);
            StateRoots r;
            try {
                r = solve_state_roots(m, z, 0.0);
            } catch (const NoRootError&) {
                continue;
            }
            CHECK(!r.roots.empty());
            for (double x : r.roots)
                CHECK(std::abs(m.r0 * m.map.f(m.sigma * x, 0.0) - z) <= 1e-12 * z);
        }
    }
}

TEST_CASE("property: the quadratic map stays positive when b^2 < 4a") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ad(0.01, 5.0), ud(-0.999, 0.999);
    for (int k = 0; k < 30; ++k) {
        const double a = ad(rng);
        const double b = ud(rng) * 2.0 * std::sqrt(a);
        RateMap f = RateMap::quadratic(a, b);
        for (double x = -50; x <= 50; x += 0.01) CHECK_FALSE(f.f(x, 0.0) <= 0.0);
    }
}

TEST_CASE("custom maps must satisfy f(0,0) = 1") {
    CHECK_THROWS_AS(RateMap::custom([](double x, double) { return 2.0 + x; },
                                    [](double, double) { return 1.0; },
                                    [](double, double) { return 0.0; }),
                    DomainError);
}

TEST_CASE("Hull-White equivalent mapped model reproduces the linear SDE") {
    const MappedModel m = MappedModel::hull_white_equivalent(1.0, 0.05, 0.01, 0.05);
    CHECK(m.map.kind() == RateMap::Kind::linear);
    // r = r0 f(X) = r0 + X and dX = sigma dW + (theta - alpha r0 - alpha X) dt.
    CHECK(m.r0 * m.map.f(0.3, 0.0) == doctest::Approx(0.05 + 0.3));
    CHECK(m.theta == doctest::Approx(0.0));
    CHECK(m.r_star() == doctest::Approx(0.05 * std::exp(0.0)));
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS((MappedModel{0.0, 0.0, 1.0, 0.05, RateMap::exponential()}.validate()), DomainError);
    CHECK_THROWS_AS((MappedModel{0.1, 0.0, 0.0, 0.05, RateMap::exponential()}.validate()), DomainError);
    CHECK_THROWS_AS((MappedModel{0.1, 0.0, 1.0, -0.05, RateMap::exponential()}.validate()), DomainError);
    HullWhiteParams p = HullWhiteParams::constant(1.0, 0.05, -0.01);
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("potential derivatives are checked against finite differences") {
    CHECK(PotentialModel::harmonic(1.3, 0.1).derivative_mismatch(-3, 3, 0) < 1e-6);
    PotentialModel bad = PotentialModel::harmonic(1.0);
    bad.V_x = [](double x, double) { return 2.0 * x; };
    CHECK(bad.derivative_mismatch(-3, 3, 0) > 1e-3);
}

TEST_CASE("level sets: flat potential and tangency") {
    auto flat = solve_level_set([](double) { return 0.2; }, [](double) { return 0.0; }, 0.2, 50);
    REQUIRE(flat.roots.size() == 1);
    CHECK(flat.roots[0] == 0.0);
    auto tangent = solve_level_set([](double x) { return 0.5 * x * x; }, [](double x) { return x; }, 0.0, 50);
    REQUIRE(tangent.roots.size() == 1);
    CHECK(std::abs(tangent.roots[0]) < 1e-6);
}
