#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "pathint/curve.hpp"
#include "pathint/errors.hpp"
#include "pathint/parallel.hpp"
#include "pathint/quadrature.hpp"
#include "reference.hpp"

using namespace pathint;

TEST_CASE("piecewise curve evaluates, integrates and rejects out-of-range times") {
    PiecewiseLinearCurve c({0.0, 1.0, 3.0}, {1.0, 3.0, 2.0});
    CHECK(c(0.5) == doctest::Approx(2.0));
    CHECK(c(2.0) == doctest::Approx(2.5));
    CHECK(c.integral(0.0, 3.0) == doctest::Approx(2.0 + 5.0));
    CHECK(c.integral(0.5, 2.0) == doctest::Approx(ref::trapezoid([&](double t) { return c(t); }, 0.5, 1.0, 1) +
                                                  ref::trapezoid([&](double t) { return c(t); }, 1.0, 2.0, 1)));
    const double sq = ref::integrate([&](double t) { return c(t) * c(t); }, 0.0, 1.0) +
                      ref::integrate([&](double t) { return c(t) * c(t); }, 1.0, 3.0);
    CHECK(c.integral_of_square(0.0, 3.0) == doctest::Approx(sq).epsilon(1e-12));
    CHECK_THROWS_AS(c(3.5), DomainError);
    CHECK_THROWS_AS(c(-0.1), DomainError);
    CHECK(c.min_value() == 1.0);
    CHECK(c.max_value() == 3.0);
}

TEST_CASE("a repeated knot is a jump taking the right-hand value") {
    PiecewiseLinearCurve c({0.0, 0.5, 0.5, 1.0}, {1.0, 1.0, 2.0, 2.0});
    CHECK(c(0.25) == 1.0);
    CHECK(c(0.5) == 2.0);
    CHECK(c.integral(0.0, 1.0) == doctest::Approx(1.5));
}

TEST_CASE("constant curves cover the half line") {
    auto c = PiecewiseLinearCurve::constant(0.7);
    CHECK(c.is_constant());
    CHECK(c(1e6) == 0.7);
    CHECK(c.integral(2.0, 5.0) == doctest::Approx(2.1));
}

TEST_CASE("decreasing knots are rejected") {
    CHECK_THROWS_AS(PiecewiseLinearCurve({0.0, 2.0, 1.0}, {1, 1, 1}), DomainError);
}

TEST_CASE("simpson weights integrate cubics exactly for even and odd interval counts") {
    for (std::size_t n : {5, 6, 9, 10, 101}) {
        const double h = 2.0 / static_cast<double>(n - 1);
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = h * static_cast<double>(i);
            f[i] = x * x * x - 2 * x + 1;
        }
        CHECK(simpson(f, h) == doctest::Approx(4.0 - 4.0 + 2.0).epsilon(1e-13));
    }
}

TEST_CASE("adaptive quadrature honours breakpoints on kinked integrands") {
    auto f = [](double x) { return std::abs(x - 0.3); };
    const double brk[] = {0.3};
    auto r = integrate_adaptive(f, 0.0, 1.0, 1e-12, brk);
    CHECK(r.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-13));
    CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0, 1, 1e-12).value ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("PATHINT_THREADS caps the worker count") {
    setenv("PATHINT_THREADS", "1", 1);
    CHECK(default_workers() == 1);
    unsetenv("PATHINT_THREADS");
    CHECK(default_workers() >= 1);
}
