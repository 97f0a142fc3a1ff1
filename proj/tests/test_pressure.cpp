#include <doctest.h>

#include <cmath>

#include "isoflow/errors.hpp"
#include "isoflow/pressure.hpp"
#include "oracles.hpp"

using namespace isoflow;

// Frozen independent value of G(1) for P = e^rho:
//   int_0^1 (1-s)(e^s - 1)/s ds = sum_k 1/(k k!) - (e - 2), 30-digit quadrature.
constexpr double kGExp1 = 0.5996203229953586595;

TEST_CASE("isothermal law: G and excess vanish identically") {
    const PressureLaw law = PressureLaw::isothermal(2.5);
    CHECK(law.kappa() == 2.5);
    for (double u : {0.0, 0.3, 1.0, 7.5}) {
        CHECK(law.G(u) == 0.0);
        CHECK(law.excess_pressure(u) == 0.0);
    }
    CHECK(law.F(1.0) == 0.0);
    CHECK(law.F(std::exp(1.0)) == doctest::Approx(2.5 * std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("power law closed forms") {
    // P = k rho + k1 rho^g  =>  G(u) = k1 u^g/(g-1)
    const double k1 = 0.7, g = 2.3;
    const PressureLaw law = PressureLaw::with_powers(1.0, {{k1, g}});
    for (double u : {0.2, 1.0, 3.0}) {
        CHECK(law.G(u) == doctest::Approx(k1 * std::pow(u, g) / (g - 1.0)).epsilon(1e-13));
        // cross-check the closed form against adaptive quadrature of G''
        const double quad = oracle::integrate(
            [&](double s) { return (u - s) * (s > 0 ? k1 * g * std::pow(s, g - 2.0) : 0.0); }, 0.0,
            u, 1e-12);
        CHECK(law.G(u) == doctest::Approx(quad).epsilon(1e-9));
    }
    SUBCASE("F on the mixed law: 2 ln 2 + 4 at rho=2 for k=k1=1, g=2") {
        const PressureLaw mixed = PressureLaw::with_powers(1.0, {{1.0, 2.0}});
        CHECK(mixed.F(2.0) == doctest::Approx(2.0 * std::log(2.0) + 4.0).epsilon(1e-13));
    }
    SUBCASE("excess pressure: mixed, sigma=1, k1=2, g=3 gives 2") {
        const PressureLaw mixed = PressureLaw::with_powers(1.0, {{2.0, 3.0}});
        CHECK(mixed.excess_pressure(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("exponential law") {
    const PressureLaw law = PressureLaw::exponential();
    CHECK(law.kappa() == 1.0);
    CHECK(law.G(1.0) == doctest::Approx(kGExp1).epsilon(1e-9));
    // excess normalizes P(0): e^1 - 1 - 1 = e - 2
    CHECK(law.excess_pressure(1.0) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-14));
    CHECK(law.F(0.0) == 0.0);  // x ln x extension and G(0) = 0
}

TEST_CASE("custom law goes through quadrature") {
    // P(rho) = rho + rho^2 as a custom law must agree with the closed form.
    const PressureLaw ref = PressureLaw::with_powers(1.0, {{1.0, 2.0}});
    const PressureLaw law = PressureLaw::custom([](double r) { return r + r * r; },
                                                [](double r) { return 1.0 + 2.0 * r; },
                                                [](double) { return 2.0; });
    for (double u : {0.1, 1.0, 4.0})
        CHECK(law.G(u) == doctest::Approx(ref.G(u)).epsilon(1e-9));
}

TEST_CASE("G is zero at zero, nondecreasing and convex on a grid") {
    for (const PressureLaw& law :
         {PressureLaw::exponential(), PressureLaw::with_powers(2.0, {{0.5, 1.5}, {1.0, 3.0}})}) {
        CHECK(law.G(0.0) == 0.0);
        double prev = 0.0, prev_slope = 0.0;
        const double h = 0.05;
        for (int i = 1; i <= 60; ++i) {
            const double u = i * h;
            const double g = law.G(u);
            CHECK(g >= prev - 1e-12);
            const double slope = (g - prev) / h;
            CHECK(slope >= prev_slope - 1e-9);
            prev = g;
            prev_slope = slope;
        }
    }
}

TEST_CASE("identity F'' = P'(0)/sigma + G'' by finite differences") {
    const PressureLaw law = PressureLaw::with_powers(1.5, {{0.8, 2.5}});
    const double h = 1e-4;
    for (double s = 1e-3; s < 10.0; s *= 2.7) {
        const double hh = h * s;
        const double f2 = (law.F(s + hh) - 2.0 * law.F(s) + law.F(s - hh)) / (hh * hh);
        CHECK(f2 == doctest::Approx(law.kappa() / s + law.Gpp(s)).epsilon(1e-5));
    }
}

TEST_CASE("excess pressure is nonnegative and vanishes only for the linear law") {
    const PressureLaw iso = PressureLaw::isothermal(1.0);
    const PressureLaw mixed = PressureLaw::with_powers(1.0, {{0.5, 2.0}});
    for (double s = 0.0; s <= 5.0; s += 0.25) {
        CHECK(iso.excess_pressure(s) == 0.0);
        CHECK(mixed.excess_pressure(s) >= 0.0);
        if (s > 0) CHECK(mixed.excess_pressure(s) > 0.0);
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(PressureLaw::isothermal(-1.0), InvalidParams);
    CHECK_THROWS_AS(PressureLaw::with_powers(1.0, {{-1.0, 2.0}}), InvalidParams);
    CHECK_THROWS_AS(PressureLaw::with_powers(1.0, {{1.0, 1.0}}), InvalidParams);
    const PressureLaw law = PressureLaw::isothermal(1.0);
    CHECK_THROWS_AS(law.G(-0.5), InvalidParams);
    CHECK_THROWS_AS(law.excess_pressure(-1.0), InvalidParams);
    CHECK_THROWS_AS(xlnx(-1.0), InvalidParams);
}
