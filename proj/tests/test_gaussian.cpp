#include <doctest.h>

#include <array>
#include <cmath>

#include "isoflow/errors.hpp"
#include "isoflow/gaussian.hpp"
#include "oracles.hpp"

using namespace isoflow;

namespace {

GaussianParams quantum_2d() {
    GaussianParams p;
    p.d = 2;
    p.b0 = 1.0;
    p.alpha0 = {1.0, 2.0};
    p.beta0 = {0.3, -0.1};
    p.c0 = {1.0, 0.0};
    p.kappa = 1.0;
    p.eps = 0.5;
    p.nu = 0.2;
    return p;
}

}  // namespace

// Frozen from the RK4 oracle (h = 1e-6) on the per-axis ODEs of quantum_2d().
constexpr double kTau1_5 = 12.751385520018351;
constexpr double kTaudot1_5 = 3.1494609396664046;
constexpr double kTau2_5 = 19.069870406606949;
constexpr double kTaudot2_5 = 4.7754041111279806;
constexpr double kB_5 = 0.004112395564521947;
constexpr double kRho11_5 = 0.0037065583675001878;
constexpr double kU11x_5 = 0.012041182592408384;
constexpr double kU11y_5 = 0.25041618056688492;

TEST_CASE("state at t=0 reproduces the initial data") {
    const GaussianParams p = quantum_2d();
    const GaussianState st = evolve_gaussian(p, 0.0);
    CHECK(st.b == p.b0);
    for (int j = 0; j < 2; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        CHECK(st.alpha[ju] == p.alpha0[ju]);
        CHECK(st.beta[ju] == p.beta0[ju]);
        CHECK(st.xbar[ju] == 0.0);
        CHECK(st.c[ju] == p.c0[ju]);
    }
}

TEST_CASE("centered Euler case reduces to the scaling ODE") {
    GaussianParams p;
    p.d = 1;
    p.alpha0 = {1.0};
    p.beta0 = {0.0};
    p.c0 = {0.0};
    p.kappa = 1.0;
    const GaussianSolution sol(p, 10.0);
    const TauTrajectory ref = integrate_tau({1.0, 0.0, 1.0, 0.0, 0.0}, 10.0);
    for (double t : {0.5, 2.0, 7.5}) {
        const GaussianState st = sol.state_at(t);
        CHECK(st.tauj[0] == doctest::Approx(ref.tau(t)).epsilon(1e-9));
        CHECK(st.xbar[0] == 0.0);
        CHECK(st.c[0] == 0.0);
    }
}

TEST_CASE("quantum Navier-Stokes 2-D state matches the RK4 oracle at t=5") {
    const GaussianState st = evolve_gaussian(quantum_2d(), 5.0);
    CHECK(st.tauj[0] == doctest::Approx(kTau1_5).epsilon(1e-8));
    CHECK(st.taujdot[0] == doctest::Approx(kTaudot1_5).epsilon(1e-8));
    CHECK(st.tauj[1] == doctest::Approx(kTau2_5).epsilon(1e-8));
    CHECK(st.taujdot[1] == doctest::Approx(kTaudot2_5).epsilon(1e-8));
    CHECK(st.b == doctest::Approx(kB_5).epsilon(1e-8));
    CHECK(st.xbar[0] == 5.0);
    CHECK(st.xbar[1] == 0.0);
    const std::array<double, 2> x{1.0, 1.0};
    CHECK(density_at(st, x) == doctest::Approx(kRho11_5).epsilon(1e-8));
    const auto u = velocity_at(st, x);
    CHECK(u[0] == doctest::Approx(kU11x_5).epsilon(1e-7));
    CHECK(u[1] == doctest::Approx(kU11y_5).epsilon(1e-8));
}

TEST_CASE("density and velocity closed forms") {
    const GaussianState st = evolve_gaussian(quantum_2d(), 3.0);
    SUBCASE("peak value at the center") {
        CHECK(density_at(st, st.xbar) == doctest::Approx(st.b).epsilon(1e-14));
    }
    SUBCASE("Gaussian decay far away") {
        const std::array<double, 2> far{st.xbar[0] + 50.0, st.xbar[1] - 50.0};
        CHECK(density_at(st, far) < 1e-30);
    }
    SUBCASE("velocity at the origin is the offset") {
        const std::array<double, 2> zero{0.0, 0.0};
        const auto u = velocity_at(st, zero);
        CHECK(u[0] == st.c[0]);
        CHECK(u[1] == st.c[1]);
    }
    SUBCASE("zero slope and offset give the zero field") {
        GaussianParams p;
        p.d = 1;
        p.alpha0 = {1.0};
        p.beta0 = {0.0};
        p.c0 = {0.0};
        const GaussianState rest = evolve_gaussian(p, 0.0);
        const std::array<double, 1> x{0.7};
        CHECK(velocity_at(rest, x)[0] == 0.0);
    }
}

TEST_CASE("mass is conserved along the family") {
    const GaussianParams p = quantum_2d();
    const GaussianSolution sol(p, 50.0);
    auto mass = [&](const GaussianState& st) {
        double m = st.b;
        for (double a : st.alpha) m *= std::sqrt(M_PI / a);
        return m;
    };
    const double m0 = mass(sol.state_at(0.0));
    for (double t : {0.1, 1.0, 10.0, 50.0})
        CHECK(mass(sol.state_at(t)) == doctest::Approx(m0).epsilon(1e-9));
}

TEST_CASE("center law and offset decay") {
    GaussianParams p;
    p.d = 1;
    p.alpha0 = {1.0};
    p.beta0 = {0.0};
    p.c0 = {0.8};
    p.kappa = 1.0;
    const GaussianSolution sol(p, 1e4);
    SUBCASE("centers move ballistically, exactly") {
        for (double t : {0.25, 3.0, 100.0}) CHECK(sol.state_at(t).xbar[0] == 0.8 * t);
    }
    SUBCASE("velocity offsets decay to zero") {
        double prev = std::abs(sol.state_at(1e2).c[0]);
        for (double t : {1e3, 1e4}) {
            const double cur = std::abs(sol.state_at(t).c[0]);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("universal dispersion rate across the family") {
    // b(t) * prod_j 2t sqrt(kappa alpha0_j ln t) / b0 -> 1, regardless of eps, nu.
    for (auto [eps, nu] : {std::pair{0.0, 0.0}, {0.5, 0.2}}) {
        GaussianParams p;
        p.d = 2;
        p.b0 = 2.0;
        p.alpha0 = {1.0, 0.5};
        p.beta0 = {0.0, 0.0};
        p.c0 = {0.0, 0.0};
        p.kappa = 1.0;
        p.eps = eps;
        p.nu = nu;
        const GaussianSolution sol(p, 1e4);
        auto ratio = [&](double t) {
            const GaussianState st = sol.state_at(t);
            double prod = 1.0;
            for (double a0 : p.alpha0) prod *= 2.0 * t * std::sqrt(p.kappa * a0 * std::log(t));
            return st.b * prod / p.b0;
        };
        const double early = std::abs(ratio(1e2) - 1.0);
        const double late = std::abs(ratio(1e4) - 1.0);
        CHECK(late < early);
        CHECK(late < 0.5);
    }
}

TEST_CASE("pde_residual converges at second order") {
    SUBCASE("Euler") {
        GaussianParams p;
        p.d = 1;
        p.alpha0 = {1.0};
        p.beta0 = {0.3};
        p.c0 = {0.5};
        p.kappa = 1.0;
        const PdeResidual rh = pde_residual(p, 1.0, 0.08);
        const PdeResidual rh2 = pde_residual(p, 1.0, 0.04);
        CHECK(rh.mass / rh2.mass == doctest::Approx(4.0).epsilon(0.3));
        CHECK(rh.momentum / rh2.momentum == doctest::Approx(4.0).epsilon(0.3));
    }
    SUBCASE("Korteweg and quantum Navier-Stokes") {
        GaussianParams p;
        p.d = 1;
        p.alpha0 = {1.0};
        p.beta0 = {0.0};
        p.c0 = {0.0};
        p.kappa = 1.0;
        p.eps = 0.5;
        p.nu = 0.3;
        const PdeResidual rh = pde_residual(p, 1.0, 0.08);
        const PdeResidual rh2 = pde_residual(p, 1.0, 0.04);
        CHECK(rh.momentum / rh2.momentum == doctest::Approx(4.0).epsilon(0.3));
    }
}

TEST_CASE("pde_residual static and coarse checks") {
    GaussianParams p;
    p.d = 1;
    p.alpha0 = {1.0};
    p.beta0 = {0.0};
    p.c0 = {0.0};
    p.kappa = 1.0;
    SUBCASE("static check at t=0: mass residual at discretization level") {
        const PdeResidual r = pde_residual(p, 0.0, 0.05);
        CHECK(r.mass < 0.05 * 0.05);
    }
    SUBCASE("a coarse mesh does not resolve the dynamics") {
        const PdeResidual coarse = pde_residual(p, 1.0, 1.0);
        const PdeResidual fine = pde_residual(p, 1.0, 0.02);
        CHECK(coarse.momentum > 20.0 * fine.momentum);
    }
}

TEST_CASE("validation") {
    GaussianParams p;
    p.d = 1;
    p.alpha0 = {1.0};
    p.beta0 = {0.0};
    p.c0 = {0.0};
    CHECK_THROWS_AS(evolve_gaussian(p, -1.0), InvalidParams);
    p.alpha0 = {-1.0};
    CHECK_THROWS_AS(evolve_gaussian(p, 1.0), InvalidParams);
    p.alpha0 = {1.0, 2.0};
    CHECK_THROWS_AS(evolve_gaussian(p, 1.0), InvalidParams);
    GaussianParams q = quantum_2d();
    q.b0 = 0.0;
    CHECK_THROWS_AS(evolve_gaussian(q, 1.0), InvalidParams);
    CHECK_THROWS_AS(pde_residual(quantum_2d(), 1.0, -0.1), InvalidParams);
}
