#include <doctest.h>

#include <cmath>
#include <vector>

#include "isoflow/errors.hpp"
#include "isoflow/fokker_planck.hpp"

using namespace isoflow;

namespace {

FPState gamma_fp(double L, int n) {
    FPState st;
    st.grid = Grid1D::uniform(L, n);
    st.R.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < st.R.size(); ++i)
        st.R[i] = std::exp(-st.grid.centers[i] * st.grid.centers[i]);
    return st;
}

double mean_of(const FPState& st) {
    double m = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        m += st.grid.centers[i] * st.R[i];
        mass += st.R[i];
    }
    return m / mass;
}

double second_moment_of(const FPState& st) {
    double m = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        m += st.grid.centers[i] * st.grid.centers[i] * st.R[i];
        mass += st.R[i];
    }
    return m / mass;
}

}  // namespace

TEST_CASE("Gamma is stationary up to O(dy^2)") {
    auto residual = [](int n) {
        FPState st = gamma_fp(10.0, n);
        const double ds = fp_stable_ds(st.grid);
        const FPState next = fp_step(st, ds);
        double r = 0.0;
        for (std::size_t i = 0; i < st.R.size(); ++i)
            r = std::max(r, std::abs(next.R[i] - st.R[i]) / ds);
        return r;
    };
    const double r256 = residual(256);
    const double r512 = residual(512);
    CHECK(r256 < 0.1);
    CHECK(r256 / r512 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("zero stays zero") {
    FPState st;
    st.grid = Grid1D::uniform(10.0, 256);
    st.R.assign(256, 0.0);
    const FPState next = fp_step(st, fp_stable_ds(st.grid));
    for (double r : next.R) CHECK(r == 0.0);
}

TEST_CASE("off-center Gaussian: mean and variance follow the closed ODEs") {
    FPState st;
    st.grid = Grid1D::uniform(10.0, 400);
    st.R.resize(400);
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        const double y = st.grid.centers[i] - 1.0;
        st.R[i] = std::exp(-y * y);
    }
    const double m0 = mean_of(st);
    const double v0 = second_moment_of(st);
    const double s_end = 0.4;
    st = fp_relax(std::move(st), s_end, s_end);
    // m(s) = m0 exp(-2s), v(s) - 1/2 = (v0 - 1/2) exp(-4s)
    CHECK(mean_of(st) == doctest::Approx(m0 * std::exp(-2.0 * s_end)).epsilon(2e-3));
    CHECK(second_moment_of(st) - 0.5 ==
          doctest::Approx((v0 - 0.5) * std::exp(-4.0 * s_end)).epsilon(5e-3));
    CHECK(mean_of(st) < m0);
}

TEST_CASE("mass conservation and entropy monotonicity on a double bump") {
    FPState st;
    st.grid = Grid1D::uniform(10.0, 256);
    st.R.resize(256);
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        const double y = st.grid.centers[i];
        st.R[i] = std::exp(-4.0 * (y - 1.5) * (y - 1.5)) + std::exp(-4.0 * (y + 1.5) * (y + 1.5));
    }
    std::vector<FPRecord> recs;
    st = fp_relax(std::move(st), 1.5, 0.05, [&](const FPRecord& r) { recs.push_back(r); });
    REQUIRE(recs.size() == 31);
    for (const auto& r : recs) {
        CHECK(std::abs(r.mass - recs.front().mass) / recs.front().mass < 1e-10);
    }
    for (std::size_t i = 1; i < recs.size(); ++i)
        CHECK(recs[i].relative_entropy <=
              recs[i - 1].relative_entropy + 1e-9 * recs.front().relative_entropy);
    // L1 distance to the mass-matched Gaussian shrinks
    CHECK(recs.back().l1_to_gamma < 0.2 * recs.front().l1_to_gamma);
}

TEST_CASE("starting at Gamma keeps all records at discretization level") {
    FPState st = gamma_fp(10.0, 256);
    std::vector<FPRecord> recs;
    fp_relax(std::move(st), 0.5, 0.1, [&](const FPRecord& r) { recs.push_back(r); });
    for (const auto& r : recs) {
        CHECK(r.l1_to_gamma < 1e-3);
        CHECK(r.relative_entropy < 1e-5);
    }
}

TEST_CASE("stability guard") {
    FPState st = gamma_fp(10.0, 128);
    CHECK_THROWS_AS(fp_step(st, 10.0 * fp_stable_ds(st.grid)), StabilityViolation);
    CHECK_THROWS_AS(fp_step(st, -1.0), InvalidParams);
}

TEST_CASE("serial and parallel updates are bitwise identical") {
    FPState a = gamma_fp(10.0, 512);
    for (std::size_t i = 0; i < a.R.size(); ++i) a.R[i] *= 1.0 + 0.3 * std::sin(3.0 * a.grid.centers[i]);
    FPState b = a;
    const double ds = 0.9 * fp_stable_ds(a.grid);
    for (int k = 0; k < 25; ++k) {
        a = fp_step(a, ds, Exec::Serial);
        b = fp_step(b, ds, Exec::Parallel);
    }
    for (std::size_t i = 0; i < a.R.size(); ++i) CHECK(a.R[i] == b.R[i]);
}

TEST_CASE("spectral gap of the discrete operator is near 2") {
    const Grid1D grid = Grid1D::uniform(10.0, 256);
    const double gap = fp_spectral_gap(grid);
    CHECK(gap == doctest::Approx(2.0).epsilon(0.05));
    CHECK_THROWS_AS(fp_spectral_gap(Grid1D::uniform(10.0, 600)), InvalidParams);
}

TEST_CASE("relative entropy decays at the spectral rate") {
    const Grid1D grid = Grid1D::uniform(6.0, 128);
    FPState st;
    st.grid = grid;
    st.R.resize(128);
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        const double y = grid.centers[i];
        st.R[i] = std::exp(-2.0 * (y - 0.8) * (y - 0.8));
    }
    std::vector<FPRecord> recs;
    fp_relax(std::move(st), 2.0, 0.02, [&](const FPRecord& r) { recs.push_back(r); });
    // fit ln H over the clean window; H ~ exp(-2 lambda s) near equilibrium
    const double h0 = recs.front().relative_entropy;
    const double hend = recs.back().relative_entropy;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& r : recs) {
        const double h = r.relative_entropy - hend;
        if (r.relative_entropy < 0.3 * h0 && h > 50.0 * std::abs(hend)) {
            sx += r.s;
            sy += std::log(h);
            sxx += r.s * r.s;
            sxy += r.s * std::log(h);
            ++count;
        }
    }
    REQUIRE(count >= 5);
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double rate = -0.5 * slope;
    const double gap = fp_spectral_gap(grid);
    CHECK(std::abs(rate - gap) / gap < 0.1);
}
