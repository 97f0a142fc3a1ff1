#include "isoflow/fokker_planck.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "isoflow/errors.hpp"

namespace isoflow {

namespace {

// Face flux F_{i+1/2} = (R_{i+1} - R_i)/dy + 2 y_f (R_i + R_{i+1})/2 with
// zero-gradient ghosts; the update is the flux difference, so mass is
// conserved up to the two boundary fluxes.
void fp_rhs(const Grid1D& grid, const std::vector<double>& R, std::vector<double>& out, Exec exec) {
    const std::size_t n = R.size();
    const double dy = grid.dy;
    std::vector<double> flux(n + 1);
    parallel_for(static_cast<std::ptrdiff_t>(n) + 1, exec, [&](std::ptrdiff_t f) {
        const std::size_t fi = static_cast<std::size_t>(f);
        const double rl = (fi == 0) ? R[0] : R[fi - 1];
        const double rr = (fi == n) ? R[n - 1] : R[fi];
        const double yf = -grid.L + dy * static_cast<double>(fi);
        flux[fi] = (rr - rl) / dy + 2.0 * yf * 0.5 * (rl + rr);
    });
    out.resize(n);
    parallel_for(static_cast<std::ptrdiff_t>(n), exec, [&](std::ptrdiff_t i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        out[ii] = (flux[ii + 1] - flux[ii]) / dy;
    });
}

}  // namespace

double fp_stable_ds(const Grid1D& grid) { return grid.dy * grid.dy / (2.0 * (1.0 + 2.0 * grid.L)); }

FPState fp_step(const FPState& state, double ds, Exec exec) {
    if (!(ds > 0)) throw InvalidParams("fp_step: ds must be > 0");
    if (ds > fp_stable_ds(state.grid) * (1.0 + 1e-9))
        throw StabilityViolation("fp_step: ds exceeds the explicit-diffusion bound");
    FPState out = state;
    std::vector<double> rhs;
    fp_rhs(state.grid, state.R, rhs, exec);
    for (std::size_t i = 0; i < out.R.size(); ++i) out.R[i] = state.R[i] + ds * rhs[i];
    out.s = state.s + ds;
    return out;
}

FPRecord fp_record(const FPState& state) {
    const double dy = state.grid.dy;
    double mass = 0.0, mass_gamma = 0.0;
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        mass += std::max(state.R[i], 0.0);
        mass_gamma += std::exp(-state.grid.centers[i] * state.grid.centers[i]);
    }
    mass *= dy;
    mass_gamma *= dy;
    FPRecord rec;
    rec.s = state.s;
    rec.mass = mass;
    if (!(mass > 0)) return rec;
    const double c = mass / mass_gamma;
    const double lnc = std::log(c);
    double l1 = 0.0, relent = 0.0;
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        const double y = state.grid.centers[i];
        const double r = std::max(state.R[i], 0.0);
        l1 += std::abs(r - c * std::exp(-y * y));
        if (r > 0) relent += r * (std::log(r) - lnc + y * y);
    }
    rec.l1_to_gamma = l1 * dy;
    rec.relative_entropy = relent * dy;
    return rec;
}

FPState fp_relax(FPState state, double s_end, double observe_every, const FPSink& sink, Exec exec) {
    if (s_end < state.s) throw InvalidParams("fp_relax: s_end must be >= state.s");
    if (!(observe_every > 0)) throw InvalidParams("fp_relax: observe_every must be > 0");
    const double ds0 = 0.9 * fp_stable_ds(state.grid);
    if (sink) sink(fp_record(state));
    double next_obs = state.s + observe_every;
    while (state.s < s_end) {
        double ds = ds0;
        const double target = std::min(next_obs, s_end);
        bool at_obs = false;
        if (state.s + ds >= target - 1e-13) {
            ds = target - state.s;
            at_obs = true;
        }
        state = fp_step(state, ds, exec);
        if (at_obs) {
            state.s = target;
            if (sink) sink(fp_record(state));
            if (target >= s_end) break;
            next_obs += observe_every;
        }
    }
    return state;
}

double fp_spectral_gap(const Grid1D& grid) {
    const int n = grid.n;
    if (n > 512) throw InvalidParams("fp_spectral_gap: dense oracle limited to n <= 512");
    if (grid.dy * grid.L >= 1.0)
        throw InvalidParams("fp_spectral_gap: dy*L must be < 1 for symmetrizability");
    const double dy = grid.dy;

    // Tridiagonal entries of the discrete operator, matching fp_rhs.
    // Interior: (M R)_i = [F_{i+1/2} - F_{i-1/2}]/dy.
    std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
    std::vector<double> upper(static_cast<std::size_t>(n - 1), 0.0);
    std::vector<double> lower(static_cast<std::size_t>(n - 1), 0.0);
    auto yface = [&](int f) { return -grid.L + dy * f; };
    for (int i = 0; i < n; ++i) {
        const double yl = yface(i), yr = yface(i + 1);
        // right face: (R_{i+1} - R_i)/dy + yr (R_i + R_{i+1}); boundary face
        // reduces to 2 yr R_i under the zero-gradient ghost.
        if (i + 1 < n) {
            diag[static_cast<std::size_t>(i)] += (-1.0 / dy + yr) / dy;
            upper[static_cast<std::size_t>(i)] += (1.0 / dy + yr) / dy;
        } else {
            diag[static_cast<std::size_t>(i)] += 2.0 * yr / dy;
        }
        // minus left face
        if (i > 0) {
            diag[static_cast<std::size_t>(i)] -= (1.0 / dy + yl) / dy;
            lower[static_cast<std::size_t>(i - 1)] -= (-1.0 / dy + yl) / dy;
        } else {
            diag[static_cast<std::size_t>(i)] -= 2.0 * yl / dy;
        }
    }

    // Diagonal similarity transform to a symmetric tridiagonal matrix:
    // the symmetrized off-diagonal is sqrt(upper_i * lower_i).
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) sym(i, i) = diag[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < n; ++i) {
        const double prod = upper[static_cast<std::size_t>(i)] * lower[static_cast<std::size_t>(i)];
        if (!(prod > 0)) throw InvalidParams("fp_spectral_gap: lost symmetrizability");
        sym(i, i + 1) = sym(i + 1, i) = std::sqrt(prod);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    // Eigenvalues are <= 0 with one near-zero conservation mode; the gap is
    // the second smallest magnitude.
    std::vector<double> mags(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(ev(i));
    std::sort(mags.begin(), mags.end());
    return mags[1];
}

}  // namespace isoflow
