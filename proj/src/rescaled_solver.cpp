#include "isoflow/rescaled_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "isoflow/errors.hpp"

namespace isoflow {

namespace {

// Linear interpolation of samples f on a strictly increasing grid x;
// constant extrapolation outside.
double lerp_at(std::span<const double> x, std::span<const double> f, double xi) {
    if (xi <= x.front()) return f.front();
    if (xi >= x.back()) return f.back();
    const auto it = std::upper_bound(x.begin(), x.end(), xi);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double w = (xi - x[i]) / (x[i + 1] - x[i]);
    return (1.0 - w) * f[i] + w * f[i + 1];
}

constexpr int kGhost = 2;

// Padded work arrays for one RHS evaluation. Index [kGhost, kGhost+n).
struct Workspace {
    std::vector<double> R, M, U, S;        // padded cell values (S = sqrt R)
    std::vector<double> d2S;               // padded cell-centered second difference of S
    std::vector<double> FR, FM;            // face fluxes, size n+1
    std::vector<double> dR, dM;            // cell RHS, size n

    void resize(std::size_t n) {
        R.resize(n + 2 * kGhost);
        M.resize(n + 2 * kGhost);
        U.resize(n + 2 * kGhost);
        S.resize(n + 2 * kGhost);
        d2S.resize(n + 2 * kGhost);
        FR.resize(n + 1);
        FM.resize(n + 1);
        dR.resize(n);
        dM.resize(n);
    }
};

void fill_ghosts(std::vector<double>& a, std::size_t n, Boundary bc) {
    if (bc == Boundary::Periodic) {
        for (int g = 0; g < kGhost; ++g) {
            a[static_cast<std::size_t>(kGhost - 1 - g)] = a[n + static_cast<std::size_t>(kGhost - 1 - g)];
            a[n + static_cast<std::size_t>(kGhost + g)] = a[static_cast<std::size_t>(kGhost + g)];
        }
    } else {
        for (int g = 0; g < kGhost; ++g) {
            a[static_cast<std::size_t>(g)] = a[kGhost];
            a[n + static_cast<std::size_t>(kGhost + g)] = a[n + kGhost - 1];
        }
    }
}

// RHS of the semi-discrete rescaled system at fixed (tau, taudot).
void compute_rhs(const FluidState1D& state, const std::vector<double>& R,
                 const std::vector<double>& M, double tau, double taudot, Boundary bc, Exec exec,
                 Workspace& w) {
    const std::size_t n = R.size();
    const Grid1D& grid = state.grid;
    const ModelParams& mp = state.model;
    const PressureLaw& law = mp.law;
    const double dy = grid.dy;
    const double t2 = tau * tau;
    const double taud = std::pow(tau, mp.d);
    const double theta = state.theta;
    const double kappa = law.kappa();

    w.resize(n);
    double rmax = 0.0;
    for (double r : R) rmax = std::max(rmax, r);
    const double floor = 1e-12 * rmax;

    for (std::size_t i = 0; i < n; ++i) {
        w.R[kGhost + i] = R[i];
        w.M[kGhost + i] = M[i];
    }
    fill_ghosts(w.R, n, bc);
    fill_ghosts(w.M, n, bc);
    const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(n) + 2 * kGhost;
    parallel_for(np, exec, [&](std::ptrdiff_t i) {
        const double r = w.R[static_cast<std::size_t>(i)];
        w.U[static_cast<std::size_t>(i)] = r > floor ? w.M[static_cast<std::size_t>(i)] / r : 0.0;
        w.S[static_cast<std::size_t>(i)] = std::sqrt(std::max(r, 0.0));
    });
    parallel_for(np - 2, exec, [&](std::ptrdiff_t i) {
        const std::size_t j = static_cast<std::size_t>(i) + 1;
        w.d2S[j] = (w.S[j + 1] - 2.0 * w.S[j] + w.S[j - 1]) / (dy * dy);
    });
    w.d2S[0] = w.d2S[1];
    w.d2S[static_cast<std::size_t>(np - 1)] = w.d2S[static_cast<std::size_t>(np - 2)];

    const bool has_eps = mp.eps > 0;
    const bool has_nu = mp.nu > 0;
    parallel_for(static_cast<std::ptrdiff_t>(n) + 1, exec, [&](std::ptrdiff_t f) {
        const std::size_t iL = static_cast<std::size_t>(f) + kGhost - 1;
        const std::size_t iR = iL + 1;
        const double rl = w.R[iL], rr = w.R[iR];
        const double ml = w.M[iL], mr = w.M[iR];
        const double ul = w.U[iL], ur = w.U[iR];
        const double pl = law.p1(std::max(theta * rl / taud, 0.0));
        const double pr = law.p1(std::max(theta * rr / taud, 0.0));
        const double a = std::max(std::abs(ul), std::abs(ur)) / t2 +
                         std::sqrt(std::max(pl, pr)) / tau;
        double fr = 0.5 * (ml + mr) / t2 - 0.5 * a * (rr - rl);
        double fm = 0.5 * (ml * ul + mr * ur) / t2 - 0.5 * a * (mr - ml);
        if (has_nu) {
            // momentum RHS += d_y[(nu/tau^2) R d_y U + (nu taudot/tau) R]
            const double rf = 0.5 * (rl + rr);
            fm -= (mp.nu / t2) * rf * (ur - ul) / dy;
            fm -= (mp.nu * taudot / tau) * rf;
        }
        if (has_eps) {
            // momentum RHS += (eps^2 / 2 tau^2) d_y S_K, S_K assembled at faces
            const double sf = 0.5 * (w.S[iL] + w.S[iR]);
            const double dsf = (w.S[iR] - w.S[iL]) / dy;
            const double d2sf = 0.5 * (w.d2S[iL] + w.d2S[iR]);
            const double sk = sf * d2sf - dsf * dsf;
            fm -= (0.5 * mp.eps * mp.eps / t2) * sk;
        }
        w.FR[static_cast<std::size_t>(f)] = fr;
        w.FM[static_cast<std::size_t>(f)] = fm;
    });

    parallel_for(static_cast<std::ptrdiff_t>(n), exec, [&](std::ptrdiff_t i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        const double y = grid.centers[ii];
        const double r = w.R[kGhost + ii];
        w.dR[ii] = -(w.FR[ii + 1] - w.FR[ii]) / dy;
        const double drdy = (w.R[kGhost + ii + 1] - w.R[kGhost + ii - 1]) / (2.0 * dy);
        w.dM[ii] = -(w.FM[ii + 1] - w.FM[ii]) / dy - 2.0 * kappa * y * r -
                   law.p1(std::max(theta * r / taud, 0.0)) * drdy;
    });
}

// Clamp round-off negatives, fail on anything lower, and zero the momentum
// of vacuum cells.
void enforce_floor(std::vector<double>& R, std::vector<double>& M) {
    double rmax = 0.0;
    for (double r : R) rmax = std::max(rmax, r);
    const double floor = 1e-12 * rmax;
    for (std::size_t i = 0; i < R.size(); ++i) {
        if (R[i] < -1e-14)
            throw NegativeDensity("step: density fell below -1e-14 (scheme failure)");
        if (R[i] < 0.0) R[i] = 0.0;
        if (R[i] <= floor) M[i] = 0.0;
    }
}

}  // namespace

FluidState1D to_rescaled(std::span<const double> x, std::span<const double> rho,
                         std::span<const double> u, const TauTrajectory& traj, double t,
                         double theta, const Grid1D& grid, const ModelParams& model) {
    if (x.size() != rho.size() || x.size() != u.size() || x.size() < 2)
        throw InvalidParams("to_rescaled: field arrays must have equal length >= 2");
    if (!(theta > 0)) throw InvalidParams("to_rescaled: theta must be > 0");
    const double tau = traj.tau(t);
    const double taudot = traj.taudot(t);
    const double taud = std::pow(tau, model.d);
    FluidState1D st;
    st.t = t;
    st.grid = grid;
    st.theta = theta;
    st.model = model;
    st.R.resize(static_cast<std::size_t>(grid.n));
    st.RU.resize(static_cast<std::size_t>(grid.n));
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        const double y = grid.centers[i];
        const double xi = tau * y;
        const double r = taud * lerp_at(x, rho, xi) / theta;
        const double uu = tau * lerp_at(x, u, xi) - taudot * tau * y;
        st.R[i] = std::max(r, 0.0);
        st.RU[i] = st.R[i] * uu;
    }
    const double floor = vacuum_floor(st.R);
    for (std::size_t i = 0; i < st.R.size(); ++i)
        if (st.R[i] <= floor) st.RU[i] = 0.0;
    return st;
}

PhysicalFields to_physical(const FluidState1D& state, const TauTrajectory& traj) {
    const double tau = traj.tau(state.t);
    const double taudot = traj.taudot(state.t);
    const double taud = std::pow(tau, state.model.d);
    const std::vector<double> U = reconstruct_velocity(state);
    PhysicalFields out;
    out.x.resize(state.R.size());
    out.rho.resize(state.R.size());
    out.u.resize(state.R.size());
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        const double y = state.grid.centers[i];
        out.x[i] = tau * y;
        out.rho[i] = state.theta * state.R[i] / taud;
        out.u[i] = U[i] / tau + (taudot / tau) * (tau * y);
    }
    return out;
}

double stable_dt(const FluidState1D& state, const TauTrajectory& traj) {
    const double tau = traj.tau(state.t);
    const ModelParams& mp = state.model;
    const double taud = std::pow(tau, mp.d);
    const double dy = state.grid.dy;
    const std::vector<double> U = reconstruct_velocity(state);
    double lam = 0.0;
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        const double p1 = mp.law.p1(std::max(state.theta * state.R[i] / taud, 0.0));
        lam = std::max(lam, std::abs(U[i]) / (tau * tau) + std::sqrt(std::max(p1, 0.0)) / tau);
    }
    double dt = dy / lam;
    if (mp.nu > 0) dt = std::min(dt, dy * dy * tau * tau / (2.0 * mp.nu));
    if (mp.eps > 0) dt = std::min(dt, 2.0 * dy * dy * tau * tau / mp.eps);
    return 0.4 * dt;
}

FluidState1D step(const FluidState1D& state, const TauTrajectory& traj, double dt, Exec exec,
                  Boundary bc) {
    if (!(dt > 0)) throw InvalidParams("step: dt must be > 0");
    if (dt > stable_dt(state, traj) * (1.0 + 1e-9))
        throw CFLViolation("step: dt exceeds the stability bound from stable_dt");
    const std::size_t n = state.R.size();
    Workspace w;

    FluidState1D s1 = state;
    compute_rhs(state, state.R, state.RU, traj.tau(state.t), traj.taudot(state.t), bc, exec, w);
    for (std::size_t i = 0; i < n; ++i) {
        s1.R[i] = state.R[i] + dt * w.dR[i];
        s1.RU[i] = state.RU[i] + dt * w.dM[i];
    }
    enforce_floor(s1.R, s1.RU);

    const double t1 = state.t + dt;
    compute_rhs(state, s1.R, s1.RU, traj.tau(t1), traj.taudot(t1), bc, exec, w);
    FluidState1D out = state;
    out.t = t1;
    for (std::size_t i = 0; i < n; ++i) {
        out.R[i] = 0.5 * (state.R[i] + s1.R[i] + dt * w.dR[i]);
        out.RU[i] = 0.5 * (state.RU[i] + s1.RU[i] + dt * w.dM[i]);
    }
    enforce_floor(out.R, out.RU);
    return out;
}

FluidState1D run(FluidState1D state, const TauTrajectory& traj, double t_end, double observe_every,
                 const DiagnosticsSink& sink, Exec exec) {
    if (t_end < state.t) throw InvalidParams("run: t_end must be >= state.t");
    if (!(observe_every > 0)) throw InvalidParams("run: observe_every must be > 0");
    if (sink) sink(make_record(state, traj));
    if (t_end == state.t) return state;
    double next_obs = state.t + observe_every;
    while (state.t < t_end) {
        double dt = stable_dt(state, traj);
        const double target = std::min(next_obs, t_end);
        bool at_obs = false;
        if (state.t + dt >= target - 1e-13 * std::max(1.0, target)) {
            dt = target - state.t;
            at_obs = true;
        }
        state = step(state, traj, dt, exec);
        if (at_obs) {
            state.t = target;  // pin against round-off drift of repeated addition
            if (sink) sink(make_record(state, traj));
            if (target >= t_end) break;
            next_obs += observe_every;
        }
    }
    return state;
}

void write_frame_csv(const FluidState1D& state, std::ostream& os) {
    os << "y,R,RU,U\n";
    const std::vector<double> U = reconstruct_velocity(state);
    char buf[160];
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", state.grid.centers[i],
                      state.R[i], state.RU[i], U[i]);
        os << buf;
    }
}

}  // namespace isoflow
