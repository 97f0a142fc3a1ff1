#include "isoflow/isentropic.hpp"

#include <algorithm>
#include <cmath>

#include "isoflow/diagnostics.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/rescaled_solver.hpp"

namespace isoflow {

void validate(const IsentropicConfig& cfg) {
    if (cfg.d < 1) throw InvalidParams("IsentropicConfig: d must be >= 1");
    if (!(cfg.gamma > 1.0) || cfg.gamma > 1.0 + 2.0 / cfg.d)
        throw InvalidParams("IsentropicConfig: gamma must lie in (1, 1 + 2/d]");
    if (!(cfg.kappa > 0)) throw InvalidParams("IsentropicConfig: kappa must be > 0");
    if (!(cfg.sigma_end > 0) || cfg.sigma_end > 1.0)
        throw InvalidParams("IsentropicConfig: sigma_end must lie in (0, 1]");
}

double isentropic_exponent(const IsentropicConfig& cfg) {
    if (cfg.gamma == 1.0 + 2.0 / cfg.d) return 0.0;  // exact integer exponent
    return cfg.d * cfg.gamma - cfg.d - 2.0;
}

namespace {

double pressure_coeff(const IsentropicConfig& cfg, double sigma) {
    const double p = isentropic_exponent(cfg);
    if (p == 0.0) return cfg.kappa;
    return cfg.kappa * std::pow(1.0 - sigma, p);
}

void isentropic_rhs(const IsentropicConfig& cfg, const std::vector<double>& R,
                    const std::vector<double>& M, double sigma, Boundary bc, Exec exec,
                    std::vector<double>& dR, std::vector<double>& dM) {
    const std::size_t n = R.size();
    const double dy = cfg.grid.dy;
    const double kc = pressure_coeff(cfg, sigma);
    const double g = cfg.gamma;

    double rmax = 0.0;
    for (double r : R) rmax = std::max(rmax, r);
    const double floor = 1e-12 * rmax;

    auto cell = [&](std::ptrdiff_t i) -> std::pair<double, double> {
        if (i < 0) {
            if (bc == Boundary::Periodic) i += static_cast<std::ptrdiff_t>(n);
            else i = 0;
        } else if (i >= static_cast<std::ptrdiff_t>(n)) {
            if (bc == Boundary::Periodic) i -= static_cast<std::ptrdiff_t>(n);
            else i = static_cast<std::ptrdiff_t>(n) - 1;
        }
        return {R[static_cast<std::size_t>(i)], M[static_cast<std::size_t>(i)]};
    };

    std::vector<double> FR(n + 1), FM(n + 1);
    parallel_for(static_cast<std::ptrdiff_t>(n) + 1, exec, [&](std::ptrdiff_t f) {
        const auto [rl, ml] = cell(f - 1);
        const auto [rr, mr] = cell(f);
        const double ul = rl > floor ? ml / rl : 0.0;
        const double ur = rr > floor ? mr / rr : 0.0;
        const double cl = std::sqrt(g * kc * std::pow(std::max(rl, 0.0), g - 1.0));
        const double cr = std::sqrt(g * kc * std::pow(std::max(rr, 0.0), g - 1.0));
        const double a = std::max(std::abs(ul) + cl, std::abs(ur) + cr);
        FR[static_cast<std::size_t>(f)] = 0.5 * (ml + mr) - 0.5 * a * (rr - rl);
        FM[static_cast<std::size_t>(f)] =
            0.5 * (ml * ul + kc * std::pow(std::max(rl, 0.0), g) + mr * ur +
                   kc * std::pow(std::max(rr, 0.0), g)) -
            0.5 * a * (mr - ml);
    });
    dR.resize(n);
    dM.resize(n);
    parallel_for(static_cast<std::ptrdiff_t>(n), exec, [&](std::ptrdiff_t i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        dR[ii] = -(FR[ii + 1] - FR[ii]) / dy;
        dM[ii] = -(FM[ii + 1] - FM[ii]) / dy;
    });
}

void enforce_floor(std::vector<double>& R, std::vector<double>& M) {
    double rmax = 0.0;
    for (double r : R) rmax = std::max(rmax, r);
    const double floor = 1e-12 * rmax;
    for (std::size_t i = 0; i < R.size(); ++i) {
        if (R[i] < -1e-14)
            throw NegativeDensity("isentropic_step: density fell below -1e-14");
        if (R[i] < 0.0) R[i] = 0.0;
        if (R[i] <= floor) M[i] = 0.0;
    }
}

}  // namespace

double isentropic_stable_dsigma(const IsentropicConfig& cfg, const IsentropicState& state) {
    const double kc = pressure_coeff(cfg, state.sigma);
    double rmax = 0.0;
    for (double r : state.R) rmax = std::max(rmax, r);
    const double floor = 1e-12 * rmax;
    double a = 0.0;
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        const double r = std::max(state.R[i], 0.0);
        const double u = state.R[i] > floor ? state.RU[i] / state.R[i] : 0.0;
        a = std::max(a, std::abs(u) + std::sqrt(cfg.gamma * kc * std::pow(r, cfg.gamma - 1.0)));
    }
    if (a == 0.0) return cfg.cfl * cfg.grid.dy;
    return cfg.cfl * cfg.grid.dy / a;
}

IsentropicState isentropic_step(const IsentropicConfig& cfg, const IsentropicState& state,
                                double dsigma, Exec exec, Boundary bc) {
    if (!(dsigma > 0)) throw InvalidParams("isentropic_step: dsigma must be > 0");
    if (dsigma > isentropic_stable_dsigma(cfg, state) * (1.0 + 1e-9))
        throw CFLViolation("isentropic_step: dsigma exceeds the CFL bound");
    const std::size_t n = state.R.size();
    std::vector<double> dR, dM;
    isentropic_rhs(cfg, state.R, state.RU, state.sigma, bc, exec, dR, dM);
    IsentropicState s1 = state;
    for (std::size_t i = 0; i < n; ++i) {
        s1.R[i] = state.R[i] + dsigma * dR[i];
        s1.RU[i] = state.RU[i] + dsigma * dM[i];
    }
    enforce_floor(s1.R, s1.RU);
    isentropic_rhs(cfg, s1.R, s1.RU, state.sigma + dsigma, bc, exec, dR, dM);
    IsentropicState out = state;
    out.sigma = state.sigma + dsigma;
    for (std::size_t i = 0; i < n; ++i) {
        out.R[i] = 0.5 * (state.R[i] + s1.R[i] + dsigma * dR[i]);
        out.RU[i] = 0.5 * (state.RU[i] + s1.RU[i] + dsigma * dM[i]);
    }
    enforce_floor(out.R, out.RU);
    return out;
}

IsentropicState isentropic_run(const IsentropicConfig& cfg, IsentropicState state, double sigma_end,
                               Exec exec) {
    while (state.sigma < sigma_end) {
        double ds = isentropic_stable_dsigma(cfg, state);
        if (state.sigma + ds > sigma_end) ds = sigma_end - state.sigma;
        state = isentropic_step(cfg, state, ds, exec);
    }
    return state;
}

std::vector<double> symmetrized_density(const IsentropicConfig& cfg, const std::vector<double>& R) {
    std::vector<double> out(R.size());
    const double e = 0.5 * (cfg.gamma - 1.0);
    for (std::size_t i = 0; i < R.size(); ++i) out[i] = std::pow(std::max(R[i], 0.0), e);
    return out;
}

IsentropicPhysical isentropic_to_physical(const IsentropicConfig& cfg, const IsentropicState& state,
                                          const Grid1D& grid) {
    const double sigma = state.sigma;
    if (!(sigma < 1.0)) throw DomainError("isentropic_to_physical: sigma must be < 1");
    const double t = sigma / (1.0 - sigma);
    const double s = 1.0 + t;  // 1/(1 - sigma)
    IsentropicPhysical out;
    const std::size_t n = state.R.size();
    out.x.resize(n);
    out.rho.resize(n);
    out.u.resize(n);
    double rmax = 0.0;
    for (double r : state.R) rmax = std::max(rmax, r);
    const double floor = 1e-12 * rmax;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = grid.centers[i];
        const double U = state.R[i] > floor ? state.RU[i] / state.R[i] : 0.0;
        out.x[i] = s * y;
        out.rho[i] = state.R[i] / std::pow(s, cfg.d);
        out.u[i] = (s * y) / s + U / s;
    }
    return out;
}

IsentropicState isentropic_from_physical(const IsentropicConfig& cfg, double t,
                                         const std::vector<double>& x,
                                         const std::vector<double>& rho,
                                         const std::vector<double>& u, const Grid1D& grid) {
    if (t < 0) throw InvalidParams("isentropic_from_physical: t must be >= 0");
    const double s = 1.0 + t;
    IsentropicState st;
    st.sigma = t / (1.0 + t);
    st.R.resize(static_cast<std::size_t>(grid.n));
    st.RU.resize(static_cast<std::size_t>(grid.n));
    auto lerp = [&](const std::vector<double>& f, double xi) {
        if (xi <= x.front()) return f.front();
        if (xi >= x.back()) return f.back();
        const auto it = std::upper_bound(x.begin(), x.end(), xi);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double w = (xi - x[i]) / (x[i + 1] - x[i]);
        return (1.0 - w) * f[i] + w * f[i + 1];
    };
    for (std::size_t i = 0; i < st.R.size(); ++i) {
        const double y = grid.centers[i];
        const double xi = s * y;
        st.R[i] = std::max(std::pow(s, cfg.d) * lerp(rho, xi), 0.0);
        const double U = s * lerp(u, xi) - xi;
        st.RU[i] = st.R[i] * U;
    }
    return st;
}

namespace {

double l1_dist(const std::vector<double>& a, const std::vector<double>& b, double dy) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s * dy;
}

double l1_to_matched_gamma(const std::vector<double>& R, const Grid1D& grid) {
    double mass = 0.0, mg = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
        mass += std::max(R[i], 0.0);
        mg += std::exp(-grid.centers[i] * grid.centers[i]);
    }
    const double c = mass / mg;
    double s = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i)
        s += std::abs(std::max(R[i], 0.0) - c * std::exp(-grid.centers[i] * grid.centers[i]));
    return s * grid.dy;
}

}  // namespace

ContrastResult profile_contrast(const std::vector<double>& profileA,
                                const std::vector<double>& profileB, const IsentropicConfig& cfg,
                                Exec exec) {
    validate(cfg);
    if (!(cfg.sigma_end < 1.0))
        throw InvalidParams("profile_contrast: sigma_end must be < 1 for the matched horizon");
    if (profileA.size() != static_cast<std::size_t>(cfg.grid.n) ||
        profileB.size() != profileA.size())
        throw InvalidParams("profile_contrast: profiles must match the grid");
    const double dy = cfg.grid.dy;
    double massA = 0.0, massB = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < profileA.size(); ++i) {
        massA += profileA[i];
        massB += profileB[i];
        peak = std::max({peak, profileA[i], profileB[i]});
    }
    massA *= dy;
    massB *= dy;
    if (std::abs(massA - massB) > 1e-10 * std::max(massA, massB))
        throw InvalidParams("profile_contrast: profiles must have equal mass");
    if (peak > 0.05 * (1.0 + 1e-12))
        throw InvalidParams("profile_contrast: peak amplitude must be <= 0.05");

    ContrastResult res;
    res.dist_init = l1_dist(profileA, profileB, dy);

    auto run_isentropic = [&](const std::vector<double>& prof) {
        IsentropicState st;
        st.sigma = 0.0;
        st.R = prof;
        st.RU.assign(prof.size(), 0.0);
        return isentropic_run(cfg, std::move(st), cfg.sigma_end, exec);
    };
    const IsentropicState endA = run_isentropic(profileA);
    const IsentropicState endB = run_isentropic(profileB);
    res.dist_final_isentropic = l1_dist(endA.R, endB.R, dy);

    // Isothermal pipeline: the same bumps interpreted directly as rescaled
    // data for the isothermal system, run to the matched horizon.
    const double t_end = cfg.sigma_end / (1.0 - cfg.sigma_end);
    TauParams tp;
    tp.kappa = cfg.kappa;
    const TauTrajectory traj = integrate_tau(tp, t_end * 1.01 + 1.0);
    auto run_isothermal = [&](const std::vector<double>& prof, double& d0, double& d1) {
        FluidState1D st;
        st.t = 0.0;
        st.grid = cfg.grid;
        st.R = prof;
        st.RU.assign(prof.size(), 0.0);
        st.theta = massA / std::sqrt(M_PI);
        st.model.kappa = cfg.kappa;
        st.model.law = PressureLaw::isothermal(cfg.kappa);
        d0 = l1_to_matched_gamma(st.R, cfg.grid);
        const FluidState1D end = run(std::move(st), traj, t_end, t_end, {}, exec);
        d1 = l1_to_matched_gamma(end.R, cfg.grid);
    };
    run_isothermal(profileA, res.iso_init_a, res.iso_final_a);
    run_isothermal(profileB, res.iso_init_b, res.iso_final_b);
    res.dist_final_isothermal = std::max(res.iso_final_a, res.iso_final_b);
    return res;
}

}  // namespace isoflow
