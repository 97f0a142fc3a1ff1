#include "isoflow/gaussian.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "isoflow/errors.hpp"
#include "isoflow/parallel.hpp"

namespace isoflow {

namespace {

void validate(const GaussianParams& p) {
    if (p.d < 1 || p.d > 3) throw InvalidParams("GaussianParams: d must be 1, 2 or 3");
    const auto d = static_cast<std::size_t>(p.d);
    if (p.alpha0.size() != d || p.beta0.size() != d || p.c0.size() != d)
        throw InvalidParams("GaussianParams: alpha0, beta0, c0 must have d entries");
    if (!(p.b0 > 0)) throw InvalidParams("GaussianParams: b0 must be > 0");
    for (double a : p.alpha0)
        if (!(a > 0)) throw InvalidParams("GaussianParams: alpha0[j] must be > 0");
    if (!(p.kappa > 0)) throw InvalidParams("GaussianParams: kappa must be > 0");
    if (p.eps < 0 || p.nu < 0) throw InvalidParams("GaussianParams: eps, nu must be >= 0");
}

}  // namespace

GaussianSolution::GaussianSolution(GaussianParams params, double t_max, double rel_tol)
    : params_(std::move(params)) {
    validate(params_);
    axes_.reserve(static_cast<std::size_t>(params_.d));
    for (int j = 0; j < params_.d; ++j) {
        const double a0 = params_.alpha0[static_cast<std::size_t>(j)];
        // Per-axis ODE: tau'' = 2(k a0)/tau + (eps a0)^2/tau^3 - (nu a0) tau'/tau^2.
        TauParams tp;
        tp.alpha = 1.0;
        tp.beta = params_.beta0[static_cast<std::size_t>(j)];
        tp.kappa = params_.kappa * a0;
        tp.eps = params_.eps * a0;
        tp.nu = params_.nu * a0;
        axes_.push_back(integrate_tau(tp, std::max(t_max, 1e-8), rel_tol));
    }
}

GaussianState GaussianSolution::state_at(double t) const {
    if (t < 0) throw InvalidParams("GaussianSolution: t must be >= 0");
    const auto d = static_cast<std::size_t>(params_.d);
    GaussianState st;
    st.t = t;
    st.alpha.resize(d);
    st.beta.resize(d);
    st.xbar.resize(d);
    st.c.resize(d);
    st.tauj.resize(d);
    st.taujdot.resize(d);
    double prod = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double tau = (t == 0.0) ? 1.0 : axes_[j].tau(t);
        const double taudot = (t == 0.0) ? params_.beta0[j] : axes_[j].taudot(t);
        st.tauj[j] = tau;
        st.taujdot[j] = taudot;
        st.alpha[j] = params_.alpha0[j] / (tau * tau);
        st.beta[j] = taudot / tau;
        st.xbar[j] = params_.c0[j] * t;
        st.c[j] = params_.c0[j] * (1.0 - taudot * t / tau);
        prod *= tau;
    }
    st.b = params_.b0 / prod;
    return st;
}

GaussianState evolve_gaussian(const GaussianParams& params, double t, double rel_tol) {
    if (t < 0) throw InvalidParams("evolve_gaussian: t must be >= 0");
    return GaussianSolution(params, t, rel_tol).state_at(t);
}

double density_at(const GaussianState& state, std::span<const double> x) {
    double arg = 0.0;
    for (std::size_t j = 0; j < state.alpha.size(); ++j) {
        const double dx = x[j] - state.xbar[j];
        arg += state.alpha[j] * dx * dx;
    }
    return state.b * std::exp(-arg);
}

std::vector<double> velocity_at(const GaussianState& state, std::span<const double> x) {
    std::vector<double> u(state.beta.size());
    for (std::size_t j = 0; j < state.beta.size(); ++j) u[j] = state.beta[j] * x[j] + state.c[j];
    return u;
}

namespace {

struct ResidualGrid {
    std::vector<double> lo;     // per-axis lower corner
    std::vector<std::size_t> n; // per-axis point count
    double h;
    std::size_t total;
};

ResidualGrid make_grid(const GaussianState& st, double h) {
    const std::size_t d = st.alpha.size();
    ResidualGrid g;
    g.h = h;
    g.lo.resize(d);
    g.n.resize(d);
    g.total = 1;
    for (std::size_t j = 0; j < d; ++j) {
        const double sigma = 1.0 / std::sqrt(2.0 * st.alpha[j]);
        const double half = 6.0 * sigma;
        g.lo[j] = st.xbar[j] - half;
        g.n[j] = static_cast<std::size_t>(std::floor(2.0 * half / h)) + 1;
        g.total *= g.n[j];
    }
    return g;
}

void unflatten(const ResidualGrid& g, std::size_t idx, std::vector<double>& x) {
    for (std::size_t j = 0; j < g.n.size(); ++j) {
        x[j] = g.lo[j] + g.h * static_cast<double>(idx % g.n[j]);
        idx /= g.n[j];
    }
}

}  // namespace

PdeResidual pde_residual(const GaussianParams& params, double t, double h) {
    validate(params);
    if (!(h > 0)) throw InvalidParams("pde_residual: h must be > 0");
    if (t < 0) throw InvalidParams("pde_residual: t must be >= 0");

    const GaussianSolution sol(params, t + 2.0 * h);
    const GaussianState st = sol.state_at(t);
    // Time derivative: centered at t when t >= h, otherwise one-sided
    // second order from {t, t+h, t+2h}.
    const bool centered = t >= h;
    const GaussianState stp = sol.state_at(t + h);
    const GaussianState stm = centered ? sol.state_at(t - h) : sol.state_at(t + 2.0 * h);

    const std::size_t d = static_cast<std::size_t>(params.d);
    const double kappa = params.kappa, eps = params.eps, nu = params.nu;

    auto rho = [&](const GaussianState& s, const std::vector<double>& x) {
        return density_at(s, x);
    };
    auto uvel = [&](const GaussianState& s, const std::vector<double>& x, std::size_t k) {
        return s.beta[k] * x[k] + s.c[k];
    };
    auto ddt = [&](auto&& f) {
        // f(state) -> value at fixed x
        if (centered) return (f(stp) - f(stm)) / (2.0 * h);
        return (-3.0 * f(st) + 4.0 * f(stp) - f(stm)) / (2.0 * h);
    };

    const ResidualGrid grid = make_grid(st, h);
    std::vector<double> res_mass(grid.total), res_mom(grid.total);

    parallel_for(static_cast<std::ptrdiff_t>(grid.total), Exec::Parallel, [&](std::ptrdiff_t idx) {
        std::vector<double> x(d);
        unflatten(grid, static_cast<std::size_t>(idx), x);

        auto shifted = [&](std::size_t k, double delta) {
            std::vector<double> y = x;
            y[k] += delta;
            return y;
        };
        auto dk = [&](auto&& f, std::size_t k) {  // central first derivative at time t
            return (f(shifted(k, h)) - f(shifted(k, -h))) / (2.0 * h);
        };

        // mass: d_t rho + sum_k d_k(rho u_k)
        double rm = ddt([&](const GaussianState& s) { return rho(s, x); });
        for (std::size_t k = 0; k < d; ++k)
            rm += dk([&](const std::vector<double>& y) { return rho(st, y) * uvel(st, y, k); }, k);
        res_mass[static_cast<std::size_t>(idx)] = std::abs(rm);

        // Bohm quantum potential q = (sum_l d^2_l sqrt(rho)) / sqrt(rho)
        auto qpot = [&](const std::vector<double>& y) {
            const double s0 = std::sqrt(rho(st, y));
            double lap = 0.0;
            for (std::size_t l = 0; l < d; ++l) {
                std::vector<double> yp = y, ym = y;
                yp[l] += h;
                ym[l] -= h;
                lap += (std::sqrt(rho(st, yp)) - 2.0 * s0 + std::sqrt(rho(st, ym))) / (h * h);
            }
            return lap / s0;
        };

        double worst = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            double r = ddt([&](const GaussianState& s) { return rho(s, x) * uvel(s, x, k); });
            for (std::size_t l = 0; l < d; ++l)
                r += dk([&](const std::vector<double>& y) {
                    return rho(st, y) * uvel(st, y, k) * uvel(st, y, l);
                }, l);
            r += kappa * dk([&](const std::vector<double>& y) { return rho(st, y); }, k);
            if (eps > 0)
                r -= 0.5 * eps * eps * rho(st, x) * dk(qpot, k);
            if (nu > 0)
                for (std::size_t l = 0; l < d; ++l)
                    r -= nu * dk([&](const std::vector<double>& y) {
                        // Du_{kl} = (d_l u_k + d_k u_l)/2 at y
                        auto du = [&](std::size_t a, std::size_t b) {
                            std::vector<double> yp = y, ym = y;
                            yp[b] += h;
                            ym[b] -= h;
                            return (uvel(st, yp, a) - uvel(st, ym, a)) / (2.0 * h);
                        };
                        return rho(st, y) * 0.5 * (du(k, l) + du(l, k));
                    }, l);
            worst = std::max(worst, std::abs(r));
        }
        res_mom[static_cast<std::size_t>(idx)] = worst;
    });

    PdeResidual out;
    for (std::size_t i = 0; i < grid.total; ++i) {
        out.mass = std::max(out.mass, res_mass[i]);
        out.momentum = std::max(out.momentum, res_mom[i]);
    }
    return out;
}

void write_state_csv_header(int d, std::ostream& os) {
    os << "t,b";
    for (const char* name : {"alpha", "beta", "xbar", "c"})
        for (int j = 1; j <= d; ++j) os << ',' << name << '_' << j;
    os << '\n';
}

void write_state_csv_row(const GaussianState& state, std::ostream& os) {
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        os << buf;
    };
    std::snprintf(buf, sizeof buf, "%.17g", state.t);
    os << buf;
    put(state.b);
    for (double v : state.alpha) put(v);
    for (double v : state.beta) put(v);
    for (double v : state.xbar) put(v);
    for (double v : state.c) put(v);
    os << '\n';
}

}  // namespace isoflow
