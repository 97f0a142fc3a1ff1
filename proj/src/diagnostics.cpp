#include "isoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "isoflow/errors.hpp"

namespace isoflow {

Grid1D Grid1D::uniform(double L, int n) {
    if (!(L > 0)) throw InvalidParams("Grid1D: L must be > 0");
    if (n < 16 || n % 2 != 0) throw InvalidParams("Grid1D: n must be even and >= 16");
    Grid1D g;
    g.L = L;
    g.n = n;
    g.dy = 2.0 * L / n;
    g.centers.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.centers[static_cast<std::size_t>(i)] = -L + (i + 0.5) * g.dy;
    return g;
}

double vacuum_floor(const std::vector<double>& R) {
    double rmax = 0.0;
    for (double r : R) rmax = std::max(rmax, r);
    return 1e-12 * rmax;
}

std::vector<double> reconstruct_velocity(const FluidState1D& state) {
    const double floor = vacuum_floor(state.R);
    std::vector<double> U(state.R.size(), 0.0);
    for (std::size_t i = 0; i < state.R.size(); ++i)
        if (state.R[i] > floor) U[i] = state.RU[i] / state.R[i];
    return U;
}

std::vector<double> central_gradient(const std::vector<double>& f, double dy) {
    const std::size_t n = f.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fm = (i == 0) ? f[0] : f[i - 1];
        const double fp = (i + 1 == n) ? f[n - 1] : f[i + 1];
        g[i] = (fp - fm) / (2.0 * dy);
    }
    return g;
}

Moments moments(const FluidState1D& state) {
    const double dy = state.grid.dy;
    double i1 = 0.0, i2 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        const double y = state.grid.centers[i];
        i1 += state.RU[i];
        i2 += y * state.R[i];
        m2 += y * y * state.R[i];
    }
    return {i1 * dy, i2 * dy, m2 * dy};
}

RelativeEntropyCK relative_entropy_and_ck(const FluidState1D& state) {
    const double dy = state.grid.dy;
    double mass = 0.0, mass_gamma = 0.0;
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        mass += std::max(state.R[i], 0.0);
        mass_gamma += std::exp(-state.grid.centers[i] * state.grid.centers[i]);
    }
    mass *= dy;
    mass_gamma *= dy;
    if (!(mass > 0)) throw InvalidParams("relative_entropy_and_ck: mass must be > 0");
    const double c = mass / mass_gamma;
    const double lnc = std::log(c);
    double relent = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < state.R.size(); ++i) {
        const double y = state.grid.centers[i];
        const double r = std::max(state.R[i], 0.0);
        const double gp = c * std::exp(-y * y);
        if (r > 0) relent += r * (std::log(r) - lnc + y * y);
        l1 += std::abs(r - gp);
    }
    relent *= dy;
    l1 *= dy;
    return {relent, l1 * l1, 2.0 * mass * relent};
}

LambdaEntropy lambda_entropy(const FluidState1D& state, double tau, double taudot, double lambda) {
    const ModelParams& m = state.model;
    const PressureLaw& law = m.law;
    const double kappa = law.kappa();
    const double dy = state.grid.dy;
    const std::size_t n = state.R.size();
    const double lambda1 = 4.0 * lambda * lambda - 4.0 * m.nu * lambda + m.eps * m.eps;
    const double lambda2 = m.nu - 2.0 * lambda;
    const double taud = std::pow(tau, m.d);

    const double floor = vacuum_floor(state.R);
    const double floor_pos = std::max(floor, std::numeric_limits<double>::min());
    std::vector<double> U = reconstruct_velocity(state);
    std::vector<double> sq(n), lnR(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = std::sqrt(std::max(state.R[i], 0.0));
        lnR[i] = std::log(std::max(state.R[i], floor_pos));
    }
    const std::vector<double> dsq = central_gradient(sq, dy);
    const std::vector<double> dlnR = central_gradient(lnR, dy);

    LambdaEntropy out;
    out.w.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (state.R[i] > floor) out.w[i] = U[i] + lambda * dlnR[i];
    const std::vector<double> dW = central_gradient(out.w, dy);

    double rw2 = 0.0, grad2 = 0.0, conf_ent = 0.0, gterm = 0.0;
    double excess = 0.0, rdw2 = 0.0, gpp_term = 0.0, hess = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = state.grid.centers[i];
        const double r = std::max(state.R[i], 0.0);
        rw2 += r * out.w[i] * out.w[i];
        grad2 += dsq[i] * dsq[i];
        conf_ent += r * y * y + xlnx(r);
        const double sigma = state.theta * r / taud;
        gterm += law.G(sigma);
        excess += law.excess_pressure(sigma);
        rdw2 += r * dW[i] * dW[i];
        gpp_term += sigma * law.Gpp(sigma) * dsq[i] * dsq[i];
        if (lambda != 0.0 && lambda1 != 0.0) {
            const double lm = (i == 0) ? lnR[0] : lnR[i - 1];
            const double lp = (i + 1 == n) ? lnR[n - 1] : lnR[i + 1];
            const double d2 = (lp - 2.0 * lnR[i] + lm) / (dy * dy);
            hess += r * d2 * d2;
        }
    }
    rw2 *= dy;
    grad2 *= dy;
    conf_ent *= dy;
    gterm *= dy;
    excess *= dy;
    rdw2 *= dy;
    gpp_term *= dy;
    hess *= dy;

    const double t2 = tau * tau, t3 = t2 * tau, t4 = t2 * t2;
    out.energy = 0.5 * rw2 / t2 + 0.5 * lambda1 * grad2 / t2 + kappa * conf_ent +
                 (taud / state.theta) * gterm;
    // The excess-pressure block carries 1/theta so that dE/dt = -D - nu (...)
    // holds exactly for the G term of the energy.
    out.dissipation = (taudot / t3) * (rw2 + lambda1 * grad2) +
                      m.d * (taudot / tau) * (taud / state.theta) * excess +
                      (lambda2 / t4) * rdw2 + (lambda / t4) * rdw2 +
                      4.0 * lambda * kappa * grad2 / t2 + 4.0 * lambda * gpp_term / t2 +
                      lambda * lambda1 / (4.0 * t4) * hess;
    return out;
}

std::pair<double, double> pseudo_energy(const FluidState1D& state, double tau, double taudot) {
    const LambdaEntropy le = lambda_entropy(state, tau, taudot, 0.0);
    return {le.energy, le.dissipation};
}

double mellet_vasseur(const FluidState1D& state) {
    const ModelParams& m = state.model;
    if (!(m.nu > 0)) throw InvalidRegime("mellet_vasseur: requires nu > 0");
    if (m.eps > m.nu)
        throw InvalidRegime("mellet_vasseur: requires eps <= nu (lambda(eps) real)");
    const double lam = 0.5 * (m.nu - std::sqrt(m.nu * m.nu - m.eps * m.eps));

    const double dy = state.grid.dy;
    const std::size_t n = state.R.size();
    const double floor = vacuum_floor(state.R);
    const double floor_pos = std::max(floor, std::numeric_limits<double>::min());
    std::vector<double> U = reconstruct_velocity(state);
    std::vector<double> lnR(n);
    for (std::size_t i = 0; i < n; ++i) lnR[i] = std::log(std::max(state.R[i], floor_pos));
    const std::vector<double> dlnR = central_gradient(lnR, dy);

    double mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::max(state.R[i], 0.0);
        if (r <= floor) continue;
        const double w = U[i] + lam * dlnR[i];
        const double y = state.grid.centers[i];
        const double z = w * w + y * y;
        mv += r * (1.0 + z) * std::log1p(z);
    }
    return mv * dy;
}

namespace {

// Exact inverse of the piecewise-linear CDF built from cell averages.
struct QuantileTable {
    std::vector<double> faces;  // n+1 cumulative values, normalized to [0,1]
    double yl, dy;

    double inverse(double q) const {
        const auto it = std::upper_bound(faces.begin(), faces.end(), q);
        std::size_t i = static_cast<std::size_t>(it - faces.begin());
        if (i == 0) i = 1;
        if (i >= faces.size()) i = faces.size() - 1;
        std::size_t cell = i - 1;
        // skip mass-free cells
        while (cell + 1 < faces.size() - 1 && faces[cell + 1] <= faces[cell]) ++cell;
        const double m = faces[cell + 1] - faces[cell];
        const double frac = m > 0 ? (q - faces[cell]) / m : 0.5;
        return yl + (static_cast<double>(cell) + std::clamp(frac, 0.0, 1.0)) * dy;
    }
};

QuantileTable build_cdf(const std::vector<double>& density, const Grid1D& grid) {
    QuantileTable t;
    t.yl = -grid.L;
    t.dy = grid.dy;
    t.faces.assign(density.size() + 1, 0.0);
    for (std::size_t i = 0; i < density.size(); ++i)
        t.faces[i + 1] = t.faces[i] + std::max(density[i], 0.0);
    const double tot = t.faces.back();
    for (double& f : t.faces) f /= tot;
    return t;
}

}  // namespace

double wasserstein_1d(const FluidState1D& state, int p) {
    if (p != 1 && p != 2) throw InvalidParams("wasserstein_1d: p must be 1 or 2");
    std::vector<double> gamma(state.R.size());
    for (std::size_t i = 0; i < gamma.size(); ++i)
        gamma[i] = std::exp(-state.grid.centers[i] * state.grid.centers[i]);
    const QuantileTable qr = build_cdf(state.R, state.grid);
    const QuantileTable qg = build_cdf(gamma, state.grid);
    const std::size_t nq = 4 * state.R.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < nq; ++k) {
        const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(nq);
        const double diff = std::abs(qr.inverse(q) - qg.inverse(q));
        acc += (p == 1) ? diff : diff * diff;
    }
    acc /= static_cast<double>(nq);
    return (p == 1) ? acc : std::sqrt(acc);
}

double physical_energy(const FluidState1D& state, double tau, double taudot) {
    const ModelParams& m = state.model;
    const PressureLaw& law = m.law;
    const double kappa = law.kappa();
    const double dy = state.grid.dy;
    const std::size_t n = state.R.size();
    const double taud = std::pow(tau, m.d);

    std::vector<double> U = reconstruct_velocity(state);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(std::max(state.R[i], 0.0));
    const std::vector<double> dsq = central_gradient(sq, dy);

    double kin = 0.0, conf = 0.0, cross = 0.0, cap = 0.0, ent = 0.0, mass = 0.0, gterm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = state.grid.centers[i];
        const double r = std::max(state.R[i], 0.0);
        kin += r * U[i] * U[i];
        conf += r * y * y;
        cross += r * y * U[i];
        cap += dsq[i] * dsq[i];
        ent += xlnx(r);
        mass += r;
        gterm += law.G(state.theta * r / taud);
    }
    kin *= dy;
    conf *= dy;
    cross *= dy;
    cap *= dy;
    ent *= dy;
    mass *= dy;
    gterm *= dy;

    const double th = state.theta;
    return th * (0.5 * kin / (tau * tau) + 0.5 * taudot * taudot * conf + (taudot / tau) * cross +
                 0.5 * m.eps * m.eps * cap / (tau * tau) + kappa * ent +
                 kappa * std::log(th / taud) * mass) +
           taud * gterm;
}

DiagnosticsRecord make_record(const FluidState1D& state, const TauTrajectory& traj) {
    const double tau = traj.tau(state.t);
    const double taudot = traj.taudot(state.t);
    DiagnosticsRecord rec;
    rec.t = state.t;
    double mass = 0.0;
    for (double r : state.R) mass += std::max(r, 0.0);
    rec.mass = mass * state.grid.dy;
    const Moments mom = moments(state);
    rec.I1 = mom.I1;
    rec.I2 = mom.I2;
    rec.second_moment = mom.second_moment;
    const RelativeEntropyCK rk = relative_entropy_and_ck(state);
    rec.relative_entropy = rk.relent;
    rec.ck_lhs = rk.ck_lhs;
    rec.ck_rhs = rk.ck_rhs;
    const auto [e, d] = pseudo_energy(state, tau, taudot);
    rec.pseudo_energy = e;
    rec.dissipation = d;
    rec.lambda_entropy = lambda_entropy(state, tau, taudot, state.model.nu).energy;
    const bool mv_defined = state.model.nu > 0 && state.model.eps <= state.model.nu;
    rec.mv = mv_defined ? mellet_vasseur(state) : std::numeric_limits<double>::quiet_NaN();
    rec.w2 = wasserstein_1d(state, 2);
    rec.physical_energy = physical_energy(state, tau, taudot);
    return rec;
}

void write_diagnostics_header(std::ostream& os) {
    os << "t,mass,I1,I2,second_moment,relative_entropy,pseudo_energy,dissipation,"
          "lambda_entropy,mv,ck_lhs,ck_rhs,w2,physical_energy\n";
}

void append_diagnostics_row(const DiagnosticsRecord& r, std::ostream& os) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g\n",
                  r.t, r.mass, r.I1, r.I2, r.second_moment, r.relative_entropy, r.pseudo_energy,
                  r.dissipation, r.lambda_entropy, r.mv, r.ck_lhs, r.ck_rhs, r.w2,
                  r.physical_energy);
    os << buf;
}

}  // namespace isoflow
