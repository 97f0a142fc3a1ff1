#include "isoflow/scaling_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "isoflow/errors.hpp"

namespace isoflow {

namespace {

using State = std::array<double, 3>;  // (tau, taudot, Q)

State rhs(const TauParams& p, const State& y) {
    const double tau = y[0];
    const double v = y[1];
    const double r = v / tau;
    return {v, 2.0 * p.kappa / tau + p.eps * p.eps / (tau * tau * tau) - p.nu * v / (tau * tau),
            r * r};
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
    State y;
    double err;      // scaled error estimate, accept when <= 1
    bool positive;   // tau stayed > 0 at all stages
};

StepResult dopri_step(const TauParams& p, const State& y, const State& k1, double h,
                      double rel_tol, double abs_tol, State& k_next) {
    auto stage = [&](const State& ys) { return rhs(p, ys); };
    auto comb = [&](std::initializer_list<std::pair<double, const State*>> terms) {
        State out = y;
        for (auto& [w, k] : terms)
            for (int i = 0; i < 3; ++i) out[i] += h * w * (*k)[i];
        return out;
    };
    StepResult res{};
    res.positive = true;
    const State y2 = comb({{a21, &k1}});
    if (y2[0] <= 0) { res.positive = false; return res; }
    const State k2 = stage(y2);
    const State y3 = comb({{a31, &k1}, {a32, &k2}});
    if (y3[0] <= 0) { res.positive = false; return res; }
    const State k3 = stage(y3);
    const State y4 = comb({{a41, &k1}, {a42, &k2}, {a43, &k3}});
    if (y4[0] <= 0) { res.positive = false; return res; }
    const State k4 = stage(y4);
    const State y5 = comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    if (y5[0] <= 0) { res.positive = false; return res; }
    const State k5 = stage(y5);
    const State y6 = comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    if (y6[0] <= 0) { res.positive = false; return res; }
    const State k6 = stage(y6);
    const State y7 = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    if (y7[0] <= 0) { res.positive = false; return res; }
    const State k7 = stage(y7);  // FSAL
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y7[i]));
        err = std::max(err, std::abs(ei) / sc);
    }
    res.y = y7;
    res.err = err;
    k_next = k7;
    return res;
}

}  // namespace

TauTrajectory::TauTrajectory(TauParams params, std::vector<double> t, std::vector<double> tau,
                             std::vector<double> taudot, std::vector<double> q)
    : params_(params), t_(std::move(t)), tau_(std::move(tau)), taudot_(std::move(taudot)),
      q_(std::move(q)) {
    if (t_.size() < 2 || t_.size() != tau_.size() || t_.size() != taudot_.size() ||
        t_.size() != q_.size())
        throw InvalidParams("TauTrajectory: arrays must have equal length >= 2");
}

double TauTrajectory::tauddot_at(std::size_t i) const {
    return rhs(params_, {tau_[i], taudot_[i], q_[i]})[1];
}

std::size_t TauTrajectory::segment(double t) const {
    if (t < t_.front() - 1e-12 || t > t_.back() * (1.0 + 1e-12) + 1e-12)
        throw DomainError("TauTrajectory: query time outside [0, t_end]");
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - t_.begin());
    if (i == 0) return 0;
    if (i >= t_.size()) return t_.size() - 2;
    return i - 1;
}

namespace {
// Cubic Hermite basis on [0,1].
inline double hermite(double v0, double d0, double v1, double d1, double h, double x) {
    const double x2 = x * x, x3 = x2 * x;
    return v0 * (2 * x3 - 3 * x2 + 1) + d0 * h * (x3 - 2 * x2 + x) + v1 * (-2 * x3 + 3 * x2) +
           d1 * h * (x3 - x2);
}
}  // namespace

double TauTrajectory::tau(double t) const {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double x = (t - t_[i]) / h;
    return hermite(tau_[i], taudot_[i], tau_[i + 1], taudot_[i + 1], h, x);
}

double TauTrajectory::taudot(double t) const {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double x = (t - t_[i]) / h;
    return hermite(taudot_[i], tauddot_at(i), taudot_[i + 1], tauddot_at(i + 1), h, x);
}

double TauTrajectory::q(double t) const {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double x = (t - t_[i]) / h;
    auto qdot = [&](std::size_t k) {
        const double r = taudot_[k] / tau_[k];
        return r * r;
    };
    return hermite(q_[i], qdot(i), q_[i + 1], qdot(i + 1), h, x);
}

TauTrajectory integrate_tau(const TauParams& p, double t_end, double rel_tol) {
    if (!(p.alpha > 0)) throw InvalidParams("TauParams.alpha must be > 0");
    if (!(p.kappa > 0)) throw InvalidParams("TauParams.kappa must be > 0");
    if (p.eps < 0 || p.nu < 0) throw InvalidParams("TauParams.eps and .nu must be >= 0");
    if (!(t_end > 0)) throw InvalidParams("integrate_tau: t_end must be > 0");
    if (!(rel_tol > 0) || rel_tol > 1e-2)
        throw InvalidParams("integrate_tau: rel_tol must lie in (0, 1e-2]");
    const double abs_tol = rel_tol * 1e-2;

    std::vector<double> ts{0.0}, taus{p.alpha}, taudots{p.beta}, qs{0.0};
    State y{p.alpha, p.beta, 0.0};
    State k1 = rhs(p, y);
    double t = 0.0;
    // Initial step from the local curvature scale.
    double h = std::min(t_end, 1e-2 * std::sqrt(p.alpha / (2.0 * p.kappa / p.alpha +
                                                           p.eps * p.eps + p.nu * std::abs(p.beta) + 1.0)));
    int consecutive_rejects = 0;
    while (t < t_end) {
        h = std::min(h, t_end - t);
        State k_next;
        const StepResult r = dopri_step(p, y, k1, h, rel_tol, abs_tol, k_next);
        const double hmin = 1e-14 * std::max(1.0, t);
        if (!r.positive || !(r.err <= 1.0)) {
            const double shrink = r.positive ? std::max(0.2, 0.9 * std::pow(r.err, -0.2)) : 0.25;
            h *= shrink;
            if (h < hmin || ++consecutive_rejects > 60)
                throw StepFailure("integrate_tau: step control failed (tau <= 0 or tolerance unreachable)");
            continue;
        }
        consecutive_rejects = 0;
        t += h;
        y = r.y;
        k1 = k_next;
        ts.push_back(t);
        taus.push_back(y[0]);
        taudots.push_back(y[1]);
        qs.push_back(y[2]);
        const double grow = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(r.err, 1e-10), -0.2)));
        h *= grow;
    }
    return TauTrajectory(p, std::move(ts), std::move(taus), std::move(taudots), std::move(qs));
}

double first_integral(const TauTrajectory& traj, std::size_t index) {
    if (index >= traj.size()) throw InvalidParams("first_integral: index out of bounds");
    const TauParams& p = traj.params();
    const double tau = traj.tau_at(index);
    const double v = traj.taudot_at(index);
    double fi = v * v - 4.0 * p.kappa * std::log(tau);
    if (p.eps > 0) fi += p.eps * p.eps / (2.0 * tau * tau);
    if (p.nu > 0) fi += p.nu * traj.q_at(index);
    return fi;
}

std::pair<double, double> tau_asymptote(double kappa, double t) {
    if (!(kappa > 0)) throw InvalidParams("tau_asymptote: kappa must be > 0");
    if (!(t > std::exp(1.0))) throw DomainError("tau_asymptote: requires t > e");
    const double root = std::sqrt(kappa * std::log(t));
    return {2.0 * t * root, 2.0 * root};
}

double s_of_t(const TauTrajectory& traj, double t) {
    const double v = traj.taudot(t);
    if (!(v > 0)) throw NotYetMonotone("s_of_t: taudot(t) <= 0 at the requested time");
    return 0.5 * std::log(v);
}

void write_trajectory_csv(const TauTrajectory& traj, std::ostream& os) {
    os << "t,tau,taudot,Q\n";
    char buf[160];
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.time_at(i),
                      traj.tau_at(i), traj.taudot_at(i), traj.q_at(i));
        os << buf;
    }
}

}  // namespace isoflow
