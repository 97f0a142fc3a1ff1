#ifndef ISOFLOW_DIAGNOSTICS_HPP
#define ISOFLOW_DIAGNOSTICS_HPP

#include <iosfwd>
#include <utility>
#include <vector>

#include "isoflow/scaling_ode.hpp"
#include "isoflow/state.hpp"

namespace isoflow {

// One time-stamped row of every monitored functional. Fields that are
// undefined in the current parameter regime (Mellet-Vasseur with eps > nu)
// are recorded as NaN.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double I1 = 0.0;              // int R U
    double I2 = 0.0;              // int y R
    double second_moment = 0.0;   // int y^2 R
    double relative_entropy = 0.0;
    double pseudo_energy = 0.0;
    double dissipation = 0.0;
    double lambda_entropy = 0.0;  // E_lambda at lambda = nu (BD-entropy choice)
    double mv = 0.0;
    double ck_lhs = 0.0;
    double ck_rhs = 0.0;
    double w2 = 0.0;
    double physical_energy = 0.0;
};

// Pseudo-energy E and dissipation D of the rescaled system; midpoint
// quadrature on cells, gradients by central differences.
std::pair<double, double> pseudo_energy(const FluidState1D& state, double tau, double taudot);

struct Moments {
    double I1, I2, second_moment;
};
Moments moments(const FluidState1D& state);

struct RelativeEntropyCK {
    double relent;   // int R ln(R / Gamma') with Gamma' mass-matched
    double ck_lhs;   // |R - Gamma'|_{L1}^2
    double ck_rhs;   // 2 |R|_{L1} * relent
};
RelativeEntropyCK relative_entropy_and_ck(const FluidState1D& state);

struct LambdaEntropy {
    double energy;
    double dissipation;
    std::vector<double> w;  // effective velocity W_lambda on cells
};
// Pseudo lambda-entropy of the effective velocity W_lambda = U + lambda d_y ln R,
// with lambda1 = 4 lambda^2 - 4 nu lambda + eps^2. lambda = 0 reproduces
// pseudo_energy exactly (same code path).
LambdaEntropy lambda_entropy(const FluidState1D& state, double tau, double taudot, double lambda);

// int R phi(|W_eps|^2 + y^2) with phi(z) = (1+z)ln(1+z) and
// W_eps = U + lambda(eps) d_y ln R, lambda(eps) = (nu - sqrt(nu^2 - eps^2))/2.
// Requires nu > 0 and 0 <= eps <= nu (InvalidRegime otherwise).
double mellet_vasseur(const FluidState1D& state);

// W_p distance (p = 1 or 2) between R/|R| and Gamma/|Gamma| by exact
// piecewise-linear CDF inversion at 4n quadrature points.
double wasserstein_1d(const FluidState1D& state, int p);

// Physical energy E(t) evaluated through the (R,U) rewriting: kinetic,
// taudot^2-weighted confinement, cross term, capillary, entropy,
// ln(theta/tau^d) mass term and the G term.
double physical_energy(const FluidState1D& state, double tau, double taudot);

DiagnosticsRecord make_record(const FluidState1D& state, const TauTrajectory& traj);

void write_diagnostics_header(std::ostream& os);
void append_diagnostics_row(const DiagnosticsRecord& rec, std::ostream& os);

// Shared small helpers (central differences with zero-gradient ghosts).
std::vector<double> central_gradient(const std::vector<double>& f, double dy);
std::vector<double> reconstruct_velocity(const FluidState1D& state);

}  // namespace isoflow

#endif
