#ifndef ISOFLOW_RESCALED_SOLVER_HPP
#define ISOFLOW_RESCALED_SOLVER_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "isoflow/diagnostics.hpp"
#include "isoflow/parallel.hpp"
#include "isoflow/scaling_ode.hpp"
#include "isoflow/state.hpp"

namespace isoflow {

// Change of variables between physical (rho, u) on an x-grid and the
// rescaled unknowns (R, U) on the y-grid:
//   R(t,y) = tau^d rho(t, tau y) / theta,   U(t,y) = tau u(t, tau y) - taudot tau y.
// Physical samples are resampled onto the y-grid by linear interpolation.
FluidState1D to_rescaled(std::span<const double> x, std::span<const double> rho,
                         std::span<const double> u, const TauTrajectory& traj, double t,
                         double theta, const Grid1D& grid, const ModelParams& model);

// Exact pointwise inverse at x_i = tau * y_i; returns (x, rho, u).
struct PhysicalFields {
    std::vector<double> x, rho, u;
};
PhysicalFields to_physical(const FluidState1D& state, const TauTrajectory& traj);

// CFL-limited step size: 0.4 * min over cells of dy/lambda_max with
// lambda_max = |U|/tau^2 + sqrt(P'(theta R / tau^d))/tau, capped by the
// parabolic bounds dy^2 tau^2/(2 nu) and 2 dy^2 tau^2 / eps.
double stable_dt(const FluidState1D& state, const TauTrajectory& traj);

// One SSP-RK2 step of the rescaled system. Advective fluxes use a Rusanov
// (local Lax-Friedrichs) splitting; pressure gradient and confinement are
// cell-centered sources; the Bohm term is differenced in divergence form
// with S_K = sqrt(R) d^2 sqrt(R) - (d sqrt(R))^2 assembled at faces; the
// viscous fluxes are (nu/tau^2) R dU and (nu taudot/tau) R.
FluidState1D step(const FluidState1D& state, const TauTrajectory& traj, double dt,
                  Exec exec = Exec::Parallel, Boundary bc = Boundary::Outflow);

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&)>;

// Advances to t_end with stable_dt, emitting a DiagnosticsRecord at t_start,
// every observe_every units, and at t_end. Deterministic given inputs.
FluidState1D run(FluidState1D state, const TauTrajectory& traj, double t_end,
                 double observe_every, const DiagnosticsSink& sink = {},
                 Exec exec = Exec::Parallel);

// CSV frame "y,R,RU,U".
void write_frame_csv(const FluidState1D& state, std::ostream& os);

}  // namespace isoflow

#endif
