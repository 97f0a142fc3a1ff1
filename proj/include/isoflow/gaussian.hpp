#ifndef ISOFLOW_GAUSSIAN_HPP
#define ISOFLOW_GAUSSIAN_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "isoflow/scaling_ode.hpp"

namespace isoflow {

// Initial data of the exact Gaussian family:
//   rho(0,x) = b0 * exp(-sum_j alpha0[j] x_j^2),
//   u(0,x)_j = beta0[j] x_j + c0[j],
// evolved under the isothermal Euler (eps=nu=0), Korteweg (eps>0) or
// quantum Navier-Stokes (nu>0) equations with pressure kappa*rho.
struct GaussianParams {
    int d = 1;
    double b0 = 1.0;
    std::vector<double> alpha0;  // d entries, > 0
    std::vector<double> beta0;   // d entries
    std::vector<double> c0;      // d entries
    double kappa = 1.0;
    double eps = 0.0;
    double nu = 0.0;
};

struct GaussianState {
    double t = 0.0;
    double b = 1.0;
    std::vector<double> alpha, beta, xbar, c;
    std::vector<double> tauj, taujdot;
};

// Holds the d per-axis scaling trajectories so that states at many times
// can be read from one integration. Axis j solves the generic scaling ODE
// with parameters (kappa*alpha0[j], eps*alpha0[j], nu*alpha0[j]) and
// initial data tau(0)=1, tau'(0)=beta0[j].
class GaussianSolution {
public:
    GaussianSolution(GaussianParams params, double t_max, double rel_tol = 1e-10);

    const GaussianParams& params() const { return params_; }
    const TauTrajectory& axis_trajectory(int j) const { return axes_[static_cast<std::size_t>(j)]; }
    GaussianState state_at(double t) const;

private:
    GaussianParams params_;
    std::vector<TauTrajectory> axes_;
};

GaussianState evolve_gaussian(const GaussianParams& params, double t, double rel_tol = 1e-10);

double density_at(const GaussianState& state, std::span<const double> x);
std::vector<double> velocity_at(const GaussianState& state, std::span<const double> x);

// Max-norm residuals of the mass and momentum equations evaluated on the
// exact Gaussian with second-order central differences of spacing h in
// space and time, over the box xbar +- 6 sigma per axis.
struct PdeResidual {
    double mass = 0.0;
    double momentum = 0.0;
};
PdeResidual pde_residual(const GaussianParams& params, double t, double h);

// CSV row "t,b,alpha_1..d,beta_1..d,xbar_1..d,c_1..d" (17 digits).
void write_state_csv_header(int d, std::ostream& os);
void write_state_csv_row(const GaussianState& state, std::ostream& os);

}  // namespace isoflow

#endif
