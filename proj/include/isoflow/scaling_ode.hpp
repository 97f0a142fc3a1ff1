#ifndef ISOFLOW_SCALING_ODE_HPP
#define ISOFLOW_SCALING_ODE_HPP

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace isoflow {

// Parameters of the scaling ODE
//   tau'' = 2*kappa/tau + eps^2/tau^3 - nu*tau'/tau^2,
//   tau(0) = alpha, tau'(0) = beta.
struct TauParams {
    double alpha = 1.0;  // tau(0) > 0
    double beta = 0.0;   // tau'(0)
    double kappa = 1.0;  // P'(0) > 0
    double eps = 0.0;    // capillarity coefficient, >= 0
    double nu = 0.0;     // viscosity coefficient, >= 0
};

// Dense solution of the scaling ODE: every accepted integrator step is
// stored together with the accumulated damping integral
//   Q(t) = int_0^t (tau'/tau)^2 ds,
// which enters the first integral when nu > 0. Queries between nodes use
// cubic Hermite interpolation; the node derivative of tau' is the ODE
// right-hand side evaluated analytically, and Q' = (tau'/tau)^2.
class TauTrajectory {
public:
    TauTrajectory(TauParams params, std::vector<double> t, std::vector<double> tau,
                  std::vector<double> taudot, std::vector<double> q);

    const TauParams& params() const { return params_; }
    std::size_t size() const { return t_.size(); }
    double t_end() const { return t_.back(); }

    double time_at(std::size_t i) const { return t_[i]; }
    double tau_at(std::size_t i) const { return tau_[i]; }
    double taudot_at(std::size_t i) const { return taudot_[i]; }
    double q_at(std::size_t i) const { return q_[i]; }

    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& taus() const { return tau_; }
    const std::vector<double>& taudots() const { return taudot_; }
    const std::vector<double>& qs() const { return q_; }

    // Hermite-interpolated values; t must lie in [0, t_end].
    double tau(double t) const;
    double taudot(double t) const;
    double q(double t) const;

    double tauddot_at(std::size_t i) const;  // analytic tau'' at a node

private:
    std::size_t segment(double t) const;

    TauParams params_;
    std::vector<double> t_, tau_, taudot_, q_;
};

// Integrates the scaling ODE with an embedded Dormand-Prince 4(5) pair.
// Local error is controlled to rel_tol (absolute floor rel_tol*1e-2);
// every accepted step is stored for dense output. Throws InvalidParams on
// bad arguments and StepFailure if step control collapses (which would
// signal a bug: the solution exists globally and stays positive).
TauTrajectory integrate_tau(const TauParams& params, double t_end, double rel_tol = 1e-10);

// First integral at a sample node. For eps=nu=0 this is tau'^2 - 4k*ln(tau);
// in general tau'^2 - 4k*ln(tau) + eps^2/(2 tau^2) + nu*Q(t). The value is
// conserved and equals beta^2 - 4k*ln(alpha) + eps^2/(2 alpha^2).
double first_integral(const TauTrajectory& traj, std::size_t index);

// Leading-order large-time behavior (2t*sqrt(k ln t), 2*sqrt(k ln t)).
// Requires t > e so that ln ln t is defined.
std::pair<double, double> tau_asymptote(double kappa, double t);

// Time change s(t) = (1/2) ln tau'(t). Throws NotYetMonotone when
// tau'(t) <= 0 at the requested time.
double s_of_t(const TauTrajectory& traj, double t);

// CSV export: header "t,tau,taudot,Q", one row per accepted step,
// 17 significant digits.
void write_trajectory_csv(const TauTrajectory& traj, std::ostream& os);

}  // namespace isoflow

#endif
