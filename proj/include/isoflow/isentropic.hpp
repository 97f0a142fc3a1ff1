#ifndef ISOFLOW_ISENTROPIC_HPP
#define ISOFLOW_ISENTROPIC_HPP

#include <utility>
#include <vector>

#include "isoflow/parallel.hpp"
#include "isoflow/state.hpp"

namespace isoflow {

// Compactified-time rescaled isentropic system (gamma > 1):
//   d_sigma R + d_y(R U) = 0,
//   d_sigma(RU) + d_y(R U^2 + kappa (1-sigma)^{d gamma - d - 2} R^gamma) = 0,
// with sigma = t/(1+t) in [0, 1).
struct IsentropicConfig {
    double gamma = 1.5;   // in (1, 1 + 2/d]
    double kappa = 1.0;
    int d = 1;
    Grid1D grid;
    double sigma_end = 0.99;
    double cfl = 0.4;
};

struct IsentropicState {
    double sigma = 0.0;
    std::vector<double> R, RU;
};

void validate(const IsentropicConfig& cfg);

// Exponent d*gamma - d - 2 of the pressure coefficient; identically 0 when
// gamma = 1 + 2/d.
double isentropic_exponent(const IsentropicConfig& cfg);

double isentropic_stable_dsigma(const IsentropicConfig& cfg, const IsentropicState& state);

IsentropicState isentropic_step(const IsentropicConfig& cfg, const IsentropicState& state,
                                double dsigma, Exec exec = Exec::Parallel,
                                Boundary bc = Boundary::Outflow);

IsentropicState isentropic_run(const IsentropicConfig& cfg, IsentropicState state,
                               double sigma_end, Exec exec = Exec::Parallel);

// Symmetrizing variable R^{(gamma-1)/2}.
std::vector<double> symmetrized_density(const IsentropicConfig& cfg, const std::vector<double>& R);

// Compactified transform pair between physical (t, x) fields and rescaled
// (sigma, y) fields:
//   rho(t,x) = (1+t)^{-d} R(sigma, x/(1+t)),  u(t,x) = x/(1+t) + U(sigma, x/(1+t))/(1+t).
struct IsentropicPhysical {
    std::vector<double> x, rho, u;
};
IsentropicPhysical isentropic_to_physical(const IsentropicConfig& cfg, const IsentropicState& state,
                                          const Grid1D& grid);
IsentropicState isentropic_from_physical(const IsentropicConfig& cfg, double t,
                                         const std::vector<double>& x,
                                         const std::vector<double>& rho,
                                         const std::vector<double>& u, const Grid1D& grid);

// Appendix-style contrast experiment: run two small equal-mass profiles
// through the isentropic dynamics to sigma_end, and the same profiles as
// rescaled isothermal data to the matched horizon t = sigma/(1-sigma);
// reports L1 separations and the per-profile distances to mass-matched Gamma.
struct ContrastResult {
    double dist_init = 0.0;               // |A - B|_L1 at sigma = 0
    double dist_final_isentropic = 0.0;   // |A - B|_L1 at sigma_end
    double dist_final_isothermal = 0.0;   // max over A,B of final distance to Gamma'
    double iso_init_a = 0.0, iso_init_b = 0.0;
    double iso_final_a = 0.0, iso_final_b = 0.0;
};
ContrastResult profile_contrast(const std::vector<double>& profileA,
                                const std::vector<double>& profileB, const IsentropicConfig& cfg,
                                Exec exec = Exec::Parallel);

}  // namespace isoflow

#endif
