#ifndef ISOFLOW_STATE_HPP
#define ISOFLOW_STATE_HPP

#include <vector>

#include "isoflow/pressure.hpp"

namespace isoflow {

// Uniform cell-centered grid on [-L, L].
struct Grid1D {
    double L = 10.0;
    int n = 400;
    double dy = 0.05;
    std::vector<double> centers;

    static Grid1D uniform(double L, int n);
};

struct ModelParams {
    double kappa = 1.0;
    double eps = 0.0;
    double nu = 0.0;
    int d = 1;
    PressureLaw law = PressureLaw::isothermal(1.0);
};

enum class Boundary { Outflow, Periodic };  // Periodic exists for single-step tests

// Cell averages of the rescaled density R and momentum RU at time t.
// theta = |rho_0|_{L1} / |Gamma|_{L1} is the mass normalization entering
// the pressure argument theta*R/tau^d.
struct FluidState1D {
    double t = 0.0;
    Grid1D grid;
    std::vector<double> R, RU;
    double theta = 1.0;
    ModelParams model;
};

// Velocity reconstruction floor: cells with R <= vacuum_floor carry U = 0.
double vacuum_floor(const std::vector<double>& R);

}  // namespace isoflow

#endif
