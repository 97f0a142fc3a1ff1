#ifndef ISOFLOW_FOKKER_PLANCK_HPP
#define ISOFLOW_FOKKER_PLANCK_HPP

#include <functional>
#include <vector>

#include "isoflow/parallel.hpp"
#include "isoflow/state.hpp"

namespace isoflow {

// Reference dynamics of the limiting relaxation: dR/ds = L R with
// L R = d^2_y R + 2 d_y(y R), discretized conservatively at faces with the
// same grid and zero-gradient ghost treatment as the fluid solver.
struct FPState {
    double s = 0.0;
    Grid1D grid;
    std::vector<double> R;
};

// Stability bound for the explicit update: dy^2 / (2 (1 + 2L)).
double fp_stable_ds(const Grid1D& grid);

// One explicit Euler update in conservative form; throws StabilityViolation
// when ds exceeds fp_stable_ds.
FPState fp_step(const FPState& state, double ds, Exec exec = Exec::Parallel);

struct FPRecord {
    double s = 0.0;
    double mass = 0.0;
    double l1_to_gamma = 0.0;      // |R - Gamma * (mass/massGamma)|_{L1}
    double relative_entropy = 0.0; // int R ln(R / Gamma')
};

using FPSink = std::function<void(const FPRecord&)>;

FPState fp_relax(FPState state, double s_end, double observe_every, const FPSink& sink = {},
                 Exec exec = Exec::Parallel);

FPRecord fp_record(const FPState& state);

// Magnitude of the smallest nonzero eigenvalue of the discrete operator,
// obtained by a dense eigen-decomposition of the n x n matrix assembled
// from the same face fluxes (n <= 512). The matrix is similarity-equivalent
// to a symmetric tridiagonal one whenever dy*L < 1.
double fp_spectral_gap(const Grid1D& grid);

}  // namespace isoflow

#endif
