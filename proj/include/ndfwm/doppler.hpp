// doppler.hpp - Maxwell-Boltzmann velocity averaging with Gauss-Hermite quadrature
#pragma once

#include "ndfwm/types.hpp"

namespace ndfwm {

// Maxwell density of one velocity component: exp(-v^2/u^2) / (u*sqrt(pi))
double maxwell_weight(double v, double u);

// Gauss-Hermite rule for weight exp(-x^2). Nodes ascending; weights divided by
// sqrt(pi) so they sum to 1 and average directly against the Maxwell density.
// Nodes whose normalized weight underflows are dropped (they are exactly 0 in
// double precision); the stored weight_sum is computed over the kept nodes.
struct GaussHermiteRule {
    int order = 0;
    std::vector<double> nodes;   // kept nodes, ascending
    std::vector<double> weights; // normalized, matching nodes
    double weight_sum = 0.0;
};

// cached; generation is Newton iteration on the weighted Hermite recurrence,
// stable to order ~10^6
const GaussHermiteRule& gauss_hermite(int order);

// Velocity-averaged spectrum, amplitude(delta) = sum_j w_j A(delta, v_j) with
// the sum over ascending node index.  residual_mode handles the transverse
// velocity picked up through the pump-probe angle:
//   IgnoreTransverse - 1-D longitudinal average only
//   GaussianBroaden  - 1-D average, then the complex amplitude is convolved
//                      with a Gaussian of std k*theta*u/sqrt(2) on the grid
//   TwoDimensional   - product rule over (v_par, v_perp)
// When repump is non-null the relaxation/pump parameters are remapped per
// velocity class through effective_params before evaluating the amplitude.
Spectrum doppler_average(const std::vector<double>& grid, const FieldConfig& fields,
                         const RelaxationParams& relax, const PumpSource& pump,
                         const DopplerParams& doppler, PumpTermMode mode,
                         ExecPolicy exec = ExecPolicy::Parallel,
                         const RepumpParams* repump = nullptr);

} // namespace ndfwm
