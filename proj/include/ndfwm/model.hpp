// model.hpp - closed-form third-order NDFWM amplitude for a moving two-level atom
#pragma once

#include "ndfwm/types.hpp"

namespace ndfwm {

// total coherence decay rate: gammaT = (gamma1 + gamma2)/2 + gamma_ph
double derived_dephasing(const RelaxationParams& relax);

// Partial-fraction weight of the population-pulsation response,
//   R = gamma21 / (gamma2 - gamma1).
// The pulsation of (rho11 - rho22) driven at beat z decomposes as
//   (1-R)/(z + i*gamma1) + (1+R)/(z + i*gamma2)
// which the oracle module validates against the direct 2x2 solve.
// Throws DegenerateRates when |gamma2 - gamma1| <= eps (default 1e-6*max).
double pulsation_weight_R(const RelaxationParams& relax, double eps_degenerate = -1.0);

// equilibrium population difference N0 = lambda1/gamma1 - (lambda2/gamma2)(1 - gamma21/gamma1)
double equilibrium_population_difference(const PumpSource& pump, const RelaxationParams& relax);

// Complex third-order amplitude at probe-pump detuning delta for one velocity
// sample, carrier phase dropped and dipole scale set to 1:
//
//   A = -(N0/4) * Of*Ob*Op * F1 * sum_X Fpop_X * Fcoh_X,   X in {f} or {f, b}
//
//   F1     = 1 / ((delta - Delta) - kp.v + i*gammaT)          signal coherence
//   Fpop_X = (1-R)/(z_X + i*gamma1) + (1+R)/(z_X + i*gamma2)  population pulsation
//   Fcoh_X = 1/((-Delta + kX.v) + i*gammaT)                   pump-coherence route
//          + 1/((delta + Delta) - kp.v + i*gammaT)            probe-coherence route
//
// with z_X = delta + (k_X - k_p).v the beat detuning of the grating written by
// pump X and the probe, and k_b = -k_f. Mode selects the single forward-pump
// pathway or the sum over both pumps.
Complex fwm_amplitude(double delta, const VelocitySample& v, const FieldConfig& fields,
                      const RelaxationParams& relax, const PumpSource& pump,
                      PumpTermMode mode);

// same, with the equilibrium population difference supplied by the caller
// (used by the repump module where N0 varies per velocity class)
Complex fwm_amplitude_n0(double delta, const VelocitySample& v, const FieldConfig& fields,
                         const RelaxationParams& relax, double n0, PumpTermMode mode);

// stationary-atom spectrum: amplitude(delta) = fwm_amplitude(delta, v=0, ...)
Spectrum spectrum_stationary(const std::vector<double>& grid, const FieldConfig& fields,
                             const RelaxationParams& relax, const PumpSource& pump,
                             PumpTermMode mode, ExecPolicy exec = ExecPolicy::Parallel);

} // namespace ndfwm
