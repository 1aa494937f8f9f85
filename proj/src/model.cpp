#include "ndfwm/model.hpp"

#include <algorithm>
#include <cmath>

namespace ndfwm {

std::vector<double> linspace_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw InvalidRates("grid needs n >= 2 and hi > lo");
    std::vector<double> g(n);
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo + step * i;
    g.back() = hi;
    return g;
}

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw EmptySpectrum("empty delta grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw InvalidRates("delta grid must be strictly increasing");
}

double derived_dephasing(const RelaxationParams& relax) {
    relax.validate();
    return 0.5 * (relax.gamma1 + relax.gamma2) + relax.gamma_ph;
}

double pulsation_weight_R(const RelaxationParams& relax, double eps_degenerate) {
    relax.validate();
    if (eps_degenerate < 0)
        eps_degenerate = 1e-6 * std::max(relax.gamma1, relax.gamma2);
    const double diff = relax.gamma2 - relax.gamma1;
    if (std::abs(diff) <= eps_degenerate)
        throw DegenerateRates("gamma1 and gamma2 degenerate: pulsation eigenvalues coincide");
    return relax.gamma21 / diff;
}

double equilibrium_population_difference(const PumpSource& pump, const RelaxationParams& relax) {
    pump.validate();
    relax.validate_for_steady_state();
    return pump.lambda1 / relax.gamma1 -
           (pump.lambda2 / relax.gamma2) * (1.0 - relax.gamma21 / relax.gamma1);
}

Complex fwm_amplitude_n0(double delta, const VelocitySample& v, const FieldConfig& fields,
                         const RelaxationParams& relax, double n0, PumpTermMode mode) {
    fields.validate();
    const double gT = derived_dephasing(relax);
    const double R = pulsation_weight_R(relax);

    const double kf_v = fields.wavenumber * v.v_par;
    const double kp_v = fields.wavenumber *
                        (v.v_par * std::cos(fields.theta) + v.v_perp * std::sin(fields.theta));

    const Complex i_gT{0.0, gT};
    const Complex f1 = 1.0 / (Complex(delta - fields.delta0 - kp_v) + i_gT);
    const Complex fcoh_probe = 1.0 / (Complex(delta + fields.delta0 - kp_v) + i_gT);

    Complex sum{0.0, 0.0};
    const int npaths = (mode == PumpTermMode::PaperSingleTerm) ? 1 : 2;
    for (int p = 0; p < npaths; ++p) {
        const double kX_v = (p == 0) ? kf_v : -kf_v; // k_b = -k_f
        const double z = delta + (kX_v - kp_v);      // grating beat detuning
        const Complex fpop = (1.0 - R) / (Complex(z, relax.gamma1)) +
                             (1.0 + R) / (Complex(z, relax.gamma2));
        const Complex fcoh_pump = 1.0 / (Complex(-fields.delta0 + kX_v) + i_gT);
        sum += f1 * fpop * (fcoh_pump + fcoh_probe);
    }
    return -(n0 / 4.0) * fields.omega_f * fields.omega_b * fields.omega_p * sum;
}

Complex fwm_amplitude(double delta, const VelocitySample& v, const FieldConfig& fields,
                      const RelaxationParams& relax, const PumpSource& pump,
                      PumpTermMode mode) {
    const double n0 = equilibrium_population_difference(pump, relax);
    return fwm_amplitude_n0(delta, v, fields, relax, n0, mode);
}

Spectrum spectrum_stationary(const std::vector<double>& grid, const FieldConfig& fields,
                             const RelaxationParams& relax, const PumpSource& pump,
                             PumpTermMode mode, ExecPolicy exec) {
    validate_grid(grid);
    const double n0 = equilibrium_population_difference(pump, relax);
    // fail fast on degenerate rates before entering the parallel region
    (void)pulsation_weight_R(relax);

    Spectrum spec;
    spec.points.resize(grid.size());
    const VelocitySample at_rest{};
    const auto n = static_cast<long>(grid.size());

    if (exec == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) {
            const Complex a = fwm_amplitude_n0(grid[i], at_rest, fields, relax, n0, mode);
            spec.points[i] = {grid[i], a, std::norm(a)};
        }
    } else {
        for (long i = 0; i < n; ++i) {
            const Complex a = fwm_amplitude_n0(grid[i], at_rest, fields, relax, n0, mode);
            spec.points[i] = {grid[i], a, std::norm(a)};
        }
    }

    spec.meta.relax = relax;
    spec.meta.pump = pump;
    spec.meta.fields = fields;
    spec.meta.mode = mode;
    spec.meta.doppler_averaged = false;
    return spec;
}

} // namespace ndfwm
