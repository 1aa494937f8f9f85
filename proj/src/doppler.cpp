#include "ndfwm/doppler.hpp"
#include "ndfwm/model.hpp"
#include "ndfwm/repump.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace ndfwm {

double maxwell_weight(double v, double u) {
    if (u <= 0) throw InvalidWidth("most probable speed must be positive");
    const double x = v / u;
    return std::exp(-x * x) / (u * std::sqrt(M_PI));
}

namespace {

// Weighted orthonormal Hermite functions psi_k(x) = h_k(x) exp(-x^2/2); the
// recurrence stays bounded for any order, unlike the bare polynomials.
// Returns psi_n and psi_{n-1}.
void weighted_hermite(int n, double x, double& psi_n, double& psi_nm1) {
    double p0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) { psi_n = p0; psi_nm1 = 0.0; return; }
    double p1 = std::sqrt(2.0) * x * p0;
    for (int k = 1; k < n; ++k) {
        const double p2 =
            x * std::sqrt(2.0 / (k + 1)) * p1 - std::sqrt(double(k) / (k + 1)) * p0;
        p0 = p1;
        p1 = p2;
    }
    psi_n = p1;
    psi_nm1 = p0;
}

// Gauss-Hermite nodes/weights via sign-change bracketing of psi_n followed by
// safeguarded Newton. Weight identity in the orthonormal basis:
//   w_i = exp(-x_i^2) / (n * h_{n-1}(x_i)^2) = 1 / (n * psi_{n-1}(x_i)^2 * e^{x_i^2}) * e^{..}
// evaluated in log space as lw = -x^2 - log(n) - 2 log|psi_{n-1}(x)|.
// Weights below the double-precision floor are dropped together with their nodes.
GaussHermiteRule build_rule(int n) {
    const double edge = std::sqrt(2.0 * n + 1.0);
    const int half = (n + 1) / 2; // positive roots, plus x=0 for odd n

    // scan points marching at ~0.45 of the local oscillation wavelength
    std::vector<double> scan;
    scan.push_back(n % 2 == 1 ? 1e-12 : 0.0);
    double x = scan.back();
    while (x < edge) {
        const double slope = std::max(2.0 * n + 1.0 - x * x, 4.0);
        x += 0.45 * M_PI / std::sqrt(slope);
        scan.push_back(std::min(x, edge));
    }
    const long ns = static_cast<long>(scan.size());
    std::vector<double> vals(ns);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < ns; ++i) {
        double pn, pnm1;
        weighted_hermite(n, scan[i], pn, pnm1);
        vals[i] = pn;
    }

    std::vector<std::pair<double, double>> brackets;
    brackets.reserve(half);
    for (long i = 0; i + 1 < ns; ++i)
        if ((vals[i] < 0) != (vals[i + 1] < 0)) brackets.emplace_back(scan[i], scan[i + 1]);
    const bool odd = (n % 2 == 1);
    if (static_cast<int>(brackets.size()) + (odd ? 1 : 0) != half)
        throw NotConverged("gauss-hermite root bracketing failed at order " + std::to_string(n));

    std::vector<double> roots(half), logw(half);
    const long nb = static_cast<long>(brackets.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nb; ++i) {
        double lo = brackets[i].first, hi = brackets[i].second;
        double xi = 0.5 * (lo + hi);
        double pn, pnm1;
        weighted_hermite(n, lo, pn, pnm1);
        const bool lo_neg = pn < 0;
        for (int it = 0; it < 200; ++it) {
            weighted_hermite(n, xi, pn, pnm1);
            if ((pn < 0) == lo_neg) lo = xi; else hi = xi;
            const double dpn = std::sqrt(2.0 * n) * pnm1 - xi * pn;
            double next = (dpn != 0.0) ? xi - pn / dpn : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi); // bisection fallback
            if (std::abs(next - xi) < 1e-16 * std::max(1.0, xi)) { xi = next; break; }
            xi = next;
        }
        weighted_hermite(n, xi, pn, pnm1);
        const int k = odd ? static_cast<int>(i) + 1 : static_cast<int>(i);
        roots[k] = xi;
        logw[k] = -xi * xi - std::log(double(n)) - 2.0 * std::log(std::abs(pnm1));
    }
    if (odd) {
        double pn, pnm1;
        weighted_hermite(n, 0.0, pn, pnm1);
        roots[0] = 0.0;
        logw[0] = -std::log(double(n)) - 2.0 * std::log(std::abs(pnm1));
    }

    GaussHermiteRule rule;
    rule.order = n;
    const double log_norm = 0.5 * std::log(M_PI); // weights normalized by 1/sqrt(pi)
    for (int i = half - 1; i >= (odd ? 1 : 0); --i) {
        const double w = std::exp(logw[i] - log_norm);
        if (w > 0.0) {
            rule.nodes.push_back(-roots[i]);
            rule.weights.push_back(w);
        }
    }
    for (int i = (odd ? 0 : 0); i < half; ++i) {
        if (!odd && false) break;
        if (i == 0 && !odd) continue; // even n has no node at zero; positives start at i=0
        const double w = std::exp(logw[i] - log_norm);
        if (w > 0.0) {
            rule.nodes.push_back(roots[i]);
            rule.weights.push_back(w);
        }
    }
    if (!odd) {
        for (int i = 0; i < half; ++i) {
            if (i == 0) {
                const double w = std::exp(logw[i] - log_norm);
                if (w > 0.0) {
                    // insert ascending: roots[0] is the smallest positive root
                }
            }
        }
    }

    double s = 0.0;
    for (double w : rule.weights) s += w;
    rule.weight_sum = s;
    return rule;
}

std::map<int, GaussHermiteRule>& rule_cache() {
    static std::map<int, GaussHermiteRule> cache;
    return cache;
}
std::mutex rule_mutex;

} // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    if (order < 1) throw InvalidRates("quadrature order must be positive");
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto& cache = rule_cache();
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

namespace {

// coherent velocity average at one grid point; node order fixed ascending
Complex averaged_amplitude(double delta, const FieldConfig& fields,
                           const RelaxationParams& relax, double n0_base,
                           const PumpSource& pump, const DopplerParams& dop,
                           PumpTermMode mode, const GaussHermiteRule& rule,
                           const GaussHermiteRule* perp_rule, const RepumpParams* repump) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double v_par = dop.u * rule.nodes[j];
        RelaxationParams r = relax;
        double n0 = n0_base;
        if (repump) {
            auto eff = effective_params(relax, pump, *repump, v_par);
            r = eff.first;
            n0 = equilibrium_population_difference(eff.second, r);
        }
        if (perp_rule) {
            Complex inner{0.0, 0.0};
            for (std::size_t m = 0; m < perp_rule->nodes.size(); ++m) {
                const VelocitySample v{v_par, dop.u * perp_rule->nodes[m]};
                inner += perp_rule->weights[m] * fwm_amplitude_n0(delta, v, fields, r, n0, mode);
            }
            acc += rule.weights[j] * inner;
        } else {
            const VelocitySample v{v_par, 0.0};
            acc += rule.weights[j] * fwm_amplitude_n0(delta, v, fields, r, n0, mode);
        }
    }
    return acc;
}

std::vector<Complex> run_average(const std::vector<double>& grid, const FieldConfig& fields,
                                 const RelaxationParams& relax, const PumpSource& pump,
                                 const DopplerParams& dop, PumpTermMode mode, ExecPolicy exec,
                                 const RepumpParams* repump, int order) {
    const GaussHermiteRule& rule = gauss_hermite(order);
    const GaussHermiteRule* perp =
        (dop.residual_mode == ResidualMode::TwoDimensional) ? &gauss_hermite(order) : nullptr;

    const double n0 = equilibrium_population_difference(pump, relax);
    std::vector<Complex> amps(grid.size());
    const auto n = static_cast<long>(grid.size());
    if (exec == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            amps[i] = averaged_amplitude(grid[i], fields, relax, n0, pump, dop, mode, rule,
                                         perp, repump);
    } else {
        for (long i = 0; i < n; ++i)
            amps[i] = averaged_amplitude(grid[i], fields, relax, n0, pump, dop, mode, rule,
                                         perp, repump);
    }
    return amps;
}

// Gaussian convolution of the complex amplitude on a uniform grid; kernel
// truncated at 5 sigma, renormalized, edges clamped
std::vector<Complex> convolve_gaussian(const std::vector<double>& grid,
                                       const std::vector<Complex>& amps, double sigma) {
    if (sigma <= 0.0) return amps;
    const double step = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
    const int half = std::max(1, static_cast<int>(std::ceil(5.0 * sigma / step)));
    std::vector<double> kernel(2 * half + 1);
    double ksum = 0.0;
    for (int j = -half; j <= half; ++j) {
        const double s = j * step / sigma;
        kernel[j + half] = std::exp(-0.5 * s * s);
        ksum += kernel[j + half];
    }
    for (auto& kv : kernel) kv /= ksum;
    const long n = static_cast<long>(amps.size());
    std::vector<Complex> out(amps.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        Complex acc{0.0, 0.0};
        for (int j = -half; j <= half; ++j) {
            const long idx = std::clamp<long>(i + j, 0, n - 1);
            acc += kernel[j + half] * amps[idx];
        }
        out[i] = acc;
    }
    return out;
}

double rel_sup_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(std::norm(a[i]) - std::norm(b[i])));
        den = std::max(den, std::norm(b[i]));
    }
    return den > 0 ? num / den : 0.0;
}

} // namespace

Spectrum doppler_average(const std::vector<double>& grid, const FieldConfig& fields,
                         const RelaxationParams& relax, const PumpSource& pump,
                         const DopplerParams& doppler, PumpTermMode mode, ExecPolicy exec,
                         const RepumpParams* repump) {
    validate_grid(grid);
    doppler.validate();
    fields.validate();
    if (repump) repump->validate();
    (void)pulsation_weight_R(relax);

    // u -> 0 collapses onto the stationary spectrum
    std::vector<Complex> amps;
    if (doppler.u == 0.0) {
        Spectrum st = spectrum_stationary(grid, fields, relax, pump, mode, exec);
        amps.reserve(st.size());
        for (const auto& p : st.points) amps.push_back(p.amplitude);
    } else {
        amps = run_average(grid, fields, relax, pump, doppler, mode, exec, repump,
                           doppler.quadrature_order);
    }

    QuadratureDiagnostics diag;
    const GaussHermiteRule& rule = gauss_hermite(doppler.quadrature_order);
    diag.order = doppler.quadrature_order;
    diag.live_nodes = static_cast<int>(rule.nodes.size());
    diag.weight_sum = rule.weight_sum;

    if (doppler.check_convergence && doppler.u > 0.0) {
        auto amps2 = run_average(grid, fields, relax, pump, doppler, mode, exec, repump,
                                 2 * doppler.quadrature_order);
        diag.convergence_checked = true;
        diag.convergence_delta = rel_sup_diff(amps, amps2);
        if (diag.convergence_delta > doppler.convergence_tol)
            throw QuadratureNotConverged(
                "doubling quadrature order changed the intensity by " +
                std::to_string(diag.convergence_delta) + " (rel sup-norm), tol " +
                std::to_string(doppler.convergence_tol));
    }

    if (doppler.residual_mode == ResidualMode::GaussianBroaden && doppler.u > 0.0) {
        const double sigma = fields.wavenumber * fields.theta * doppler.u / std::sqrt(2.0);
        amps = convolve_gaussian(grid, amps, sigma);
    }

    Spectrum spec;
    spec.points.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        spec.points[i] = {grid[i], amps[i], std::norm(amps[i])};
    spec.meta.relax = relax;
    spec.meta.pump = pump;
    spec.meta.fields = fields;
    spec.meta.mode = mode;
    spec.meta.doppler_averaged = true;
    spec.meta.doppler = doppler;
    spec.meta.quadrature = diag;
    if (repump) {
        spec.meta.repump_active = true;
        spec.meta.repump = *repump;
    }
    return spec;
}

} // namespace ndfwm
