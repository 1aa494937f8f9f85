// types.hpp - parameter structs, spectrum containers and error types shared by all modules
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndfwm {

using Complex = std::complex<double>;

// ---- errors ----------------------------------------------------------------

struct DegenerateRates : std::runtime_error {
    explicit DegenerateRates(const std::string& msg) : std::runtime_error(msg) {}
};
struct InvalidRates : std::runtime_error {
    explicit InvalidRates(const std::string& msg) : std::runtime_error(msg) {}
};
struct InvalidWidth : std::runtime_error {
    explicit InvalidWidth(const std::string& msg) : std::runtime_error(msg) {}
};
struct QuadratureNotConverged : std::runtime_error {
    explicit QuadratureNotConverged(const std::string& msg) : std::runtime_error(msg) {}
};
struct EmptySpectrum : std::runtime_error {
    explicit EmptySpectrum(const std::string& msg) : std::runtime_error(msg) {}
};
struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& msg) : std::runtime_error(msg) {}
};
struct NotConverged : std::runtime_error {
    explicit NotConverged(const std::string& msg) : std::runtime_error(msg) {}
};
struct StiffIntegration : std::runtime_error {
    explicit StiffIntegration(const std::string& msg) : std::runtime_error(msg) {}
};
struct NonFiniteResidual : std::runtime_error {
    explicit NonFiniteResidual(const std::string& msg) : std::runtime_error(msg) {}
};
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- physical parameters ----------------------------------------------------
// All rates, detunings and Rabi frequencies are in MHz; velocities in m/s;
// wavenumbers in rad/um, so that k*v adds directly to detunings in MHz.

struct RelaxationParams {
    double gamma1 = 3.0;   // total decay rate of level 1
    double gamma2 = 6.0;   // total decay rate of level 2
    double gamma21 = 6.0;  // spontaneous decay rate from level 2 into level 1
    double gamma_ph = 3.0; // pure dephasing rate

    void validate() const {
        if (gamma1 < 0 || gamma2 < 0 || gamma21 < 0 || gamma_ph < 0)
            throw InvalidRates("relaxation rates must be nonnegative");
    }
    void validate_for_steady_state() const {
        validate();
        if (gamma1 <= 0 || gamma2 <= 0)
            throw InvalidRates("gamma1 and gamma2 must be positive for steady-state evaluation");
    }
    // gamma21 > gamma2 means level 2 feeds level 1 faster than it decays in
    // total; the equations stay well-posed, so this is reported, not enforced.
    bool physically_admissible() const {
        return gamma1 >= 0 && gamma2 >= 0 && gamma_ph >= 0 &&
               gamma21 >= 0 && gamma21 <= gamma2;
    }
};

struct PumpSource {
    double lambda1 = 3.0; // incoherent pump rate into level 1
    double lambda2 = 0.0; // incoherent pump rate into level 2

    void validate() const {
        if (lambda1 < 0 || lambda2 < 0)
            throw InvalidRates("pump rates must be nonnegative");
    }
};

struct FieldConfig {
    double omega_f = 1.0;     // Rabi frequency, forward pump
    double omega_b = 1.0;     // Rabi frequency, backward pump
    double omega_p = 1.0;     // Rabi frequency, probe
    double delta0 = 50.0;     // pump detuning (pump frequency minus transition frequency)
    double wavenumber = 7.9;  // |k| in rad/um (795 nm -> 2*pi/0.795 = 7.903)
    double theta = 0.004;     // pump-probe angle in rad, small-angle regime

    void validate() const {
        if (wavenumber <= 0) throw InvalidRates("wavenumber must be positive");
        if (theta < 0 || theta >= 0.1)
            throw InvalidRates("theta must lie in [0, 0.1) (small-angle regime)");
    }
};

enum class PumpTermMode {
    PaperSingleTerm, // forward-pump grating pathway only
    BothPumps        // adds the backward-pump grating pathway (k_f -> k_b = -k_f)
};

enum class ExecPolicy { Serial, Parallel };

// velocity sample; v_par along the forward pump, v_perp in the pump-probe plane
struct VelocitySample {
    double v_par = 0.0;
    double v_perp = 0.0;
};

// ---- doppler ----------------------------------------------------------------

enum class ResidualMode {
    IgnoreTransverse, // 1-D longitudinal velocity only
    GaussianBroaden,  // 1-D plus post-hoc Gaussian convolution of width k*theta*u/sqrt(2)
    TwoDimensional    // product quadrature over (v_par, v_perp)
};

struct DopplerParams {
    double u = 300.0 / 7.903; // most probable speed [m/s]; k*u = 300 MHz at 795 nm
    int quadrature_order = 64;
    ResidualMode residual_mode = ResidualMode::IgnoreTransverse;
    bool check_convergence = false; // doubling check (3x cost); tolerance below
    double convergence_tol = 1e-4;

    void validate() const {
        if (u < 0) throw InvalidWidth("most probable speed must be nonnegative");
        if (quadrature_order < 4) throw InvalidRates("quadrature order must be >= 4");
        if (convergence_tol <= 0) throw InvalidRates("convergence tolerance must be positive");
    }
};

// ---- repump (phenomenological) ----------------------------------------------

struct RepumpParams {
    double delta_r = -79.0;  // repump detuning [MHz]
    double rate_r = 0.0;     // repump strength [MHz]
    double width_r = 6.0;    // effective linewidth of the repump interaction [MHz]
    double k_r = 7.9;        // repump wavenumber, signed (co-axial with forward pump when > 0)
    double eta = 0.5;        // mixing factor feeding gamma21, in [0,1]
    bool cap_at_gamma2 = true;

    void validate() const {
        if (rate_r < 0) throw InvalidRates("repump strength must be nonnegative");
        if (width_r <= 0) throw InvalidWidth("repump width must be positive");
        if (eta < 0 || eta > 1) throw InvalidRates("eta must lie in [0,1]");
    }
};

// ---- spectrum ---------------------------------------------------------------

struct SpectrumPoint {
    double delta = 0.0;
    Complex amplitude{0.0, 0.0};
    double intensity = 0.0; // |amplitude|^2, kept in sync by the producers
};

struct QuadratureDiagnostics {
    int order = 0;
    int live_nodes = 0;       // nodes with non-underflowing weight
    double weight_sum = 0.0;  // normalized weights, should be 1
    bool convergence_checked = false;
    double convergence_delta = 0.0; // relative sup-norm change on order doubling
};

struct SpectrumMeta {
    RelaxationParams relax;
    PumpSource pump;
    FieldConfig fields;
    PumpTermMode mode = PumpTermMode::BothPumps;
    bool doppler_averaged = false;
    DopplerParams doppler;
    bool repump_active = false;
    RepumpParams repump;
    QuadratureDiagnostics quadrature;
};

struct Spectrum {
    std::vector<SpectrumPoint> points;
    SpectrumMeta meta;

    std::size_t size() const { return points.size(); }
    double max_intensity() const {
        double m = 0.0;
        for (const auto& p : points) m = std::max(m, p.intensity);
        return m;
    }
};

// strictly increasing uniform grid helper
std::vector<double> linspace_grid(double lo, double hi, int n);
void validate_grid(const std::vector<double>& grid);

} // namespace ndfwm
