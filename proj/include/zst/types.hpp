#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zst {

/// Raised for malformed configuration text (bad syntax, unknown keys,
/// unparseable values). Maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for filesystem problems (unreadable input, unwritable output).
/// Maps to CLI exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ZonalKind { Linear, Cubic };
enum class ShearKind { Random, Advective, QG };
enum class SpectrumKind { Equipartition, Kolmogorov, Combined };

/// Zonal cross-sweep SDE parameters.
///
/// Linear:  du = (-gamma_u u + f) dt + sigma_u dW1
/// Cubic:   du = (a u + b u^2 - c u^3 + f) dt + (A - B u) dW2 + sigma_u dW1
struct ZonalSpec {
    ZonalKind kind = ZonalKind::Linear;
    double gamma_u = 1.0;
    double f = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double A = 0.0;
    double B = 0.0;
    double sigma_u = 1.0;
};

/// Shear-flow dispersion/damping model. Damping is gamma_{v,k} = d_v + nu k^2
/// for every kind; the kinds differ in the dispersion pair (a_k, b_k).
struct ShearSpec {
    ShearKind kind = ShearKind::Random;
    double d_v = 0.6;
    double nu = 0.1;
    double c_wave = 1.0;  // Advective only
    double beta = 8.91;   // QG only
    double F = 2.5;       // QG only, inverse deformation radius squared
};

/// Shear energy spectrum E_{v,k}.
struct SpectrumSpec {
    SpectrumKind kind = SpectrumKind::Equipartition;
    double E0 = 1.0;
    int k0 = 1;                   // Combined only: crossover wavenumber
    bool normalize_total = false; // rescale so the one-sided total matches kmax*E0
};

struct TracerSpec {
    double alpha = 1.0;  // mean-gradient magnitude
    double d_T = 0.1;
    double kappa = 0.001;
};

/// Full experiment description: model specs plus run controls.
/// Simulated modes are k = 1..kmax; negative modes are implied by conjugation.
struct ExperimentConfig {
    ZonalSpec zonal;
    ShearSpec shear;
    SpectrumSpec spectrum;
    TracerSpec tracer;

    int kmax = 1;
    double epsilon = 1.0;    // timescale separation, 0 < epsilon <= 1
    double dt = 1e-3;
    double t_end = 10.0;
    double t_burnin = 0.0;
    int subsample = 1;
    std::uint64_t seed = 1;
    int n_ensemble = 1;
    int x_grid_n = 128;
};

/// Outcome of validate_config: fatal errors plus non-fatal warnings.
struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

}  // namespace zst
