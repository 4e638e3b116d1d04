#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zst/types.hpp"

namespace zst {

/// Per-wavenumber coefficients consumed by the integrator and statistics.
/// sigma_v = sqrt(2 gamma_v E_v) so that the stationary mode energy is E_v.
/// u_res is empty for degenerate modes (a_k + k = 0), whose relative
/// frequency omega_R does not depend on the zonal velocity.
struct ModeCoefficients {
    int k = 1;
    double a_k = 0.0;
    double b_k = 0.0;
    double gamma_v = 1.0;
    double gamma_T = 1.0;
    double E_v = 1.0;
    double sigma_v = 1.0;
    std::optional<double> u_res;
};

using ModeTable = std::vector<ModeCoefficients>;

/// Dispersion pair (a_k, b_k) so that omega_{v,k} = a_k u + b_k.
/// Random -> (0, 0); Advective -> (0, -c k); QG -> (k (F/k^2 - 1), beta k / (k^2 + F)).
inline std::pair<double, double> dispersion_coeffs(const ShearSpec& s, int k) {
    if (k == 0) throw std::invalid_argument("dispersion_coeffs: k = 0 is excluded");
    const double kd = static_cast<double>(k);
    switch (s.kind) {
        case ShearKind::Random:
            return {0.0, 0.0};
        case ShearKind::Advective:
            return {0.0, -s.c_wave * kd};
        case ShearKind::QG:
            return {kd * (s.F / (kd * kd) - 1.0), s.beta * kd / (kd * kd + s.F)};
    }
    throw std::logic_error("dispersion_coeffs: unknown shear kind");
}

inline double shear_damping(const ShearSpec& s, int k) {
    const double kd = static_cast<double>(k);
    return s.d_v + s.nu * kd * kd;
}

/// Energy per mode for the given wavenumber set. With normalize_total the
/// values are rescaled so the one-sided total equals count * E0, matching the
/// equipartition total over the same truncated set.
inline std::vector<double> energy_spectrum(const SpectrumSpec& sp, const std::vector<int>& ks) {
    if (ks.empty()) throw std::invalid_argument("energy_spectrum: empty mode set");
    std::vector<double> e(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const int k = ks[i];
        if (k == 0) throw std::invalid_argument("energy_spectrum: k = 0 is excluded");
        const double ak = std::abs(static_cast<double>(k));
        switch (sp.kind) {
            case SpectrumKind::Equipartition:
                e[i] = sp.E0;
                break;
            case SpectrumKind::Kolmogorov:
                e[i] = sp.E0 * std::pow(ak, -5.0 / 3.0);
                break;
            case SpectrumKind::Combined:
                e[i] = (ak <= sp.k0) ? sp.E0 : sp.E0 * std::pow(ak / sp.k0, -5.0 / 3.0);
                break;
        }
    }
    if (sp.normalize_total) {
        double total = 0.0;
        for (double v : e) total += v;
        const double scale = static_cast<double>(ks.size()) * sp.E0 / total;
        for (double& v : e) v *= scale;
    }
    return e;
}

struct Frequencies {
    double omega_v;  // a_k u + b_k
    double omega_T;  // -u k
    double omega_R;  // omega_T - omega_v = -(a_k + k) u - b_k
};

inline Frequencies frequencies(const ModeCoefficients& m, double u) {
    Frequencies f;
    f.omega_v = m.a_k * u + m.b_k;
    f.omega_T = -u * static_cast<double>(m.k);
    f.omega_R = -(m.a_k + static_cast<double>(m.k)) * u - m.b_k;
    return f;
}

inline bool resonance_degenerate(double a_k, int k) {
    const double s = a_k + static_cast<double>(k);
    return std::abs(s) <= 1e-14 * std::max({1.0, std::abs(a_k), std::abs(static_cast<double>(k))});
}

/// Zonal speed u_res = -b_k / (a_k + k) at which omega_R vanishes.
inline double resonance_threshold(const ModeCoefficients& m) {
    if (resonance_degenerate(m.a_k, m.k))
        throw std::invalid_argument("resonance_threshold: degenerate mode, no resonance");
    return -m.b_k / (m.a_k + static_cast<double>(m.k));
}

}  // namespace zst
