#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zst/numerics.hpp"
#include "zst/types.hpp"

namespace zst {

/// Deterministic drift of the zonal SDE at velocity u.
inline double zonal_drift(const ZonalSpec& z, double u) {
    if (z.kind == ZonalKind::Linear) return -z.gamma_u * u + z.f;
    return z.a * u + z.b * u * u - z.c * u * u * u + z.f;
}

/// One Euler-Maruyama step. xi1 drives the additive noise, xi2 the
/// multiplicative CAM term (unused for the Linear kind).
inline double zonal_step_euler_maruyama(const ZonalSpec& z, double u, double dt,
                                        double xi1, double xi2) {
    double sdt = std::sqrt(dt);
    double next = u + zonal_drift(z, u) * dt + z.sigma_u * sdt * xi1;
    if (z.kind == ZonalKind::Cubic) next += (z.A - z.B * u) * sdt * xi2;
    return next;
}

struct OuStats {
    double mean;
    double variance;
};

/// Steady-state mean f/gamma_u and variance sigma_u^2 / (2 gamma_u) of the
/// linear zonal model.
inline OuStats ou_stationary_stats(double gamma_u, double sigma_u, double f) {
    if (gamma_u <= 0.0) throw std::invalid_argument("ou_stationary_stats: gamma_u must be positive");
    return {f / gamma_u, sigma_u * sigma_u / (2.0 * gamma_u)};
}

/// Potential V(x) = -f x - a/2 x^2 - b/3 x^3 + c/4 x^4 of the gradient form
/// of the cubic model. Only defined for A = B = 0.
inline double zonal_potential(const ZonalSpec& z, double x) {
    if (z.kind != ZonalKind::Cubic)
        throw std::invalid_argument("zonal_potential: cubic kind required");
    if (z.A != 0.0 || z.B != 0.0)
        throw std::invalid_argument("zonal_potential: gradient form requires A = B = 0");
    return -z.f * x - 0.5 * z.a * x * x - z.b / 3.0 * x * x * x + 0.25 * z.c * x * x * x * x;
}

/// Coefficients of the closed-form stationary density of the cubic model with
/// CAM noise. Only meaningful for B != 0.
struct CamCoefficients {
    double a1, b1, c1, d, d1, d2;
};

inline CamCoefficients cam_pdf_coefficients(const ZonalSpec& z) {
    if (z.kind != ZonalKind::Cubic || z.B == 0.0)
        throw std::invalid_argument("cam_pdf_coefficients: cubic kind with B != 0 required");
    if (z.sigma_u == 0.0)
        throw std::invalid_argument("cam_pdf_coefficients: sigma_u must be nonzero");
    const double B2 = z.B * z.B;
    const double B4 = B2 * B2;
    CamCoefficients r{};
    r.a1 = 1.0 - (-3.0 * z.A * z.A * z.c + z.a * B2 + 2.0 * z.A * z.b * z.B + z.c * z.sigma_u * z.sigma_u) / B4;
    r.b1 = 2.0 * z.b * B2 - 4.0 * z.c * z.A * z.B;
    r.c1 = z.c * B2;
    r.d1 = 2.0 * (z.A * z.A * z.b * z.B - z.A * z.A * z.A * z.c + z.A * z.a * B2 + z.B * B2 * z.f) / B4;
    r.d2 = 2.0 * (3.0 * z.c * z.A - z.b * z.B) / B4;
    r.d = r.d1 / z.sigma_u + r.d2 * z.sigma_u;
    return r;
}

enum class ZonalPdfKind { Gaussian, GradientPotential, CamGeneral };

/// Tabulated stationary density of the zonal flow on a user grid.
struct ZonalStationaryPdf {
    ZonalPdfKind kind = ZonalPdfKind::Gaussian;
    std::vector<double> grid;
    std::vector<double> density;
    double mean = 0.0;
    double variance = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

/// Unnormalized log-density of the stationary zonal distribution, shifted so
/// that the value at u = 0 is zero. The CAM branch cancels the B^-4 scale
/// terms analytically and evaluates in extended precision: the raw exponent
/// carries terms of magnitude sigma^2 c / B^4 that must cancel to O(1).
inline double zonal_log_density_unnorm(const ZonalSpec& z, double u) {
    if (z.kind == ZonalKind::Linear) {
        if (z.gamma_u <= 0.0)
            throw std::invalid_argument("stationary_pdf: gamma_u must be positive");
        const double mu = z.f / z.gamma_u;
        const double var = z.sigma_u * z.sigma_u / (2.0 * z.gamma_u);
        if (var <= 0.0) throw std::invalid_argument("stationary_pdf: zero-noise linear model has no density");
        return -(u - mu) * (u - mu) / (2.0 * var) + mu * mu / (2.0 * var);
    }
    if (z.B == 0.0) {
        // Gradient branch; an A-only noise is additive with combined variance.
        const double s2 = z.sigma_u * z.sigma_u + z.A * z.A;
        if (s2 <= 0.0)
            throw std::invalid_argument("stationary_pdf: cubic model needs nonzero noise");
        ZonalSpec grad = z;
        grad.A = grad.B = 0.0;
        return -2.0 * zonal_potential(grad, u) / s2;
    }
    if (z.sigma_u == 0.0)
        throw std::invalid_argument("stationary_pdf: CAM density undefined for sigma_u = 0");

    const long double A = z.A, B = z.B, s = z.sigma_u;
    const long double B2 = B * B, B4 = B2 * B2;
    const long double a1 = 1.0L - (-3.0L * A * A * z.c + z.a * B2 + 2.0L * A * z.b * B + z.c * s * s) / B4;
    const long double b1 = 2.0L * z.b * B2 - 4.0L * z.c * A * B;
    const long double c1 = static_cast<long double>(z.c) * B2;
    const long double d1 = 2.0L * (A * A * z.b * B - A * A * A * z.c + A * z.a * B2 + B * B2 * z.f) / B4;
    const long double d = d1 / s + 2.0L * (3.0L * z.c * A - z.b * B) / B4 * s;

    const long double x = u;
    // log((Bx-A)^2 + s^2) - log(A^2 + s^2), written to avoid cancellation:
    // (Bx-A)^2 - A^2 = Bx (Bx - 2A).
    const long double rel = B * x * (B * x - 2.0L * A) / (A * A + s * s);
    const long double log_term = -a1 * std::log1p(rel);
    // atan((Bx-A)/s) - atan(-A/s) via the difference identity when safe.
    const long double pq = (B * x - A) / s * (-A / s);
    long double atan_term;
    if (pq > -0.5L) {
        atan_term = d * std::atan((B * x / s) / (1.0L + pq));
    } else {
        atan_term = d * (std::atan((B * x - A) / s) - std::atan(-A / s));
    }
    const long double poly_term = (-c1 * x * x + b1 * x) / B4;
    return static_cast<double>(log_term + atan_term + poly_term);
}

struct NormalizedDensity {
    std::vector<double> density;  // on the user grid
    double mean, variance;
    double user_mass;  // fraction of total mass covered by the user grid
};

/// Normalizes exp(logp) by trapezoid quadrature, extending the grid beyond
/// both ends with the boundary spacing until the added mass per block drops
/// below 1e-8 of the running total.
template <class LogDensity>
NormalizedDensity normalize_density(const LogDensity& logp, const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    if (n < 8) throw std::invalid_argument("stationary_pdf: grid too small");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(grid[i + 1] > grid[i]))
            throw std::invalid_argument("stationary_pdf: grid must be strictly increasing");

    std::vector<double> lp(n);
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        lp[i] = logp(grid[i]);
        lmax = std::max(lmax, lp[i]);
    }
    if (!std::isfinite(lmax)) throw std::runtime_error("stationary_pdf: log-density not finite on grid");

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = std::exp(lp[i] - lmax);

    double mass = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = grid[i + 1] - grid[i];
        mass += 0.5 * h * (p[i] + p[i + 1]);
        m1 += 0.5 * h * (grid[i] * p[i] + grid[i + 1] * p[i + 1]);
        m2 += 0.5 * h * (grid[i] * grid[i] * p[i] + grid[i + 1] * grid[i + 1] * p[i + 1]);
    }
    const double user_mass_raw = mass;

    // Tail extension on both sides.
    constexpr int block = 64;
    constexpr std::size_t max_blocks = 200000;
    for (int side = 0; side < 2; ++side) {
        const double h = (side == 0) ? grid[1] - grid[0] : grid[n - 1] - grid[n - 2];
        double x = (side == 0) ? grid.front() : grid.back();
        double pv = (side == 0) ? p.front() : p.back();
        const double dir = (side == 0) ? -1.0 : 1.0;
        std::size_t blocks = 0;
        while (true) {
            double dm = 0.0, dm1 = 0.0, dm2 = 0.0;
            for (int j = 0; j < block; ++j) {
                const double xn = x + dir * h;
                const double pn = std::exp(logp(xn) - lmax);
                dm += 0.5 * h * (pv + pn);
                dm1 += 0.5 * h * (x * pv + xn * pn);
                dm2 += 0.5 * h * (x * x * pv + xn * xn * pn);
                x = xn;
                pv = pn;
            }
            mass += dm;
            m1 += dm1;
            m2 += dm2;
            if (dm < 1e-8 * mass) break;
            if (++blocks > max_blocks)
                throw std::runtime_error("stationary_pdf: density quadrature does not converge "
                                         "(non-integrable parameter combination?)");
        }
    }

    NormalizedDensity out;
    out.density.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.density[i] = p[i] / mass;
    out.mean = m1 / mass;
    out.variance = std::max(0.0, m2 / mass - out.mean * out.mean);
    out.user_mass = user_mass_raw / mass;
    return out;
}

}  // namespace detail

/// Stationary density of the zonal model tabulated on `grid`, normalized by
/// trapezoid quadrature with automatic tail extension. Branches: Gaussian for
/// the linear kind, exp(-2V/sigma^2) for the cubic gradient case (B = 0), and
/// the closed-form CAM density otherwise.
inline ZonalStationaryPdf zonal_stationary_pdf(const ZonalSpec& z, std::vector<double> grid) {
    ZonalStationaryPdf out;
    out.kind = (z.kind == ZonalKind::Linear) ? ZonalPdfKind::Gaussian
               : (z.B == 0.0)                ? ZonalPdfKind::GradientPotential
                                             : ZonalPdfKind::CamGeneral;
    auto logp = [&z](double u) { return detail::zonal_log_density_unnorm(z, u); };
    auto norm = detail::normalize_density(logp, grid);
    out.grid = std::move(grid);
    out.density = std::move(norm.density);
    out.mean = norm.mean;
    out.variance = norm.variance;
    const double sd = std::sqrt(out.variance);
    if (norm.user_mass < 1.0 - 1e-6)
        out.warnings.push_back("grid misses " + std::to_string(1.0 - norm.user_mass) +
                               " of the stationary mass; extend the grid");
    if (out.grid.back() - out.grid.front() < 8.0 * sd)
        out.warnings.push_back("grid narrower than 8 bulk standard deviations");
    return out;
}

struct EquilibriumPoint {
    double u = 0.0;
    int stability = 0;  // +1 stable, -1 unstable, 0 marginal
};

/// Classification of the deterministic cubic drift f + a u + b u^2 - c u^3.
struct RegimeReport {
    double discriminant = 0.0;
    int n_real_roots = 0;
    std::vector<EquilibriumPoint> roots;  // ascending in u
    std::optional<double> f_minus, f_plus;  // bistable band bounds, a > -b^2/(3c) only
};

/// Equilibria of the noise-free cubic model via the trigonometric/Cardano
/// closed form on the monic normalization, refined by one Newton step.
inline RegimeReport classify_regime(double a, double b, double c, double f) {
    if (c <= 0.0) throw std::invalid_argument("classify_regime: c must be positive");
    // Monic form x^3 + c2 x^2 + c1 x + c0 = 0 equivalent to f + ax + bx^2 - cx^3 = 0.
    const double c2 = -b / c, c1 = -a / c, c0 = -f / c;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = c0 - c2 * c1 / 3.0 + 2.0 * c2 * c2 * c2 / 27.0;
    RegimeReport rep;
    rep.discriminant = -4.0 * p * p * p - 27.0 * q * q;

    std::vector<double> t_roots;
    if (rep.discriminant > 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            t_roots.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
        rep.n_real_roots = 3;
    } else if (rep.discriminant < 0.0) {
        const double D = q * q / 4.0 + p * p * p / 27.0;  // > 0 here
        const double s = std::sqrt(D);
        const double w = std::cbrt(-q / 2.0 - std::copysign(s, q));
        const double t = (w == 0.0) ? 0.0 : w - p / (3.0 * w);
        t_roots.push_back(t);
        rep.n_real_roots = 1;
    } else {
        if (p == 0.0 && q == 0.0) {
            t_roots.push_back(0.0);  // triple root
            rep.n_real_roots = 1;
        } else {
            const double r = -3.0 * q / (2.0 * p);  // double root
            t_roots.push_back(r);
            t_roots.push_back(-2.0 * r);
            rep.n_real_roots = 2;
        }
    }

    auto drift = [&](double x) { return f + a * x + b * x * x - c * x * x * x; };
    auto drift_d = [&](double x) { return a + 2.0 * b * x - 3.0 * c * x * x; };
    for (double t : t_roots) {
        double x = t - c2 / 3.0;
        const double dd = drift_d(x);
        if (std::abs(dd) > 1e-30) x -= drift(x) / dd;  // one Newton refinement
        EquilibriumPoint ep;
        ep.u = x;
        const double slope = drift_d(x);
        ep.stability = (std::abs(slope) < 1e-10) ? 0 : (slope < 0.0 ? +1 : -1);
        rep.roots.push_back(ep);
    }
    std::sort(rep.roots.begin(), rep.roots.end(),
              [](const EquilibriumPoint& l, const EquilibriumPoint& r) { return l.u < r.u; });

    const double a_c = -b * b / (3.0 * c);
    if (a > a_c) {
        const double inner = a / (3.0 * c) + b * b / (9.0 * c * c);
        const double off = -a * b / (3.0 * c) - 2.0 * b * b * b / (27.0 * c * c);
        const double half = 2.0 * c * std::pow(inner, 1.5);
        rep.f_minus = off - half;
        rep.f_plus = off + half;
    }
    return rep;
}

/// Default tabulation grid: mean +/- 10 bulk standard deviations, 4001 points.
/// Bulk scale is estimated from a coarse provisional normalization.
inline std::vector<double> zonal_default_grid(const ZonalSpec& z, std::size_t n_points = 4001) {
    double center = 0.0, scale = 1.0;
    if (z.kind == ZonalKind::Linear) {
        auto st = ou_stationary_stats(z.gamma_u, z.sigma_u, z.f);
        center = st.mean;
        scale = std::sqrt(std::max(st.variance, 1e-12));
    } else {
        auto rep = classify_regime(z.a, z.b, z.c, z.f);
        double span = 1.0;
        for (const auto& r : rep.roots) span = std::max(span, std::abs(r.u));
        auto logp = [&z](double u) { return detail::zonal_log_density_unnorm(z, u); };
        auto coarse = detail::normalize_density(logp, linspace(-4.0 * span, 4.0 * span, 512));
        center = coarse.mean;
        scale = std::sqrt(std::max(coarse.variance, 1e-12));
    }
    return linspace(center - 10.0 * scale, center + 10.0 * scale, n_points);
}

}  // namespace zst
