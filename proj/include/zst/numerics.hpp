#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace zst {

/// Trapezoid integral of y over a uniform grid with spacing h.
template <class T>
T trapz_uniform(std::span<const T> y, double h) {
    if (y.size() < 2) return T{};
    T acc{};
    for (std::size_t i = 0; i + 1 < y.size(); ++i) acc += y[i] + y[i + 1];
    return acc * (h / 2.0);
}

/// Trapezoid integral of y over an arbitrary strictly increasing grid x.
inline double trapz(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("trapz: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        acc += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return acc;
}

/// Cumulative trapezoid on a uniform grid; out[0] = 0, out[i] = integral to x_i.
template <class T>
void cumtrapz_uniform(std::span<const T> y, double h, std::vector<T>& out) {
    out.resize(y.size());
    if (y.empty()) return;
    out[0] = T{};
    for (std::size_t i = 1; i < y.size(); ++i)
        out[i] = out[i - 1] + (y[i - 1] + y[i]) * (h / 2.0);
}

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Linear interpolation of (x, y) at query q; clamps outside the grid.
inline double interp_linear(std::span<const double> x, std::span<const double> y, double q) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("interp_linear: bad table");
    if (q <= x.front()) return y.front();
    if (q >= x.back()) return y.back();
    auto it = std::upper_bound(x.begin(), x.end(), q);
    std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    double w = (q - x[i]) / (x[i + 1] - x[i]);
    return y[i] + w * (y[i + 1] - y[i]);
}

/// Uniform grid of n points over [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
    std::vector<double> g(n);
    double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + h * static_cast<double>(i);
    g.back() = hi;
    return g;
}

}  // namespace zst
