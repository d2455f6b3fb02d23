#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "frplan/errors.hpp"

namespace frplan {

/// sinc(x) = sin(x)/x with the removable singularity filled in.
/// Below |x| < 1e-6 a short Taylor series avoids the 0/0 evaluation;
/// at that threshold the x^4 term is already below machine epsilon.
inline double normalized_sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-6) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

inline double sinc_sq(double x) {
    const double s = normalized_sinc(x);
    return s * s;
}

struct BisectOptions {
    double residual_tol = 1e-10; // |f| target
    int max_iter = 200;
};

/// Bisection on a bracketed sign change. Requires f(a) and f(b) of opposite
/// sign (either order); runs to near machine-width brackets so the residual
/// is far below residual_tol for smooth f.
template <class F>
double bisect(F&& f, double a, double b, const BisectOptions& opt = {}) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw Error(Errc::no_solution, "bisection bracket has no sign change");
    for (int it = 0; it < opt.max_iter; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break; // bracket at 1 ulp
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        if (std::abs(fm) < opt.residual_tol && (b - a) < opt.residual_tol) return m;
    }
    return 0.5 * (a + b);
}

/// Real roots of a*x^3 + b*x^2 + c*x + d = 0 (a != 0), ascending order.
/// Trigonometric form for the three-real-root case, Cardano otherwise; each
/// root is polished with a couple of Newton steps on the original cubic.
inline std::vector<double> cubic_real_roots(double a, double b, double c, double d) {
    if (a == 0.0) throw Error(Errc::invalid_parameter, "cubic with zero leading coefficient");
    // normalize: x^3 + p x^2 + q x + r
    const double p = b / a;
    const double q = c / a;
    const double r = d / a;
    // depressed: t^3 + A t + B, x = t - p/3
    const double A = q - p * p / 3.0;
    const double B = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    const double shift = -p / 3.0;

    std::vector<double> roots;
    const double disc = (B * B) / 4.0 + (A * A * A) / 27.0;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-B / 2.0 + sq);
        const double v = std::cbrt(-B / 2.0 - sq);
        roots.push_back(u + v + shift);
    } else if (disc == 0.0) {
        if (B == 0.0) {
            roots.push_back(shift);
        } else {
            const double u = std::cbrt(-B / 2.0);
            roots.push_back(2.0 * u + shift);
            roots.push_back(-u + shift);
        }
    } else {
        // three distinct real roots
        const double m = 2.0 * std::sqrt(-A / 3.0);
        const double arg = std::clamp(3.0 * B / (A * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos(phi - 2.0 * M_PI * k / 3.0) + shift);
    }

    auto poly = [&](double x) { return ((a * x + b) * x + c) * x + d; };
    auto dpoly = [&](double x) { return (3.0 * a * x + 2.0 * b) * x + c; };
    for (double& x : roots) {
        for (int it = 0; it < 3; ++it) {
            const double der = dpoly(x);
            if (der == 0.0) break;
            const double step = poly(x) / der;
            if (!std::isfinite(step)) break;
            x -= step;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Inclusive 1D scan grid: lo, lo+step, ..., and hi itself when the lattice
/// does not land on it.
inline std::vector<double> scan_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw Error(Errc::invalid_parameter, "scan step must be positive");
    if (lo > hi) throw Error(Errc::empty_search_region, "scan interval is empty");
    std::vector<double> xs;
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step));
    xs.reserve(static_cast<std::size_t>(n) + 2);
    for (std::int64_t k = 0; k <= n; ++k) xs.push_back(lo + static_cast<double>(k) * step);
    if (xs.back() < hi - 1e-12 * std::max(1.0, std::abs(hi))) xs.push_back(hi);
    return xs;
}

/// Lattice anchored at `anchor`: all anchor + k*step that fall inside
/// [lo, hi]. Grids for nested intervals around the same anchor are nested,
/// which keeps region-size sweeps monotone.
inline std::vector<double> anchored_grid(double anchor, double lo, double hi, double step) {
    if (!(step > 0.0)) throw Error(Errc::invalid_parameter, "scan step must be positive");
    if (lo > hi) throw Error(Errc::empty_search_region, "scan interval is empty");
    const auto k_lo = static_cast<std::int64_t>(std::ceil((lo - anchor) / step - 1e-12));
    const auto k_hi = static_cast<std::int64_t>(std::floor((hi - anchor) / step + 1e-12));
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, k_hi - k_lo + 1)));
    for (std::int64_t k = k_lo; k <= k_hi; ++k) xs.push_back(anchor + static_cast<double>(k) * step);
    return xs;
}

/// FNV-1a 64-bit, used to stamp scenario content into CSV metadata.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace frplan
