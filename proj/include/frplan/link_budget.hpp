#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/numeric.hpp"

namespace frplan {

/// Transmit-side configuration shared by all power evaluations.
struct LinkBudgetConfig {
    double tx_power_w = 1.0;
    ReflectorDims dims{};
    PlanarPoint tx{};
};

struct PowerSample {
    PlanarPoint location{};
    double power_w = 0.0;
    double power_dbm = 0.0; // -inf for exactly zero power; display floors live in the CSV layer
    double gain = 0.0;      // array-factor sum at this location
    bool feasible = true;   // same-side constraint held for every contributing pose
};

/// RCS of one plate towards r: sigma = sigma_max * eta * sinc^2(pi*L1n*delta).
/// Same-side violations report sigma = 0 with feasible = false instead of
/// throwing, because area scans legitimately cross feasibility boundaries.
struct RcsValue {
    double sigma = 0.0;
    bool feasible = true;
};

inline RcsValue rcs(const ReflectorDims& dims, PlanarPoint tx, ReflectorPose pose, PlanarPoint r) {
    if (!same_side(tx, pose, r)) return {0.0, false};
    const double eta = eta_factor(tx, pose, r);
    const double delta = projection_delta(tx, pose, r);
    const double af = sinc_sq(M_PI * dims.l1_norm() * delta);
    return {dims.sigma_max() * eta * af, true};
}

/// Distance-weighted reflection strength sigma / (d_t^2 d_r^2); this is the
/// per-reflector term summed by the receive-power model. Infeasible
/// geometry contributes zero.
struct PathGain {
    double value = 0.0; // [m^-2]
    bool feasible = true;
};

inline PathGain path_gain(PlanarPoint tx, ReflectorPose pose, PlanarPoint r, const ReflectorDims& dims) {
    const double dt = tx_distance(tx, pose.x);
    const double dr = rx_distance(pose.x, r);
    if (dt == 0.0 || dr == 0.0)
        throw Error(Errc::coincident_points, "zero path distance in path_gain");
    const RcsValue s = rcs(dims, tx, pose, r);
    return {s.sigma / (dt * dt * dr * dr), s.feasible};
}

/// Expected receive power at r for a set of poses: the random per-path
/// phases are i.i.d., so the expectation of the coherent sum reduces to the
/// incoherent sum of per-path powers.
inline double receive_power_w(const LinkBudgetConfig& cfg, std::span<const ReflectorPose> poses,
                              PlanarPoint r) {
    const double k = cfg.tx_power_w * cfg.dims.wavelength * cfg.dims.wavelength /
                     std::pow(4.0 * M_PI, 3);
    double sum = 0.0;
    for (const ReflectorPose& p : poses) sum += path_gain(cfg.tx, p, r, cfg.dims).value;
    return k * sum;
}

inline double watts_to_dbm(double p_watts) {
    if (!(p_watts > 0.0)) throw Error(Errc::nonpositive_power, "dBm conversion needs positive power");
    return 10.0 * std::log10(p_watts * 1e3);
}

inline double dbm_to_watts(double p_dbm) {
    return std::pow(10.0, p_dbm / 10.0) * 1e-3;
}

/// Monte-Carlo estimate of E|sum_m sqrt(P_m) e^{j phi_m}|^2 with i.i.d.
/// uniform phases. Diagnostic companion to receive_power_w: the estimate
/// converges to the plain sum of the P_m.
inline double mc_incoherent_power(std::span<const double> path_powers_w, std::uint64_t seed,
                                  int draws) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
        double re = 0.0;
        double im = 0.0;
        for (double p : path_powers_w) {
            const double phi = phase(rng);
            const double amp = std::sqrt(p);
            re += amp * std::cos(phi);
            im += amp * std::sin(phi);
        }
        acc += re * re + im * im;
    }
    return acc / draws;
}

} // namespace frplan
