#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "frplan/fr_optimizer.hpp"
#include "frplan/geometry.hpp"
#include "frplan/link_budget.hpp"
#include "frplan/mr_optimizer.hpp"

namespace frplan {

/// Receive power and array-factor gain sampled over a target area.
/// Samples are row-major with x fastest: index = j*nx + i, rows ordered by
/// ascending y.
struct CoverageField {
    TargetArea area{};
    double step = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<PowerSample> samples;
};

inline PowerSample evaluate_sample(const LinkBudgetConfig& cfg, std::span<const ReflectorPose> poses,
                                   PlanarPoint r) {
    PowerSample s;
    s.location = r;
    const double k = cfg.tx_power_w * cfg.dims.wavelength * cfg.dims.wavelength /
                     std::pow(4.0 * M_PI, 3);
    const double l1n = cfg.dims.l1_norm();
    double gain_sum = 0.0;
    double f_sum = 0.0;
    for (const ReflectorPose& p : poses) {
        gain_sum += sinc_sq(M_PI * l1n * projection_delta(cfg.tx, p, r));
        const PathGain g = path_gain(cfg.tx, p, r, cfg.dims);
        f_sum += g.value;
        if (!g.feasible) s.feasible = false;
    }
    s.gain = gain_sum;
    s.power_w = k * f_sum;
    s.power_dbm = s.power_w > 0.0 ? watts_to_dbm(s.power_w)
                                  : -std::numeric_limits<double>::infinity();
    return s;
}

/// Pointwise field evaluation; embarrassingly parallel and deterministic
/// regardless of the thread count.
inline CoverageField evaluate_field(const LinkBudgetConfig& cfg,
                                    std::span<const ReflectorPose> poses, const TargetArea& area,
                                    double step, unsigned threads = 1) {
    const AreaGrid grid = make_area_grid(area, step);
    CoverageField field;
    field.area = area;
    field.step = step;
    field.nx = grid.nx;
    field.ny = grid.ny;
    field.samples.resize(grid.size());

    auto run_rows = [&](std::size_t j_begin, std::size_t j_end) {
        for (std::size_t j = j_begin; j < j_end; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i)
                field.samples[j * grid.nx + i] = evaluate_sample(cfg, poses, grid.at(i, j));
    };

    if (threads <= 1 || grid.ny < 2) {
        run_rows(0, grid.ny);
        return field;
    }
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(grid.ny));
    std::vector<std::future<void>> work;
    const std::size_t chunk = (grid.ny + n - 1) / n;
    for (unsigned t = 0; t < n; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min<std::size_t>(grid.ny, lo + chunk);
        if (lo >= hi) break;
        work.push_back(std::async(std::launch::async, run_rows, lo, hi));
    }
    for (auto& w : work) w.get();
    return field;
}

/// Worst sample of a field; ties keep the first in scan order.
inline PowerSample min_power(const CoverageField& field) {
    if (field.samples.empty()) throw Error(Errc::invalid_parameter, "empty coverage field");
    const PowerSample* best = &field.samples.front();
    for (const PowerSample& s : field.samples)
        if (s.power_w < best->power_w) best = &s;
    return *best;
}

/// Sorted empirical distribution of the field's receive power. Probability
/// convention i/N; dBm values floor at the -130 dBm presentation limit.
inline double dbm_presentation(double power_w, double floor_dbm = -130.0) {
    if (!(power_w > 0.0)) return floor_dbm;
    return std::max(floor_dbm, watts_to_dbm(power_w));
}

inline std::vector<std::pair<double, double>> empirical_cdf(const CoverageField& field) {
    if (field.samples.empty()) throw Error(Errc::invalid_parameter, "empty coverage field");
    std::vector<double> watts;
    watts.reserve(field.samples.size());
    for (const PowerSample& s : field.samples) watts.push_back(s.power_w);
    std::sort(watts.begin(), watts.end());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(watts.size());
    const double n = static_cast<double>(watts.size());
    for (std::size_t i = 0; i < watts.size(); ++i)
        cdf.emplace_back(dbm_presentation(watts[i]), static_cast<double>(i + 1) / n);
    return cdf;
}

/// Lower median of the raw per-sample powers (watts).
inline double median_power_w(const CoverageField& field) {
    if (field.samples.empty()) throw Error(Errc::invalid_parameter, "empty coverage field");
    std::vector<double> watts;
    watts.reserve(field.samples.size());
    for (const PowerSample& s : field.samples) watts.push_back(s.power_w);
    std::sort(watts.begin(), watts.end());
    return watts[(watts.size() - 1) / 2];
}

/// Exact worst-case receive power over the continuous area for a single
/// plate. When a sinc null falls inside the area's projection range the
/// minimum is exactly zero; otherwise the minimum is taken over the grid.
inline double min_area_power_single_pose(const LinkBudgetConfig& cfg, ReflectorPose pose,
                                         const TargetArea& area, double grid_step) {
    const DeltaExtrema ext = delta_extrema_area(pose.x, pose.omega, cfg.tx, area, grid_step);
    if (min_sinc2_over_interval(ext.min_delta, ext.max_delta, cfg.dims.l1_norm()) == 0.0)
        return 0.0;
    const ReflectorPose poses[1] = {pose};
    return min_power(evaluate_field(cfg, poses, area, grid_step)).power_w;
}

// ---------------------------------------------------------------------------
// Benchmark schemes
// ---------------------------------------------------------------------------

enum class SchemeKind {
    fpr,               // fixed position, no rotation
    fprr,              // fixed position, rotation only
    equal_spacing_mr,  // M plates uniformly spaced, no rotation
    equal_spacing_fr,  // M plates uniformly spaced, chained rotations
    movable_region_mr, // placement constrained to a region around the anchor
    movable_region_fr, // placement + rotation constrained to the region
};

struct BenchmarkScheme {
    SchemeKind kind = SchemeKind::fpr;
    std::optional<double> fixed_x; // fpr/fprr and region anchor; defaults per target kind
    double region_size = 0.0;      // movable_region_* only
    int count = 1;                 // equal_spacing_* only
};

/// Everything a benchmark needs to know about the scenario. Exactly one of
/// `point` / `area` must be set.
struct ScenarioContext {
    PlanarPoint tx{};
    ReflectorDims dims{};
    std::optional<PlanarPoint> point;
    std::optional<TargetArea> area;
    double search_step = 0.05;
    double grid_step = 0.5;
};

namespace detail {

inline double benchmark_anchor(const BenchmarkScheme& s, const ScenarioContext& ctx) {
    if (s.fixed_x) return *s.fixed_x;
    // single target: plate parked at the Tx; area: above the midpoint
    // between the Tx and the area center
    if (ctx.point) return ctx.tx.x;
    return (ctx.tx.x + ctx.area->center.x) / 2.0;
}

inline double rotation_for_fixed(const ScenarioContext& ctx, double x) {
    if (ctx.point) return optimal_rotation(ctx.tx, x, *ctx.point);
    return balanced_area_rotation(ctx.tx, x, *ctx.area, ctx.grid_step);
}

/// Chained rotations for equally spaced plates, mirroring the sequential
/// area planner: process plates right to left, each pinning the running
/// anchor to its main-lobe right edge. Plates that cannot reach the anchor
/// fall back to aiming straight at it.
inline std::vector<ReflectorPose> equal_spacing_fr_poses(const ScenarioContext& ctx,
                                                         std::vector<double> xs) {
    const TargetArea& area = *ctx.area;
    const double thr = 1.0 / (2.0 * ctx.dims.l1_norm());
    std::sort(xs.begin(), xs.end(), std::greater<>());
    PlanarPoint anchor = area.upper_right();
    const PlanarPoint r_ll = area.lower_left();
    std::vector<ReflectorPose> poses;
    for (double x : xs) {
        double omega;
        try {
            omega = solve_rotation_for_delta(ctx.tx, x, anchor, thr);
        } catch (const Error&) {
            omega = optimal_rotation(ctx.tx, x, anchor);
        }
        const ReflectorPose pose{x, omega};
        poses.push_back(pose);
        if (std::abs(projection_delta(ctx.tx, pose, r_ll)) <= thr) {
            anchor = r_ll;
            continue;
        }
        try {
            anchor = solve_left_lobe_endpoint(ctx.tx, pose, area, thr);
        } catch (const Error&) {
            // lobe left the area through an unhandled edge; keep the anchor
        }
    }
    std::sort(poses.begin(), poses.end(),
              [](const ReflectorPose& a, const ReflectorPose& b) { return a.x < b.x; });
    return poses;
}

inline std::vector<ReflectorPose> movable_region_poses(const BenchmarkScheme& s,
                                                       const ScenarioContext& ctx, bool rotatable) {
    const double anchor = benchmark_anchor(s, ctx);
    if (s.region_size < 0.0)
        throw Error(Errc::invalid_parameter, "movable region size must be nonnegative");
    const double lo = anchor - s.region_size / 2.0;
    const double hi = anchor + s.region_size / 2.0;
    const std::vector<double> grid = anchored_grid(anchor, lo, hi, ctx.search_step);
    if (grid.empty()) throw Error(Errc::empty_search_region, "movable region grid is empty");

    if (ctx.point) {
        const PlanarPoint r = *ctx.point;
        double best_x = grid.front();
        double best_f = -1.0;
        for (double x : grid) {
            const double f = rotatable
                                 ? reduced_fr_objective(ctx.tx, x, r) * ctx.dims.sigma_max()
                                 : path_gain(ctx.tx, {x, 0.0}, r, ctx.dims).value;
            if (f > best_f) {
                best_f = f;
                best_x = x;
            }
        }
        const double omega = rotatable ? optimal_rotation(ctx.tx, best_x, r) : 0.0;
        return {{best_x, omega}};
    }

    const TargetArea& area = *ctx.area;
    double best_x = grid.front();
    double best_omega = 0.0;
    double best_wc = -1.0;
    for (double x : grid) {
        const double omega = rotatable ? balanced_area_rotation(ctx.tx, x, area, ctx.grid_step) : 0.0;
        const DeltaExtrema ext = delta_extrema_area(x, omega, ctx.tx, area, ctx.grid_step);
        const double wc = min_sinc2_over_interval(ext.min_delta, ext.max_delta, ctx.dims.l1_norm());
        if (wc > best_wc) {
            best_wc = wc;
            best_x = x;
            best_omega = omega;
        }
    }
    return {{best_x, best_omega}};
}

} // namespace detail

/// Reflector poses realizing one benchmark scheme against the scenario.
inline std::vector<ReflectorPose> benchmark_poses(const BenchmarkScheme& scheme,
                                                  const ScenarioContext& ctx) {
    if (ctx.point.has_value() == ctx.area.has_value())
        throw Error(Errc::invalid_parameter, "scenario context needs exactly one of point/area");

    switch (scheme.kind) {
        case SchemeKind::fpr:
            return {{detail::benchmark_anchor(scheme, ctx), 0.0}};
        case SchemeKind::fprr: {
            const double x = detail::benchmark_anchor(scheme, ctx);
            return {{x, detail::rotation_for_fixed(ctx, x)}};
        }
        case SchemeKind::equal_spacing_mr:
        case SchemeKind::equal_spacing_fr: {
            if (!ctx.area)
                throw Error(Errc::invalid_parameter, "equal-spacing benchmarks need an area target");
            if (scheme.count < 1)
                throw Error(Errc::invalid_parameter, "equal-spacing benchmarks need count >= 1");
            const double lo = ctx.tx.x;
            const double hi = ctx.area->center.x + ctx.area->dx / 2.0;
            std::vector<double> xs;
            if (scheme.count == 1) {
                xs.push_back(lo);
            } else {
                const double spacing = (hi - lo) / (scheme.count - 1);
                for (int k = 0; k < scheme.count; ++k) xs.push_back(lo + k * spacing);
            }
            if (scheme.kind == SchemeKind::equal_spacing_mr) {
                std::vector<ReflectorPose> poses;
                for (double x : xs) poses.push_back({x, 0.0});
                return poses;
            }
            return detail::equal_spacing_fr_poses(ctx, std::move(xs));
        }
        case SchemeKind::movable_region_mr:
            return detail::movable_region_poses(scheme, ctx, false);
        case SchemeKind::movable_region_fr:
            return detail::movable_region_poses(scheme, ctx, true);
    }
    throw Error(Errc::invalid_parameter, "unknown benchmark scheme");
}

} // namespace frplan
