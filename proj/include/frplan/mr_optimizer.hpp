#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/link_budget.hpp"
#include "frplan/numeric.hpp"

namespace frplan {

// ---------------------------------------------------------------------------
// Single target, closed forms
// ---------------------------------------------------------------------------

/// Specular reflection point for an electrically large plate at omega = 0:
/// the placement where the incidence and reflection angles coincide
/// (sin(theta_t) = sin(theta_r)), which zeroes the deflection projection.
inline double specular_placement(PlanarPoint tx, PlanarPoint r) {
    if (tx.y * r.y <= 0.0 || tx.y + r.y == 0.0)
        throw Error(Errc::degenerate_geometry,
                    "specular placement needs Tx and Rx strictly on one side of the reflector axis");
    return tx.x + tx.y * (r.x - tx.x) / (tx.y + r.y);
}

/// Electrically small plate: the array factor is flat, so the placement
/// minimizes the concatenated path loss d_t^2 * d_r^4. Critical points are
/// the real roots of a cubic; the root with the smallest objective wins,
/// ties to the smaller x.
inline double small_reflector_placement(PlanarPoint tx, PlanarPoint r) {
    const double rr = r.x * r.x + r.y * r.y;
    const double tt = tx.x * tx.x + tx.y * tx.y;
    const double b = -(5.0 * tx.x + 4.0 * r.x);
    const double c = rr + 2.0 * tt + 6.0 * r.x * tx.x;
    const double d = -(rr * tx.x + 2.0 * tt * r.x);
    const std::vector<double> roots = cubic_real_roots(3.0, b, c, d);

    auto objective = [&](double x) {
        const double dt2 = (x - tx.x) * (x - tx.x) + tx.y * tx.y;
        const double dr2 = (r.x - x) * (r.x - x) + r.y * r.y;
        return dt2 * dr2 * dr2;
    };
    double best_x = roots.front();
    double best_f = objective(best_x);
    for (double x : roots) {
        const double f = objective(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    return best_x;
}

// ---------------------------------------------------------------------------
// Placement solves on the monotone projection
// ---------------------------------------------------------------------------

/// Solve delta(x; r) = target for the placement x. The projection is
/// strictly decreasing in x (derivative -y_r^2/d_r^3 - y_t^2/d_t^3), so a
/// bracket grown outward from the specular point always pins the root.
inline double solve_placement_for_delta(PlanarPoint tx, PlanarPoint r, double target) {
    if (!(std::abs(target) < 2.0))
        throw Error(Errc::no_solution, "projection targets are confined to (-2, 2)");
    const double x_spec = specular_placement(tx, r);
    if (target == 0.0) return x_spec;
    auto f = [&](double x) { return projection_delta(tx, {x, 0.0}, r) - target; };
    const double scale = std::max(1.0, 0.01 * (std::abs(tx.y) + std::abs(r.y)));
    double span = scale;
    if (target > 0.0) {
        // root lies left of the specular point
        double lo = x_spec - span;
        for (int it = 0; f(lo) < 0.0; ++it) {
            if (it > 60) throw Error(Errc::no_solution, "no placement reaches the requested projection");
            span *= 2.0;
            lo = x_spec - span;
        }
        return bisect(f, lo, x_spec);
    }
    double hi = x_spec + span;
    for (int it = 0; f(hi) > 0.0; ++it) {
        if (it > 60) throw Error(Errc::no_solution, "no placement reaches the requested projection");
        span *= 2.0;
        hi = x_spec + span;
    }
    return bisect(f, x_spec, hi);
}

/// Main-lobe placement interval for a single target: x_br and x_bl solve
/// delta(x) = +1/(2 L1n) and -1/(2 L1n). The specular point sits strictly
/// between them.
struct MainLobeInterval {
    double x_br = 0.0; // right-endpoint placement (delta = +1/(2 L1n))
    double x_bl = 0.0; // left-endpoint placement  (delta = -1/(2 L1n))
};

inline MainLobeInterval main_lobe_interval(PlanarPoint tx, PlanarPoint r, const ReflectorDims& dims) {
    dims.validate();
    const double thr = 1.0 / (2.0 * dims.l1_norm());
    return {solve_placement_for_delta(tx, r, thr), solve_placement_for_delta(tx, r, -thr)};
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

/// Area locations anchoring one reflector's main lobe: delta = -1/(2 L1n)
/// at `left`, +1/(2 L1n) at `right`. For the final reflector of a
/// sequential plan `left` is the lower-left corner it absorbed.
struct LobePair {
    PlanarPoint left{};
    PlanarPoint right{};
};

struct PlacementSolution {
    std::vector<ReflectorPose> poses;
    /// Single-target solutions: sum of path gains sigma/(d_t^2 d_r^2) at the
    /// target. Area solutions: worst-case array-factor metric over the area.
    double worst_case_metric = 0.0;
    std::vector<LobePair> lobes; // empty for single-target solutions
};

/// Pack reflectors around the specular point so every deployed plate keeps
/// the target inside its beamforming main lobe, spaced exactly l1 apart.
inline PlacementSolution multi_mr_single_target(PlanarPoint tx, PlanarPoint r,
                                                const ReflectorDims& dims, int m_max) {
    if (m_max < 1) throw Error(Errc::invalid_parameter, "reflector budget must be at least 1");
    const double x_star = specular_placement(tx, r);
    const MainLobeInterval lobe = main_lobe_interval(tx, r, dims);
    const double l1 = dims.l1;
    const auto left_slots = static_cast<std::int64_t>(std::floor((x_star - lobe.x_br) / l1));
    const auto right_slots = static_cast<std::int64_t>(std::floor((lobe.x_bl - x_star) / l1));
    const std::int64_t count = left_slots + right_slots + 1;

    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (std::int64_t m = 1; m <= count; ++m)
        xs.push_back(x_star - static_cast<double>(left_slots) * l1 + static_cast<double>(m - 1) * l1);

    if (count > m_max) {
        // keep the positions closest to the specular point, ties to smaller x
        std::sort(xs.begin(), xs.end(), [&](double a, double b) {
            const double da = std::abs(a - x_star);
            const double db = std::abs(b - x_star);
            return da != db ? da < db : a < b;
        });
        xs.resize(static_cast<std::size_t>(m_max));
        std::sort(xs.begin(), xs.end());
    }

    PlacementSolution sol;
    double metric = 0.0;
    for (double x : xs) {
        sol.poses.push_back({x, 0.0});
        metric += path_gain(tx, {x, 0.0}, r, dims).value;
    }
    sol.worst_case_metric = metric;
    return sol;
}

// ---------------------------------------------------------------------------
// Area coverage
// ---------------------------------------------------------------------------

struct DeltaExtrema {
    double min_delta = 0.0;
    double max_delta = 0.0;
    PlanarPoint argmin{};
    PlanarPoint argmax{};
};

/// Extreme projection values over the area, sampled on a regular grid that
/// always contains the four corners (where the omega = 0 extrema live).
inline DeltaExtrema delta_extrema_area(double x, double omega, PlanarPoint tx,
                                       const TargetArea& area, double grid_step) {
    const AreaGrid grid = make_area_grid(area, grid_step);
    const Vec2 at = incident_vector(tx, x);
    const Vec2 u = rotation_basis(omega).u;
    DeltaExtrema ext;
    bool first = true;
    for (std::size_t j = 0; j < grid.ny; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const PlanarPoint r = grid.at(i, j);
            const double delta = (reflection_vector(x, r) - at).dot(u);
            if (first || delta < ext.min_delta) {
                ext.min_delta = delta;
                ext.argmin = r;
            }
            if (first || delta > ext.max_delta) {
                ext.max_delta = delta;
                ext.argmax = r;
            }
            first = false;
        }
    }
    return ext;
}

/// Minimum of sinc^2(pi*L1n*delta) over a projection interval. Zero when a
/// sinc null +-z/L1n (z >= 1) falls inside; otherwise the minimum sits at
/// one of the interval endpoints. delta = 0 is the peak, not a null.
inline double min_sinc2_over_interval(double delta_min, double delta_max, double l1_norm) {
    const auto k_lo = static_cast<std::int64_t>(std::ceil(delta_min * l1_norm));
    const auto k_hi = static_cast<std::int64_t>(std::floor(delta_max * l1_norm));
    const bool has_nonzero_integer = k_lo <= k_hi && !(k_lo == 0 && k_hi == 0);
    if (has_nonzero_integer) return 0.0;
    return std::min(sinc_sq(M_PI * l1_norm * delta_min), sinc_sq(M_PI * l1_norm * delta_max));
}

inline double worst_case_array_factor(double x, PlanarPoint tx, const TargetArea& area,
                                      const ReflectorDims& dims, double grid_step = 0.5) {
    const DeltaExtrema ext = delta_extrema_area(x, 0.0, tx, area, grid_step);
    return min_sinc2_over_interval(ext.min_delta, ext.max_delta, dims.l1_norm());
}

/// Single-plate placement for area coverage: scan the reduced interval
/// bounded by the specular placements towards the lower-left and
/// upper-right corners, maximizing the worst-case array factor. Ties break
/// to the smallest placement.
inline PlacementSolution single_mr_area_placement(PlanarPoint tx, const TargetArea& area,
                                                  const ReflectorDims& dims, double search_step,
                                                  double grid_step = 0.5) {
    dims.validate();
    const double x_lower = specular_placement(tx, area.lower_left());
    const double x_upper = specular_placement(tx, area.upper_right());
    if (!(x_lower < x_upper))
        throw Error(Errc::empty_search_region, "area placement search region is empty");

    double best_x = x_lower;
    double best_v = -1.0;
    for (double x : scan_grid(x_lower, x_upper, search_step)) {
        const double v = worst_case_array_factor(x, tx, area, dims, grid_step);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    const DeltaExtrema ext = delta_extrema_area(best_x, 0.0, tx, area, grid_step);
    PlacementSolution sol;
    sol.poses.push_back({best_x, 0.0});
    sol.worst_case_metric = best_v;
    sol.lobes.push_back({ext.argmin, ext.argmax});
    return sol;
}

/// Left main-lobe endpoint of a plate at `pose`: the boundary location where
/// delta = -thr, exiting either through the top edge (upper-left corner not
/// yet covered) or the left edge. Other exit configurations are outside the
/// planner's case split and raise a diagnostic.
inline PlanarPoint solve_left_lobe_endpoint(PlanarPoint tx, ReflectorPose pose,
                                            const TargetArea& area, double thr) {
    const PlanarPoint ul = area.upper_left();
    const PlanarPoint ll = area.lower_left();
    const double d_ul = projection_delta(tx, pose, ul);
    const double d_ll = projection_delta(tx, pose, ll);

    if (d_ul < -thr) {
        // exit through the top edge: solve for the x-coordinate
        const double y_top = area.center.y + area.dy / 2.0;
        auto f = [&](double xr) { return projection_delta(tx, pose, {xr, y_top}) + thr; };
        const double x_left = area.center.x - area.dx / 2.0;
        const double x_right = area.center.x + area.dx / 2.0;
        if (!(f(x_left) < 0.0 && f(x_right) > 0.0))
            throw Error(Errc::unhandled_geometry, "top-edge lobe endpoint bracket failed");
        return {bisect(f, x_left, x_right), y_top};
    }
    if (d_ll < -thr) {
        // upper-left corner already inside the lobe: exit through the left edge
        const double x_left = area.center.x - area.dx / 2.0;
        auto f = [&](double yr) { return projection_delta(tx, pose, {x_left, yr}) + thr; };
        const double y_bot = area.center.y - area.dy / 2.0;
        const double y_top = area.center.y + area.dy / 2.0;
        if (!(f(y_bot) < 0.0 && f(y_top) >= 0.0))
            throw Error(Errc::unhandled_geometry, "left-edge lobe endpoint bracket failed");
        return {x_left, bisect(f, y_bot, y_top)};
    }
    throw Error(Errc::unhandled_geometry,
                "lower-left corner inside the lobe; no left endpoint to solve");
}

struct SequentialOptions {
    double metric_grid_step = 1.0; // grid used for the worst-case gain metric
};

/// Sequential multi-plate placement for area coverage. Lobes are chained
/// right-to-left: each plate is placed so the previous lobe's left endpoint
/// becomes its own right endpoint, until the lower-left corner is covered.
inline PlacementSolution sequential_mr_area_placement(PlanarPoint tx, const TargetArea& area,
                                                      const ReflectorDims& dims,
                                                      const SequentialOptions& opt = {}) {
    dims.validate();
    area.validate();
    if (!(tx.y < 0.0) || !(area.center.y + area.dy / 2.0 < 0.0))
        throw Error(Errc::degenerate_geometry, "Tx and target area must lie below the reflector axis");
    const double l1n = dims.l1_norm();
    const double thr = 1.0 / (2.0 * l1n);
    if (!(thr < 2.0))
        throw Error(Errc::no_solution, "plate too small for main-lobe planning");

    const int cap = 10 * static_cast<int>(std::ceil(area.dx / dims.l1));
    PlacementSolution sol;
    PlanarPoint r_right = area.upper_right();
    const PlanarPoint r_ll = area.lower_left();

    for (int m = 0;; ++m) {
        if (m >= cap)
            throw Error(Errc::non_convergence, "sequential placement did not cover the area");
        const double x_m = solve_placement_for_delta(tx, r_right, thr);
        if (!sol.poses.empty() && std::abs(sol.poses.back().x - x_m) < dims.l1 - 1e-9)
            throw Error(Errc::spacing_infeasible,
                        "consecutive placements closer than the plate length");
        sol.poses.push_back({x_m, 0.0});

        const double d_ll = projection_delta(tx, {x_m, 0.0}, r_ll);
        if (std::abs(d_ll) <= thr) {
            sol.lobes.push_back({r_ll, r_right});
            break;
        }
        const PlanarPoint r_left = solve_left_lobe_endpoint(tx, {x_m, 0.0}, area, thr);
        sol.lobes.push_back({r_left, r_right});
        r_right = r_left;
    }

    // worst-case reflection gain over the sampled area
    const AreaGrid grid = make_area_grid(area, opt.metric_grid_step);
    double worst = 0.0;
    bool first = true;
    for (std::size_t j = 0; j < grid.ny; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const PlanarPoint r = grid.at(i, j);
            double gain = 0.0;
            for (const ReflectorPose& p : sol.poses)
                gain += sinc_sq(M_PI * l1n * projection_delta(tx, p, r));
            if (first || gain < worst) worst = gain;
            first = false;
        }
    }
    sol.worst_case_metric = worst;
    return sol;
}

} // namespace frplan
