#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/mr_optimizer.hpp"
#include "frplan/numeric.hpp"

namespace frplan {

// ---------------------------------------------------------------------------
// Rotation closed form and reduced objective
// ---------------------------------------------------------------------------

/// Rotation that zeroes the deflection projection at placement x: the plate
/// edge turns perpendicular to a_r - a_t, which points the specular
/// direction at r while keeping the same-side constraint satisfied.
inline double optimal_rotation(PlanarPoint tx, double x, PlanarPoint r) {
    const Vec2 v = reflection_vector(x, r) - incident_vector(tx, x);
    if (v.norm() < 1e-12)
        throw Error(Errc::degenerate_geometry, "deflection vector vanished; no rotation aligns the plate");
    return std::atan(-v.x / v.y);
}

/// Reflection strength at the optimal rotation, with sigma_max factored
/// out: ||a_r - a_t||^2 / (4 d_t^2 d_r^2). Equals path_gain at
/// (x, optimal_rotation(x)) divided by sigma_max.
inline double reduced_fr_objective(PlanarPoint tx, double x, PlanarPoint r) {
    const double dt = tx_distance(tx, x);
    const double dr = rx_distance(x, r);
    if (dt == 0.0 || dr == 0.0)
        throw Error(Errc::coincident_points, "zero path distance in reduced objective");
    const Vec2 v = reflection_vector(x, r) - incident_vector(tx, x);
    return v.dot(v) / (4.0 * dt * dt * dr * dr);
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Default placement search interval for a single target. The optimum can
/// sit near the Tx rather than between Tx and Rx, so the hull of the two
/// x-coordinates is padded by twice the Tx depth on both sides.
inline Interval default_fr_search_interval(PlanarPoint tx, PlanarPoint r) {
    const double pad = 2.0 * std::abs(tx.y);
    return {std::min(tx.x, r.x) - pad, std::max(tx.x, r.x) + pad};
}

/// Joint placement and rotation for a single target: grid argmax of the
/// reduced objective, rotation from the closed form. Ties break to the
/// smaller placement.
inline ReflectorPose fr_single_target(PlanarPoint tx, PlanarPoint r, Interval search,
                                      double search_step) {
    double best_x = 0.0;
    double best_f = -1.0;
    for (double x : scan_grid(search.lo, search.hi, search_step)) {
        const double f = reduced_fr_objective(tx, x, r);
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }
    return {best_x, optimal_rotation(tx, best_x, r)};
}

// ---------------------------------------------------------------------------
// Anti-blockage spacing
// ---------------------------------------------------------------------------

/// Minimum center spacing between adjacent plates so that neither occludes
/// the other's incident or reflected rays, from the worst-case neighbor
/// orientation. d_incident guards the path from the Tx, d_reflect the path
/// towards the receiver; the binding one is their maximum.
struct BlockageDistances {
    double d_incident = 0.0;
    double d_reflect = 0.0;
    double d_min = 0.0;
};

inline BlockageDistances blockage_min_distance(const ReflectorDims& dims, double theta_t,
                                               double theta_r, double omega) {
    const double ct = std::cos(theta_t);
    const double cr = std::cos(theta_r);
    const double cw = std::cos(omega);
    if (ct <= 1e-6 || cr <= 1e-6 || cw <= 1e-6)
        throw Error(Errc::grazing_angle, "blockage distance undefined at grazing angles");
    const double half = dims.l1 / 2.0;
    BlockageDistances d;
    d.d_incident = half * (cw - std::tan(theta_t) * std::sin(omega) + 1.0 / ct);
    d.d_reflect = half * (cw + std::tan(theta_r) * std::sin(omega) + 1.0 / cr);
    d.d_min = std::max(d.d_incident, d.d_reflect);
    return d;
}

/// True when `blocker` cuts any sampled ray from the Tx to the face of
/// `target`. Sampled rays include both endpoints.
inline bool plate_blocks_incident(const Segment& blocker, PlanarPoint tx, const Segment& target,
                                  int samples = 9) {
    for (int k = 0; k < samples; ++k) {
        const double t = samples == 1 ? 0.5 : static_cast<double>(k) / (samples - 1);
        const PlanarPoint p = target.a + (target.b - target.a) * t;
        if (segments_properly_intersect({tx, p}, blocker)) return true;
    }
    return false;
}

/// True when `blocker` cuts any sampled ray from the face of `source`
/// towards the receive point r.
inline bool plate_blocks_reflected(const Segment& blocker, const Segment& source, PlanarPoint r,
                                   int samples = 9) {
    for (int k = 0; k < samples; ++k) {
        const double t = samples == 1 ? 0.5 : static_cast<double>(k) / (samples - 1);
        const PlanarPoint p = source.a + (source.b - source.a) * t;
        if (segments_properly_intersect({p, r}, blocker)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

struct FrPlan {
    std::vector<ReflectorPose> poses;
    /// Per-step (x_minus, x_plus) bookkeeping: the next available candidate
    /// on each side of the seed (single target) or of the running chain
    /// (area planning).
    std::vector<std::pair<double, double>> side_markers;
    /// Per-pose main-lobe anchor locations; empty for single-target plans.
    std::vector<LobePair> lobe_anchors;
    /// Per-pose count of sampled area locations violating the same-side
    /// constraint. Violations are reported, not fatal: the affected pose
    /// simply contributes nothing there.
    std::vector<int> infeasible_samples;
};

namespace detail {

/// One anti-blockage step outward from x. The step s satisfies
/// s = max(d(x), d(x + dir*s)) (fixed point), so the spacing clears the
/// worst-case distance evaluated at both ends of the gap.
template <class DistFn>
double blockage_step(DistFn&& dist_at, double x, int dir) {
    double s = dist_at(x);
    for (int it = 0; it < 50; ++it) {
        const double s_next = std::max(dist_at(x), dist_at(x + dir * s));
        if (std::abs(s_next - s) < 1e-12) return s_next;
        s = s_next;
    }
    return s;
}

} // namespace detail

/// Multi-plate single-target design: ladder candidates outward from the
/// single-plate optimum with anti-blockage steps, score them all with the
/// reduced objective, and keep the m best (ties to the smaller x).
inline FrPlan multi_fr_single_target(PlanarPoint tx, PlanarPoint r, const ReflectorDims& dims,
                                     int m, double search_step = 0.05) {
    if (m < 1) throw Error(Errc::invalid_parameter, "reflector count must be at least 1");
    dims.validate();
    const ReflectorPose seed = fr_single_target(tx, r, default_fr_search_interval(tx, r), search_step);

    auto dist_at = [&](double x) {
        return blockage_min_distance(dims, incidence_angle(tx, x), reflection_angle(x, r),
                                     optimal_rotation(tx, x, r))
            .d_min;
    };

    const int per_side = (m + 2) / 2; // ceil((m+1)/2)
    std::vector<double> plus_ladder{seed.x};
    std::vector<double> minus_ladder{seed.x};
    for (int i = 1; i < per_side; ++i)
        plus_ladder.push_back(plus_ladder.back() +
                              detail::blockage_step(dist_at, plus_ladder.back(), +1));
    for (int j = 1; j < per_side; ++j)
        minus_ladder.push_back(minus_ladder.back() -
                               detail::blockage_step(dist_at, minus_ladder.back(), -1));

    FrPlan plan;
    for (int k = 0; k < per_side; ++k) plan.side_markers.emplace_back(minus_ladder[k], plus_ladder[k]);

    std::vector<double> candidates = plus_ladder;
    candidates.insert(candidates.end(), minus_ladder.begin() + 1, minus_ladder.end());

    std::sort(candidates.begin(), candidates.end(), [&](double a, double b) {
        const double fa = reduced_fr_objective(tx, a, r);
        const double fb = reduced_fr_objective(tx, b, r);
        return fa != fb ? fa > fb : a < b;
    });
    candidates.resize(static_cast<std::size_t>(m));
    std::sort(candidates.begin(), candidates.end());

    for (double x : candidates) plan.poses.push_back({x, optimal_rotation(tx, x, r)});

    // final pass: the deployed plates must not occlude each other's paths
    for (std::size_t i = 0; i + 1 < plan.poses.size(); ++i) {
        const Segment a = reflector_segment(plan.poses[i], dims.l1);
        const Segment b = reflector_segment(plan.poses[i + 1], dims.l1);
        if (plate_blocks_incident(a, tx, b) || plate_blocks_incident(b, tx, a) ||
            plate_blocks_reflected(a, b, r) || plate_blocks_reflected(b, a, r))
            throw Error(Errc::spacing_infeasible, "candidate ladder produced mutually blocking plates");
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Area coverage
// ---------------------------------------------------------------------------

/// Rotation balancing the array factor across the area for a plate at x:
/// the two locations with extreme projections at omega = 0 end up with
/// opposite projections of equal magnitude.
inline double balanced_area_rotation(PlanarPoint tx, double x, const TargetArea& area,
                                     double grid_step = 0.5) {
    const DeltaExtrema ext = delta_extrema_area(x, 0.0, tx, area, grid_step);
    const Vec2 at = incident_vector(tx, x);
    const Vec2 v = reflection_vector(x, ext.argmax) + reflection_vector(x, ext.argmin) - at * 2.0;
    if (v.norm() < 1e-12)
        throw Error(Errc::degenerate_geometry, "balance vector vanished; rotation undetermined");
    return std::atan(-v.x / v.y);
}

/// Single-plate area design: scan placements, give each its balanced
/// rotation, score by the worst-case array factor over the rotated
/// projection range. Candidates whose pose violates the same-side
/// constraint at any area corner are skipped. Worst-case ties break by the
/// reduced single-target strength towards the area center, then smaller x.
inline ReflectorPose single_fr_area(PlanarPoint tx, const TargetArea& area, const ReflectorDims& dims,
                                    Interval search, double search_step, double grid_step = 0.5) {
    dims.validate();
    area.validate();
    const double l1n = dims.l1_norm();
    bool found = false;
    double best_x = 0.0;
    double best_omega = 0.0;
    double best_wc = -1.0;
    double best_tie = 0.0;

    const PlanarPoint corners[4] = {area.upper_left(), area.lower_left(), area.upper_right(),
                                    area.lower_right()};
    for (double x : scan_grid(search.lo, search.hi, search_step)) {
        const double omega = balanced_area_rotation(tx, x, area, grid_step);
        const ReflectorPose pose{x, omega};
        bool feasible = true;
        for (const PlanarPoint& c : corners) {
            if (!same_side(tx, pose, c)) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;
        const DeltaExtrema ext = delta_extrema_area(x, omega, tx, area, grid_step);
        const double wc = min_sinc2_over_interval(ext.min_delta, ext.max_delta, l1n);
        const double tie = reduced_fr_objective(tx, x, area.center);
        if (!found || wc > best_wc || (wc == best_wc && tie > best_tie)) {
            found = true;
            best_x = x;
            best_omega = omega;
            best_wc = wc;
            best_tie = tie;
        }
    }
    if (!found)
        throw Error(Errc::no_solution, "no same-side feasible placement in the search interval");
    return {best_x, best_omega};
}

/// Solve delta(x, omega; r) = target for the rotation. At the aiming
/// rotation the projection is zero and strictly decreasing in omega, so
/// positive targets bracket to the left, negative to the right.
inline double solve_rotation_for_delta(PlanarPoint tx, double x, PlanarPoint r, double target) {
    const double omega_aim = optimal_rotation(tx, x, r);
    if (target == 0.0) return omega_aim;
    auto f = [&](double w) { return projection_delta(tx, {x, w}, r) - target; };
    const double half_pi = M_PI / 2.0;
    const int dir = target > 0.0 ? -1 : +1;
    double span = 0.05;
    double far = omega_aim + dir * span;
    // expand away from the aim until the far end crosses the target side
    // (f > 0 when searching left, f < 0 when searching right)
    for (int it = 0; dir * f(far) > 0.0; ++it) {
        if (it > 40 || std::abs(far) >= half_pi)
            throw Error(Errc::no_solution, "no admissible rotation reaches the requested projection");
        span *= 2.0;
        far = omega_aim + dir * span;
    }
    const double root = dir < 0 ? bisect(f, far, omega_aim) : bisect(f, omega_aim, far);
    if (!(std::abs(root) < half_pi))
        throw Error(Errc::no_solution, "rotation solution fell outside the admissible range");
    return root;
}

struct FrSequentialOptions {
    double search_step = 0.05;          // grid for the first-plate path-loss argmin
    double feasibility_grid_step = 5.0; // sampling for the same-side report
};

/// Concatenated path loss d_t^2(x) * d_r^2(x; r), the placement score used
/// when chaining plates across the area.
inline double concatenated_path_loss(PlanarPoint tx, double x, PlanarPoint r) {
    const double dt = tx_distance(tx, x);
    const double dr = rx_distance(x, r);
    return dt * dt * dr * dr;
}

/// Sequential joint placement and rotation for area coverage. The first
/// plate sits at the path-loss argmin towards the upper-right corner; each
/// subsequent plate goes to whichever side candidate (spaced by the
/// anti-blockage distance) sees its new anchor with less path loss, and its
/// rotation pins the anchor to the right edge of the main lobe. Stops when
/// the lower-left corner is inside a lobe.
inline FrPlan sequential_fr_area(PlanarPoint tx, const TargetArea& area, const ReflectorDims& dims,
                                 const FrSequentialOptions& opt = {}) {
    dims.validate();
    area.validate();
    if (!(tx.y < 0.0) || !(area.center.y + area.dy / 2.0 < 0.0))
        throw Error(Errc::degenerate_geometry, "Tx and target area must lie below the reflector axis");
    const double thr = 1.0 / (2.0 * dims.l1_norm());
    if (!(thr < 2.0))
        throw Error(Errc::no_solution, "plate too small for main-lobe planning");

    PlanarPoint r_right = area.upper_right();
    const PlanarPoint r_ll = area.lower_left();

    // first placement: path-loss argmin over the Tx/anchor hull
    double x_cur = 0.0;
    {
        double best_f = 0.0;
        bool first = true;
        const double lo = std::min(tx.x, r_right.x);
        const double hi = std::max(tx.x, r_right.x);
        for (double x : scan_grid(lo, hi, opt.search_step)) {
            const double f = concatenated_path_loss(tx, x, r_right);
            if (first || f < best_f) {
                best_f = f;
                x_cur = x;
                first = false;
            }
        }
    }

    const int cap = 10 * static_cast<int>(std::ceil(area.dx / dims.l1));
    FrPlan plan;
    double x_minus = 0.0;
    double x_plus = 0.0;
    bool last_was_minus = false;

    for (int m = 0;; ++m) {
        if (m >= cap)
            throw Error(Errc::non_convergence, "sequential placement did not cover the area");
        const double omega = solve_rotation_for_delta(tx, x_cur, r_right, thr);
        const ReflectorPose pose{x_cur, omega};
        plan.poses.push_back(pose);

        const double d_ll = projection_delta(tx, pose, r_ll);
        if (std::abs(d_ll) <= thr) {
            plan.lobe_anchors.push_back({r_ll, r_right});
            break;
        }
        const PlanarPoint r_left = solve_left_lobe_endpoint(tx, pose, area, thr);
        plan.lobe_anchors.push_back({r_left, r_right});

        const double d_cur = blockage_min_distance(dims, incidence_angle(tx, x_cur),
                                                   reflection_angle(x_cur, r_right), omega)
                                 .d_min;
        if (m == 0) {
            x_minus = x_cur - d_cur;
            x_plus = x_cur + d_cur;
        } else if (last_was_minus) {
            x_minus = x_cur - d_cur;
        } else {
            x_plus = x_cur + d_cur;
        }
        plan.side_markers.emplace_back(x_minus, x_plus);

        r_right = r_left;
        if (concatenated_path_loss(tx, x_minus, r_right) <=
            concatenated_path_loss(tx, x_plus, r_right)) {
            x_cur = x_minus;
            last_was_minus = true;
        } else {
            x_cur = x_plus;
            last_was_minus = false;
        }
    }

    // feasibility report: count sampled locations each pose cannot serve
    const AreaGrid grid = make_area_grid(area, opt.feasibility_grid_step);
    plan.infeasible_samples.assign(plan.poses.size(), 0);
    for (std::size_t p = 0; p < plan.poses.size(); ++p)
        for (std::size_t j = 0; j < grid.ny; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i)
                if (!same_side(tx, plan.poses[p], grid.at(i, j))) ++plan.infeasible_samples[p];
    return plan;
}

} // namespace frplan
