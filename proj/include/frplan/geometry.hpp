#pragma once

#include <cmath>
#include <cstddef>

#include "frplan/errors.hpp"

namespace frplan {

/// 2D vector / point, double precision. The scene lives in the z = 0 plane:
/// transmitter, receivers and reflector centers all have zero z-component,
/// so the third coordinate is dropped throughout.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product; sign gives orientation.
    constexpr double cross(Vec2 r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
};

using PlanarPoint = Vec2;

/// One reflector: center (x, 0) on the x-axis and 1D rotation angle omega.
/// Admissible rotations are omega in (-pi/2, pi/2); outside that range the
/// plate faces away from the half-plane holding the Tx and the targets.
struct ReflectorPose {
    double x = 0.0;     // center x-coordinate [m]
    double omega = 0.0; // rotation angle [rad]
};

/// Plate dimensions. l1 is the edge lying in the rotation plane, l2 the
/// transverse edge; both in meters, along with the carrier wavelength.
struct ReflectorDims {
    double l1 = 0.0;
    double l2 = 0.0;
    double wavelength = 0.0;

    double l1_norm() const { return l1 / wavelength; } // edge length in wavelengths
    double sigma_max() const {
        return 4.0 * M_PI * l1 * l1 * l2 * l2 / (wavelength * wavelength);
    }
    void validate() const {
        if (!(l1 > 0.0) || !(l2 > 0.0) || !(wavelength > 0.0))
            throw Error(Errc::invalid_parameter, "reflector dimensions and wavelength must be positive");
    }
};

/// Rectangular coverage area on the x-y plane, axis-aligned.
struct TargetArea {
    PlanarPoint center{};
    double dx = 0.0; // extent along x [m]
    double dy = 0.0; // extent along y [m]

    PlanarPoint upper_left() const { return {center.x - dx / 2.0, center.y + dy / 2.0}; }
    PlanarPoint lower_left() const { return {center.x - dx / 2.0, center.y - dy / 2.0}; }
    PlanarPoint upper_right() const { return {center.x + dx / 2.0, center.y + dy / 2.0}; }
    PlanarPoint lower_right() const { return {center.x + dx / 2.0, center.y - dy / 2.0}; }

    void validate() const {
        if (!(dx > 0.0) || !(dy > 0.0))
            throw Error(Errc::invalid_parameter, "target area extents must be positive");
    }
};

/// Unit edge direction u and unit normal n of a plate rotated by omega.
struct RotationBasis {
    Vec2 u; // along the plate edge
    Vec2 n; // plate normal
};

inline RotationBasis rotation_basis(double omega) {
    const double c = std::cos(omega);
    const double s = std::sin(omega);
    return {{c, s}, {-s, c}};
}

inline double tx_distance(PlanarPoint tx, double x) {
    return std::hypot(x - tx.x, tx.y);
}

inline double rx_distance(double x, PlanarPoint r) {
    return std::hypot(r.x - x, r.y);
}

/// Unit vector from the Tx towards the reflector center (x, 0).
inline Vec2 incident_vector(PlanarPoint tx, double x) {
    const double d = tx_distance(tx, x);
    if (d == 0.0) throw Error(Errc::coincident_points, "Tx coincides with the reflector center");
    return {(x - tx.x) / d, -tx.y / d};
}

/// Unit vector from the reflector center (x, 0) towards the receive point r.
inline Vec2 reflection_vector(double x, PlanarPoint r) {
    const double d = rx_distance(x, r);
    if (d == 0.0) throw Error(Errc::coincident_points, "receive point coincides with the reflector center");
    return {(r.x - x) / d, r.y / d};
}

/// Projection of the deflection vector (a_r - a_t) onto the plate edge.
/// Bounded by |delta| <= ||a_r - a_t|| <= 2; zero exactly at specular
/// geometry. This is the argument that drives the array factor.
inline double projection_delta(PlanarPoint tx, ReflectorPose pose, PlanarPoint r) {
    const Vec2 at = incident_vector(tx, pose.x);
    const Vec2 ar = reflection_vector(pose.x, r);
    return (ar - at).dot(rotation_basis(pose.omega).u);
}

/// Effective-aperture factor in [0, 1]: squared projection of the reflected
/// direction onto the plate normal. Reduces to y_r^2/d_r^2 at omega = 0 and
/// to cos^2(theta_r - omega) in general. The transmit side does not enter;
/// the parameter stays for symmetry with the sibling reflection operations.
inline double eta_factor([[maybe_unused]] PlanarPoint tx, ReflectorPose pose, PlanarPoint r) {
    const Vec2 ar = reflection_vector(pose.x, r);
    const double c = ar.dot(rotation_basis(pose.omega).n);
    return c * c;
}

/// Effective-reflection feasibility: Tx and receive point must lie on the
/// same side of the plate. Strict inequality; edge-on geometry (zero
/// product) counts as infeasible.
inline bool same_side(PlanarPoint tx, ReflectorPose pose, PlanarPoint r) {
    const Vec2 n = rotation_basis(pose.omega).n;
    const Vec2 at = incident_vector(tx, pose.x);
    const Vec2 ar = reflection_vector(pose.x, r);
    return at.dot(n) * ar.dot(n) < 0.0;
}

/// Incidence/reflection angles measured from the upward (+y) normal:
/// sin(theta_t) = (x - x_t)/d_t, sin(theta_r) = (x_r - x)/d_r. Both lie in
/// (-pi/2, pi/2) whenever the endpoint is strictly below the axis.
inline double incidence_angle(PlanarPoint tx, double x) {
    return std::atan2(x - tx.x, -tx.y);
}

inline double reflection_angle(double x, PlanarPoint r) {
    return std::atan2(r.x - x, -r.y);
}

/// Regular sampling of a TargetArea. The point count per axis is
/// floor(extent/step) + 1 (minimum 2), with the spacing stretched so the
/// first and last samples land exactly on the area boundary; all four
/// corners are always grid points.
struct AreaGrid {
    double x0 = 0.0;
    double y0 = 0.0;
    double step_x = 0.0;
    double step_y = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;

    std::size_t size() const { return nx * ny; }
    /// Row-major with x fastest: index = j*nx + i.
    PlanarPoint at(std::size_t i, std::size_t j) const {
        return {x0 + static_cast<double>(i) * step_x, y0 + static_cast<double>(j) * step_y};
    }
};

inline AreaGrid make_area_grid(const TargetArea& area, double step) {
    area.validate();
    if (!(step > 0.0)) throw Error(Errc::invalid_parameter, "grid step must be positive");
    AreaGrid g;
    g.nx = static_cast<std::size_t>(std::floor(area.dx / step)) + 1;
    g.ny = static_cast<std::size_t>(std::floor(area.dy / step)) + 1;
    if (g.nx < 2) g.nx = 2;
    if (g.ny < 2) g.ny = 2;
    g.x0 = area.center.x - area.dx / 2.0;
    g.y0 = area.center.y - area.dy / 2.0;
    g.step_x = area.dx / static_cast<double>(g.nx - 1);
    g.step_y = area.dy / static_cast<double>(g.ny - 1);
    return g;
}

/// Endpoints of the plate segment for a pose (half-length l1/2 along u).
struct Segment {
    PlanarPoint a;
    PlanarPoint b;
};

inline Segment reflector_segment(ReflectorPose pose, double l1) {
    const Vec2 u = rotation_basis(pose.omega).u;
    const PlanarPoint c{pose.x, 0.0};
    return {c - u * (l1 / 2.0), c + u * (l1 / 2.0)};
}

/// Proper (interior-crossing) segment intersection. Touching endpoints or
/// collinear overlap do not count; `eps` absorbs the orientation noise of
/// nearly tangent configurations.
inline bool segments_properly_intersect(const Segment& s, const Segment& t, double eps = 1e-9) {
    const Vec2 d1 = s.b - s.a;
    const Vec2 d2 = t.b - t.a;
    const double o1 = d1.cross(t.a - s.a);
    const double o2 = d1.cross(t.b - s.a);
    const double o3 = d2.cross(s.a - t.a);
    const double o4 = d2.cross(s.b - t.a);
    const double scale1 = d1.norm() * std::max((t.a - s.a).norm(), (t.b - s.a).norm());
    const double scale2 = d2.norm() * std::max((s.a - t.a).norm(), (s.b - t.a).norm());
    const double e1 = eps * std::max(1.0, scale1);
    const double e2 = eps * std::max(1.0, scale2);
    return (o1 > e1) != (o2 > e1) && (o1 < -e1) != (o2 < -e1) &&
           (o3 > e2) != (o4 > e2) && (o3 < -e2) != (o4 < -e2);
}

} // namespace frplan
