#include <gtest/gtest.h>

#include <cmath>

#include "frplan/geometry.hpp"
#include "test_util.hpp"

using namespace frplan;
using frplan::testing::Rng;
using frplan::testing::random_scene;

TEST(RotationBasis, CardinalAngles) {
    const RotationBasis id = rotation_basis(0.0);
    EXPECT_DOUBLE_EQ(id.u.x, 1.0);
    EXPECT_DOUBLE_EQ(id.u.y, 0.0);
    EXPECT_DOUBLE_EQ(id.n.x, 0.0);
    EXPECT_DOUBLE_EQ(id.n.y, 1.0);

    const RotationBasis quarter = rotation_basis(M_PI / 2.0);
    EXPECT_NEAR(quarter.u.x, 0.0, 1e-15);
    EXPECT_NEAR(quarter.u.y, 1.0, 1e-15);
    EXPECT_NEAR(quarter.n.x, -1.0, 1e-15);
    EXPECT_NEAR(quarter.n.y, 0.0, 1e-15);
}

TEST(RotationBasis, UnitAndOrthogonalEverywhere) {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double omega = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
        const RotationBasis b = rotation_basis(omega);
        EXPECT_NEAR(b.u.norm(), 1.0, 1e-12);
        EXPECT_NEAR(b.n.norm(), 1.0, 1e-12);
        EXPECT_NEAR(b.u.dot(b.n), 0.0, 1e-12);
    }
    const RotationBasis b = rotation_basis(0.3);
    EXPECT_NEAR(b.u.norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.u.dot(b.n), 0.0, 1e-12);
}

TEST(IncidentVector, KnownGeometries) {
    const PlanarPoint tx{0.0, -50.0};
    const Vec2 below = incident_vector(tx, 0.0);
    EXPECT_DOUBLE_EQ(below.x, 0.0);
    EXPECT_DOUBLE_EQ(below.y, 1.0);
    EXPECT_DOUBLE_EQ(tx_distance(tx, 0.0), 50.0);

    const Vec2 diag = incident_vector(tx, 50.0);
    EXPECT_NEAR(diag.x, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(diag.y, 1.0 / std::sqrt(2.0), 1e-15);

    const Vec2 v = incident_vector(tx, 25.0);
    EXPECT_NEAR(v.x, 0.4472, 1e-4);
    EXPECT_NEAR(v.y, 0.8944, 1e-4);
}

TEST(IncidentVector, CoincidentTxThrows) {
    EXPECT_THROW(incident_vector({25.0, 0.0}, 25.0), Error);
    try {
        incident_vector({25.0, 0.0}, 25.0);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::coincident_points);
    }
}

TEST(ReflectionVector, KnownGeometries) {
    const PlanarPoint r{100.0, -150.0};
    const Vec2 below = reflection_vector(100.0, r);
    EXPECT_DOUBLE_EQ(below.x, 0.0);
    EXPECT_DOUBLE_EQ(below.y, -1.0);
    EXPECT_DOUBLE_EQ(rx_distance(100.0, r), 150.0);

    const Vec2 v = reflection_vector(25.0, r);
    const double n = std::hypot(75.0, 150.0);
    EXPECT_NEAR(v.x, 75.0 / n, 1e-15);
    EXPECT_NEAR(v.y, -150.0 / n, 1e-15);

    for (double a : {1.0, 5.0, 100.0}) {
        const double x = 40.0;
        const Vec2 diag = reflection_vector(x, {x + a, -a});
        EXPECT_NEAR(diag.x, 1.0 / std::sqrt(2.0), 1e-15);
        EXPECT_NEAR(diag.y, -1.0 / std::sqrt(2.0), 1e-15);
    }
    EXPECT_THROW(reflection_vector(7.0, {7.0, 0.0}), Error);
}

TEST(ProjectionDelta, SpecularPointIsZero) {
    const PlanarPoint tx{0.0, -50.0};
    const PlanarPoint r{100.0, -150.0};
    EXPECT_NEAR(projection_delta(tx, {25.0, 0.0}, r), 0.0, 1e-9);
    // sin(theta_t) = sin(theta_r) at the specular point
    const Vec2 at = incident_vector(tx, 25.0);
    const Vec2 ar = reflection_vector(25.0, r);
    EXPECT_NEAR(at.x, ar.x, 1e-12);
}

TEST(ProjectionDelta, EdgeAlignedWithTxIsReflectedX) {
    const PlanarPoint tx{0.0, -50.0};
    const PlanarPoint r{100.0, -150.0};
    // at x = x_t the incident vector is straight up, so delta is the
    // x-component of the reflection vector
    const double expected = 100.0 / std::sqrt(100.0 * 100.0 + 150.0 * 150.0);
    EXPECT_NEAR(projection_delta(tx, {0.0, 0.0}, r), expected, 1e-12);
    EXPECT_NEAR(expected, 0.5547, 1e-4);
}

TEST(ProjectionDelta, OrthogonalEdgeGivesZero) {
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        const auto s = random_scene(rng);
        const Vec2 v = reflection_vector(s.x, s.r) - incident_vector(s.tx, s.x);
        if (v.norm() < 1e-9) continue;
        // edge perpendicular to the deflection vector
        const double omega = std::atan2(-v.x, v.y);
        if (std::abs(omega) >= M_PI / 2.0) continue;
        EXPECT_NEAR(projection_delta(s.tx, {s.x, omega}, s.r), 0.0, 1e-12);
    }
}

TEST(ProjectionDelta, CauchySchwarzBound) {
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        const auto s = random_scene(rng);
        const double omega = rng.uniform(-1.5, 1.5);
        const double delta = projection_delta(s.tx, {s.x, omega}, s.r);
        const double defl = (reflection_vector(s.x, s.r) - incident_vector(s.tx, s.x)).norm();
        EXPECT_LE(std::abs(delta), defl + 1e-12);
        EXPECT_LE(defl, 2.0 + 1e-12);
    }
}

TEST(ProjectionDelta, MatchesScalarFormAtZeroRotation) {
    Rng rng(37);
    for (int i = 0; i < 2000; ++i) {
        const auto s = random_scene(rng);
        const double dt = tx_distance(s.tx, s.x);
        const double dr = rx_distance(s.x, s.r);
        const double scalar = (s.r.x - s.x) / dr - (s.x - s.tx.x) / dt;
        EXPECT_NEAR(projection_delta(s.tx, {s.x, 0.0}, s.r), scalar, 1e-12);
    }
}

TEST(EtaFactor, NormalReflectionIsOne) {
    for (double h : {1.0, 50.0, 300.0}) {
        const double x = 12.0;
        EXPECT_DOUBLE_EQ(eta_factor({0.0, -40.0}, {x, 0.0}, {x, -h}), 1.0);
    }
}

TEST(EtaFactor, SpecularExampleAndGrazing) {
    EXPECT_NEAR(eta_factor({0.0, -50.0}, {25.0, 0.0}, {100.0, -150.0}),
                150.0 * 150.0 / (75.0 * 75.0 + 150.0 * 150.0), 1e-9);
    // receive point on the plate's own line: reflected direction parallel
    // to the edge
    EXPECT_DOUBLE_EQ(eta_factor({0.0, -50.0}, {10.0, 0.0}, {17.0, 0.0}), 0.0);
}

TEST(EtaFactor, RangeAndZeroRotationSpecialization) {
    Rng rng(41);
    for (int i = 0; i < 2000; ++i) {
        const auto s = random_scene(rng);
        const double omega = rng.uniform(-1.5, 1.5);
        const double eta = eta_factor(s.tx, {s.x, omega}, s.r);
        EXPECT_GE(eta, 0.0);
        EXPECT_LE(eta, 1.0 + 1e-15);
        const double dr = rx_distance(s.x, s.r);
        EXPECT_NEAR(eta_factor(s.tx, {s.x, 0.0}, s.r), s.r.y * s.r.y / (dr * dr), 1e-12);
    }
}

TEST(SameSide, Examples) {
    EXPECT_TRUE(same_side({0.0, -50.0}, {25.0, 0.0}, {100.0, -150.0}));
    EXPECT_FALSE(same_side({0.0, -50.0}, {50.0, 0.0}, {100.0, 150.0}));
    // edge-on: receive point on the plate line makes the product exactly zero
    EXPECT_FALSE(same_side({0.0, -50.0}, {10.0, 0.0}, {17.0, 0.0}));
}

TEST(SameSide, InvariantUnderNormalFlip) {
    Rng rng(43);
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_scene(rng);
        const double omega = rng.uniform(-1.5, 1.5);
        const Vec2 n = rotation_basis(omega).n;
        const Vec2 at = incident_vector(s.tx, s.x);
        const Vec2 ar = reflection_vector(s.x, s.r);
        const double p = at.dot(n) * ar.dot(n);
        const Vec2 n_flip{-n.x, -n.y};
        const double p_flipped = at.dot(n_flip) * ar.dot(n_flip);
        EXPECT_DOUBLE_EQ(p, p_flipped);
        EXPECT_EQ(same_side(s.tx, {s.x, omega}, s.r), p < 0.0);
    }
}

TEST(AreaGrid, CountsAndCorners) {
    const TargetArea area{{100.0, -150.0}, 100.0, 50.0};
    const AreaGrid g = make_area_grid(area, 1.0);
    EXPECT_EQ(g.nx, 101u);
    EXPECT_EQ(g.ny, 51u);
    EXPECT_EQ(g.size(), 5151u);
    EXPECT_DOUBLE_EQ(g.at(0, 0).x, 50.0);
    EXPECT_DOUBLE_EQ(g.at(0, 0).y, -175.0);
    EXPECT_DOUBLE_EQ(g.at(g.nx - 1, g.ny - 1).x, 150.0);
    EXPECT_DOUBLE_EQ(g.at(g.nx - 1, g.ny - 1).y, -125.0);
}

TEST(Segments, ProperCrossingOnly) {
    const Segment a{{0.0, -1.0}, {0.0, 1.0}};
    const Segment crossing{{-1.0, 0.0}, {1.0, 0.0}};
    const Segment touching{{0.0, 1.0}, {2.0, 1.0}};
    const Segment apart{{1.0, 2.0}, {2.0, 2.0}};
    EXPECT_TRUE(segments_properly_intersect(a, crossing));
    EXPECT_FALSE(segments_properly_intersect(a, touching));
    EXPECT_FALSE(segments_properly_intersect(a, apart));
}
