#include "doctest.h"

#include <cmath>

#include "hexspine/hexagon.hpp"

using namespace hexspine;

namespace {

// Independent construction: walk the boundary with turning angles.
// Starting at the origin heading along +X, each side has length L and at
// each corner we turn left by pi minus the inner angle.
std::array<Point, 6> walk_hexagon(double eps) {
    const double L = std::acosh(1.0 + 1.0 / std::sin(eps));
    std::array<Point, 6> out;
    Isometry frame;
    for (int p = 0; p < 6; ++p) {
        out[p] = frame.apply(Point::origin());
        const double inner = (p + 1) % 2 == 0 ? eps : kPi - eps;
        frame = frame * Isometry::translation(Geodesic(Point::origin(), Vec3{1, 0, 0}), L) *
                Isometry::rotation(Point::origin(), kPi - inner);
    }
    return out;
}

} // namespace

TEST_CASE("right-angled hexagon") {
    const HexagonGeometry h = build_hexagon(kPi / 2);
    CHECK(h.side_length == doctest::Approx(std::acosh(2.0)).epsilon(1e-12));
    CHECK(h.side_length == doctest::Approx(1.316958).epsilon(1e-6));
    for (double a : h.measured_angles()) CHECK(a == doctest::Approx(kPi / 2).epsilon(1e-10));
}

TEST_CASE("hexagon invariants across eps") {
    for (double eps : {0.05, 0.3, 1.0, kPi / 2, 2.2, 3.0}) {
        const HexagonGeometry h = build_hexagon(eps);
        CHECK(std::cosh(h.side_length) == doctest::Approx(1.0 + 1.0 / std::sin(eps)).epsilon(1e-12));
        const auto sides = h.measured_sides();
        const auto angles = h.measured_angles();
        for (int p = 0; p < 6; ++p) {
            CHECK(std::abs(sides[p] - h.side_length) <= 1e-10 * std::max(1.0, h.side_length));
            CHECK(std::abs(angles[p] - h.inner_angles[p]) <= 1e-10);
            CHECK(h.colours[p] != h.colours[(p + 1) % 6]);
            CHECK(h.vertices[p].hyperboloid_residual() <= 1e-10);
        }
        // angle from a red side line to the next blue side line at their shared vertex
        for (int p = 0; p < 6; p += 2) {
            const Point& v = h.vertices[(p + 1) % 6];
            CHECK(angle_at(h.sides[p], h.sides[p + 1], v, 1e-8).value == doctest::Approx(kPi - h.inner_angles[p + 1]).epsilon(1e-9));
        }
        // centroid lies inside every side
        for (int p = 0; p < 6; ++p) CHECK(mdot(h.center.v, h.inward_normals[p]) > 0);
    }
    CHECK_THROWS_AS(build_hexagon(0.0), Error);
    CHECK_THROWS_AS(build_hexagon(kPi), Error);
}

TEST_CASE("vertex construction agrees with the closed form") {
    const double eps = 0.3;
    const auto walked = walk_hexagon(eps);
    // the walk closes up iff the closed form is right
    const HexagonGeometry h = build_hexagon(eps);
    for (int p = 0; p < 6; ++p) {
        CHECK(distance(walked[p], walked[(p + 1) % 6]) == doctest::Approx(h.side_length).epsilon(1e-10));
    }
    // the walked polygon closes: distance from last vertex to first is L
    CHECK(std::abs(distance(walked[5], walked[0]) - h.side_length) <= 1e-10);
    // and it is congruent: both diagonals match
    CHECK(std::abs(distance(walked[0], walked[3]) - distance(h.vertices[1], h.vertices[4])) <= 1e-9);
}

TEST_CASE("side length is minimal at pi/2") {
    double prev = INFINITY;
    for (int i = 1; i <= 50; ++i) {
        const double L = hexagon_side_length(kPi / 2 * i / 50.0);
        CHECK(L < prev);
        prev = L;
    }
    for (int i = 1; i < 50; ++i) {
        const double L = hexagon_side_length(kPi / 2 + kPi / 2 * i / 50.0);
        CHECK(L > prev);
        prev = L;
    }
}

TEST_CASE("Saccheri diagonal at pi/2") {
    const double Lp = saccheri_diagonal();
    const double L = hexagon_side_length(kPi / 2);
    CHECK(std::abs(std::cosh(Lp) - 5.0) <= 1e-12);
    CHECK(std::abs(std::cosh(2 * L) - 7.0) <= 1e-12);
    CHECK(Lp < 2 * L);
    CHECK(saccheri_diagonal_measured(build_hexagon(kPi / 2)) == doctest::Approx(Lp).epsilon(1e-10));
    CHECK_THROWS_AS(saccheri_diagonal(1.0), Error);
}

TEST_CASE("side midpoints") {
    for (double eps : {kPi / 2, 0.7}) {
        const HexagonGeometry h = build_hexagon(eps);
        const auto mids = side_midpoints(h);
        for (int p = 0; p < 6; ++p) {
            CHECK(std::abs(distance(mids[p], h.vertices[p]) - h.side_length / 2) <= 1e-10);
            CHECK(std::abs(h.sides[p].incidence(mids[p])) <= 1e-10);
        }
        // rotation by 2 pi / 3 about the center permutes midpoints p -> p + 2
        const Isometry rot = Isometry::rotation(h.center, 2 * kPi / 3);
        for (int p = 0; p < 6; ++p) CHECK(distance(rot.apply(mids[p]), mids[(p + 2) % 6]) <= 1e-9);
        if (eps == kPi / 2) {
            for (int p = 1; p < 6; ++p)
                CHECK(std::abs(distance(h.center, mids[p]) - distance(h.center, mids[0])) <= 1e-10);
        }
    }
}
