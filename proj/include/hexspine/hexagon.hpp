#pragma once

#include <array>

#include "hexspine/hplane.hpp"

namespace hexspine {

enum class Colour { red, blue };
const char* to_string(Colour c);

/// Side length L of the equilateral hexagon with alternating angles eps, pi - eps:
/// cosh L = 1 + 1 / sin(eps).
double hexagon_side_length(double eps);

/// The deformed hexagon, realised around the origin. Side p (p = 0..5, decoration
/// index p + 1) runs from vertex p to vertex p + 1 anticlockwise. Even positions
/// are red, odd positions blue, and the angle between a red line and a blue line
/// at any vertex, measured anticlockwise from red to blue, is eps. Consequently
/// the inner angle is eps at even vertices and pi - eps at odd ones.
struct HexagonGeometry {
    double eps = kPi / 2;
    double side_length = 0.0;
    Point center;
    std::array<Point, 6> vertices;
    std::array<Geodesic, 6> sides{Geodesic(Point{}, Vec3{1, 0, 0}), Geodesic(Point{}, Vec3{1, 0, 0}),
                                  Geodesic(Point{}, Vec3{1, 0, 0}), Geodesic(Point{}, Vec3{1, 0, 0}),
                                  Geodesic(Point{}, Vec3{1, 0, 0}), Geodesic(Point{}, Vec3{1, 0, 0})};
    /// Unit normals of the side lines, positive on the hexagon side.
    std::array<Vec3, 6> inward_normals;
    std::array<Colour, 6> colours{};
    std::array<double, 6> inner_angles{};

    static Colour colour_at(int pos) { return pos % 2 == 0 ? Colour::red : Colour::blue; }
    /// Measured side lengths and inner angles from the vertex coordinates.
    std::array<double, 6> measured_sides() const;
    std::array<double, 6> measured_angles() const;
};

HexagonGeometry build_hexagon(double eps);

/// Diagonal of the Saccheri quadrilateral spanned by three consecutive sides of
/// the right-angled hexagon (the only case supported).
double saccheri_diagonal(double eps = kPi / 2);
/// Same diagonal measured on the vertex realisation.
double saccheri_diagonal_measured(const HexagonGeometry& h);

std::array<Point, 6> side_midpoints(const HexagonGeometry& h);

} // namespace hexspine
