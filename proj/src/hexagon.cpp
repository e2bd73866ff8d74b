#include "hexspine/hexagon.hpp"

#include <cmath>

namespace hexspine {

const char* to_string(Colour c) { return c == Colour::red ? "red" : "blue"; }

double hexagon_side_length(double eps) {
    if (!(eps > 0.0 && eps < kPi)) throw Error(ErrorKind::OutOfRange, "eps must lie in (0, pi)");
    return std::acosh(1.0 + 1.0 / std::sin(eps));
}

HexagonGeometry build_hexagon(double eps) {
    const double L = hexagon_side_length(eps);

    // Six triangles around the center with angles eps/2 (at eps-vertices),
    // (pi - eps)/2 (at the others) and pi/3 at the center.
    const TriangleSpec spec{std::nullopt, std::nullopt, std::nullopt, 0.5 * eps, 0.5 * (kPi - eps), kPi / 3};
    const Triangle t = solve_triangle(spec);
    // side b is opposite the (pi - eps)/2 corner: center to the eps-vertex
    const double r_eps = t.b;
    const double r_bar = t.a;

    HexagonGeometry h;
    h.eps = eps;
    h.side_length = L;
    h.center = Point::origin();
    for (int p = 0; p < 6; ++p) {
        const double r = (p % 2 == 0) ? r_eps : r_bar;
        h.vertices[p] = Point::polar(r, p * kPi / 3.0);
        h.colours[p] = HexagonGeometry::colour_at(p);
        h.inner_angles[p] = (p % 2 == 0) ? eps : kPi - eps;
    }
    for (int p = 0; p < 6; ++p) {
        h.sides[p] = Geodesic::through(h.vertices[p], h.vertices[(p + 1) % 6]);
        // anticlockwise boundary: the interior is on the left, where <x, n> > 0
        h.inward_normals[p] = normalize_spacelike(h.sides[p].normal());
    }
    return h;
}

std::array<double, 6> HexagonGeometry::measured_sides() const {
    std::array<double, 6> out{};
    for (int p = 0; p < 6; ++p) out[p] = distance(vertices[p], vertices[(p + 1) % 6]);
    return out;
}

std::array<double, 6> HexagonGeometry::measured_angles() const {
    std::array<double, 6> out{};
    for (int p = 0; p < 6; ++p) {
        const Point& v = vertices[p];
        const Vec3 out_dir = tangent_towards(v, vertices[(p + 1) % 6]);
        const Vec3 back_dir = tangent_towards(v, vertices[(p + 5) % 6]);
        double a = oriented_angle(v, out_dir, back_dir);
        if (a < 0) a += 2 * kPi;
        out[p] = a;
    }
    return out;
}

double saccheri_diagonal(double eps) {
    if (std::abs(eps - kPi / 2) > 1e-12) throw Error(ErrorKind::OutOfRange, "Saccheri diagonal is defined at pi/2 only");
    const double L = hexagon_side_length(eps);
    // Lambert split with legs L and base L: sinh(L'/2) = cosh(L) sinh(L/2)
    return 2.0 * std::asinh(std::cosh(L) * std::sinh(0.5 * L));
}

double saccheri_diagonal_measured(const HexagonGeometry& h) {
    // sides 0, 1, 2 consecutive; the diagonal joins vertex 0 and vertex 3
    return distance(h.vertices[0], h.vertices[3]);
}

std::array<Point, 6> side_midpoints(const HexagonGeometry& h) {
    std::array<Point, 6> out;
    for (int p = 0; p < 6; ++p) out[p] = midpoint(h.vertices[p], h.vertices[(p + 1) % 6]);
    return out;
}

} // namespace hexspine
