#pragma once

// Hyperbolic plane kernel. Points live on the upper sheet of the hyperboloid
// X^2 + Y^2 - Z^2 = -1 with the Minkowski form <u,v> = u.x v.x + u.y v.y - u.z v.z.
// The upper half-plane chart maps i to (0,0,1), the x direction to +X and the
// y direction to +Y, so anticlockwise in the half-plane is anticlockwise here.

#include <array>
#include <optional>
#include <utility>

#include "hexspine/error.hpp"

namespace hexspine {

inline constexpr double kPi = 3.14159265358979323846;

double default_tolerance();
void set_default_tolerance(double tol);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

double mdot(const Vec3& a, const Vec3& b);
/// Minkowski cross product J (a x b); orthogonal to a and b for mdot.
Vec3 mcross(const Vec3& a, const Vec3& b);
/// Euclidean determinant with columns a, b, c.
double det3(const Vec3& a, const Vec3& b, const Vec3& c);
double euclid_norm(const Vec3& v);

/// Scales a spacelike vector to <v,v> = 1.
Vec3 normalize_spacelike(const Vec3& v);
/// Scales a timelike vector to <v,v> = -1 on the upper sheet.
Vec3 normalize_timelike(const Vec3& v);

struct Point {
    Vec3 v{0.0, 0.0, 1.0};

    static Point origin() { return Point{}; }
    static Point from_half_plane(double x, double y);
    /// Point at distance r from the origin in direction theta (anticlockwise from +X).
    static Point polar(double r, double theta);
    std::pair<double, double> to_half_plane() const;
    double hyperboloid_residual() const;
};

double distance(const Point& p, const Point& q);
Point midpoint(const Point& p, const Point& q);

/// Unit tangent at p pointing towards q.
Vec3 tangent_towards(const Point& p, const Point& q);
/// Tangent u rotated anticlockwise by theta inside the tangent plane at p.
Vec3 rotate_tangent(const Point& p, const Vec3& u, double theta);
/// Oriented angle in (-pi, pi] from tangent u to tangent v at p.
double oriented_angle(const Point& p, const Vec3& u, const Vec3& v);

/// Boundary point of the half-plane (finite x, or infinity) as a future null vector.
Vec3 ideal_from_half_plane(double x);
/// Inverse of ideal_from_half_plane; returns +inf for the point at infinity.
double ideal_to_half_plane(const Vec3& null_vec);

class Geodesic {
public:
    Geodesic(const Point& base, const Vec3& tangent);

    static Geodesic through(const Point& p, const Point& q);
    /// Oriented from the ideal point a towards the ideal point b (either may be +-inf).
    static Geodesic from_ideal(const Vec3& from, const Vec3& to);
    static Geodesic from_half_plane_endpoints(double from, double to);

    const Point& base() const { return base_; }
    const Vec3& tangent() const { return tangent_; }
    Point point_at(double s) const;
    Vec3 tangent_at(double s) const;
    /// Unit spacelike normal; the left side of the oriented line is where <x,n> > 0.
    Vec3 normal() const;
    Geodesic reversed() const { return Geodesic(base_, -tangent_); }
    Vec3 forward_ideal() const { return base_.v + tangent_; }
    Vec3 backward_ideal() const { return base_.v - tangent_; }
    /// Signed Minkowski residual <p, n>; sinh of the signed distance from the line.
    double incidence(const Point& p) const;
    /// Arclength parameter of the orthogonal projection of p.
    double parameter_of(const Point& p) const;

private:
    Point base_;
    Vec3 tangent_;
};

enum class IsometryKind { identity, elliptic, parabolic, hyperbolic };
const char* to_string(IsometryKind kind);

class Isometry {
public:
    using Mat = std::array<double, 9>;

    Isometry() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
    explicit Isometry(const Mat& m) : m_(m) {}

    static Isometry identity() { return Isometry(); }
    /// Orientation-preserving map sending the origin to p and +X to the unit tangent u.
    static Isometry frame(const Point& p, const Vec3& u);
    static Isometry frame(const Point& p, const Point& towards) { return frame(p, tangent_towards(p, towards)); }
    static Isometry reflection(const Geodesic& g);
    static Isometry translation(const Geodesic& g, double dist);
    static Isometry rotation(const Point& center, double angle);

    const Mat& matrix() const { return m_; }
    double operator()(int r, int c) const { return m_[3 * r + c]; }

    Isometry operator*(const Isometry& o) const;
    Vec3 apply(const Vec3& v) const;
    Point apply(const Point& p) const;
    Geodesic apply(const Geodesic& g) const;
    Isometry inverse() const;
    Isometry conjugated_by(const Isometry& t) const { return t * (*this) * t.inverse(); }

    double trace() const { return m_[0] + m_[4] + m_[8]; }
    double determinant() const;
    /// Unreliable for long products, whose determinant loses its sign to cancellation.
    bool preserves_orientation() const { return determinant() > 0.0; }
    /// max |M^T J M - J|
    double minkowski_residual() const;
    /// Minkowski Gram-Schmidt on the columns, starting from the timelike one.
    Isometry renormalized() const;
    double distance_from(const Isometry& o) const;

    IsometryKind classify(double tol = 1e-9) const;
    /// Translation length from trace = 1 + 2 cosh(l); zero unless hyperbolic.
    double translation_length(double tol = 1e-9) const;
    /// Oriented axis of a hyperbolic element, running towards the attracting fixed point.
    Geodesic axis() const;

private:
    Mat m_;
};

struct Angle {
    double value = kPi / 2;
    Angle complement() const { return Angle{kPi - value}; }
};

/// Angle at p measured anticlockwise from g1 to g2, in (0, pi).
Angle angle_at(const Geodesic& g1, const Geodesic& g2, const Point& p, double tol = default_tolerance());

/// Line through delta.point_at(s) at angle eps from delta.
Geodesic pencil_line(const Geodesic& delta, double s, double eps);

std::optional<Point> intersect(const Geodesic& a, const Geodesic& b);

/// Angle from deltap to the pencil line at their meeting point, if they meet.
std::optional<Angle> try_omega_at(const Geodesic& delta, const Geodesic& deltap, double s, double eps);
Angle omega_at(const Geodesic& delta, const Geodesic& deltap, double s, double eps);

/// Open interval of parameters s whose pencil line meets deltap (ultraparallel lines only).
std::pair<double, double> pencil_band(const Geodesic& delta, const Geodesic& deltap, double eps);

struct EpsilonEdge {
    Point start;       // P on delta
    Point end;         // Omega(P) on deltap
    double length = 0; // d(P, Omega(P))
    double parameter = 0;
    int iterations = 0;
};

EpsilonEdge epsilon_edge(const Geodesic& delta, const Geodesic& deltap, double eps);

struct Perpendicular {
    Point foot;       // on the first line
    Point foot_prime; // on the second line
    double length = 0;
};

Perpendicular common_perpendicular(const Geodesic& delta, const Geodesic& deltap);

/// Sides a, b, c are opposite the angles alpha, beta, gamma.
struct Triangle {
    double a = 0, b = 0, c = 0;
    double alpha = 0, beta = 0, gamma = 0;
};

struct TriangleSpec {
    std::optional<double> a, b, c;
    std::optional<double> alpha, beta, gamma;
};

/// Supports SSS, SAS, ASA and AAA data (any labelling).
Triangle solve_triangle(const TriangleSpec& spec);
/// Leg adjacent to `angle` in a right triangle with the given hypotenuse.
double right_triangle_adjacent_leg(double hypotenuse, double angle);

// log-space helpers for the small-angle regime
double log_cosh(double x);
double log_sinh(double x);
/// arcosh(y) given log(y), valid for y >= 1 without forming y.
double acosh_from_log(double log_y);

} // namespace hexspine
