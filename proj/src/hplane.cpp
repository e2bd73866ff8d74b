#include "hexspine/hplane.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

namespace hexspine {

namespace {

std::atomic<double> g_tolerance{1e-9};

double clamp_unit(double x) { return std::max(-1.0, std::min(1.0, x)); }

} // namespace

double default_tolerance() { return g_tolerance.load(); }

void set_default_tolerance(double tol) {
    if (!(tol >= 1e-14 && tol <= 1e-3))
        throw Error(ErrorKind::OutOfRange, "tolerance must lie in [1e-14, 1e-3]");
    g_tolerance.store(tol);
}

double mdot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

Vec3 mcross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, -(a.x * b.y - a.y * b.x)};
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a.x * (b.y * c.z - b.z * c.y) - b.x * (a.y * c.z - a.z * c.y) + c.x * (a.y * b.z - a.z * b.y);
}

double euclid_norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

Vec3 normalize_spacelike(const Vec3& v) {
    const double q = mdot(v, v);
    if (!(q > 0.0)) throw Error(ErrorKind::DomainError, "vector is not spacelike");
    return v * (1.0 / std::sqrt(q));
}

Vec3 normalize_timelike(const Vec3& v) {
    const double q = mdot(v, v);
    if (!(q < 0.0)) throw Error(ErrorKind::DomainError, "vector is not timelike");
    const double s = 1.0 / std::sqrt(-q);
    return v.z >= 0.0 ? v * s : v * (-s);
}

// ---------------------------------------------------------------- Point

Point Point::from_half_plane(double x, double y) {
    if (!(y > 0.0)) throw Error(ErrorKind::OutOfRange, "half-plane point needs y > 0");
    const double r2 = x * x + y * y;
    return Point{{x / y, (r2 - 1.0) / (2.0 * y), (r2 + 1.0) / (2.0 * y)}};
}

Point Point::polar(double r, double theta) {
    const double sh = std::sinh(r);
    return Point{{sh * std::cos(theta), sh * std::sin(theta), std::cosh(r)}};
}

std::pair<double, double> Point::to_half_plane() const {
    const double y = 1.0 / (v.z - v.y);
    return {v.x * y, y};
}

double Point::hyperboloid_residual() const { return std::abs(mdot(v, v) + 1.0); }

double distance(const Point& p, const Point& q) {
    // 4 sinh^2(d/2) = <p-q, p-q>; better conditioned than arcosh(-<p,q>).
    const Vec3 d = p.v - q.v;
    const double s = std::max(0.0, mdot(d, d));
    return 2.0 * std::asinh(0.5 * std::sqrt(s));
}

Point midpoint(const Point& p, const Point& q) { return Point{normalize_timelike(p.v + q.v)}; }

Vec3 tangent_towards(const Point& p, const Point& q) {
    const Vec3 u = q.v + p.v * mdot(p.v, q.v);
    return normalize_spacelike(u);
}

Vec3 rotate_tangent(const Point& p, const Vec3& u, double theta) {
    return u * std::cos(theta) + mcross(p.v, u) * std::sin(theta);
}

double oriented_angle(const Point& p, const Vec3& u, const Vec3& v) {
    return std::atan2(det3(p.v, u, v), mdot(u, v));
}

Vec3 ideal_from_half_plane(double x) {
    if (std::isinf(x)) return {0.0, 1.0, 1.0};
    return {x, 0.5 * (x * x - 1.0), 0.5 * (x * x + 1.0)};
}

double ideal_to_half_plane(const Vec3& q) {
    const double den = q.z - q.y;
    const double scale = std::max(std::abs(q.z), 1e-300);
    if (std::abs(den) <= 1e-14 * scale) return std::numeric_limits<double>::infinity();
    return q.x / den;
}

// ---------------------------------------------------------------- Geodesic

Geodesic::Geodesic(const Point& base, const Vec3& tangent) : base_(base), tangent_(tangent) {}

Geodesic Geodesic::through(const Point& p, const Point& q) {
    if (distance(p, q) <= 1e-15) throw Error(ErrorKind::Infeasible, "points coincide");
    return Geodesic(p, tangent_towards(p, q));
}

Geodesic Geodesic::from_ideal(const Vec3& from, const Vec3& to) {
    const double c = mdot(from, to);
    if (!(c < 0.0)) throw Error(ErrorKind::Infeasible, "ideal points coincide");
    const double s = 1.0 / std::sqrt(-2.0 * c);
    return Geodesic(Point{(from + to) * s}, (to - from) * s);
}

Geodesic Geodesic::from_half_plane_endpoints(double from, double to) {
    return from_ideal(ideal_from_half_plane(from), ideal_from_half_plane(to));
}

Point Geodesic::point_at(double s) const {
    return Point{base_.v * std::cosh(s) + tangent_ * std::sinh(s)};
}

Vec3 Geodesic::tangent_at(double s) const { return base_.v * std::sinh(s) + tangent_ * std::cosh(s); }

Vec3 Geodesic::normal() const { return mcross(base_.v, tangent_); }

double Geodesic::incidence(const Point& p) const { return mdot(p.v, normal()); }

double Geodesic::parameter_of(const Point& p) const {
    // p = cosh(r)(cosh s b + sinh s t) + sinh(r) n, so -<p, b -+ t> = cosh(r) e^{+-s}
    const double plus = -mdot(p.v, base_.v - tangent_);
    const double minus = -mdot(p.v, base_.v + tangent_);
    return 0.5 * std::log(plus / minus);
}

// ---------------------------------------------------------------- Isometry

const char* to_string(IsometryKind kind) {
    switch (kind) {
    case IsometryKind::identity: return "identity";
    case IsometryKind::elliptic: return "elliptic";
    case IsometryKind::parabolic: return "parabolic";
    case IsometryKind::hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

Isometry Isometry::frame(const Point& p, const Vec3& u) {
    const Vec3 w = mcross(p.v, u);
    return Isometry(Mat{u.x, w.x, p.v.x, u.y, w.y, p.v.y, u.z, w.z, p.v.z});
}

Isometry Isometry::reflection(const Geodesic& g) {
    const Vec3 n = normalize_spacelike(g.normal());
    const double jn[3] = {n.x, n.y, -n.z};
    const double nn[3] = {n.x, n.y, n.z};
    Mat m{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m[3 * r + c] = (r == c ? 1.0 : 0.0) - 2.0 * nn[r] * jn[c];
    return Isometry(m);
}

Isometry Isometry::translation(const Geodesic& g, double dist) {
    const Isometry f = frame(g.base(), g.tangent());
    const double ch = std::cosh(dist), sh = std::sinh(dist);
    const Isometry boost(Mat{ch, 0, sh, 0, 1, 0, sh, 0, ch});
    return f * boost * f.inverse();
}

Isometry Isometry::rotation(const Point& center, double angle) {
    // any unit tangent at the center works as the frame direction
    Vec3 seed = std::abs(center.v.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 u = normalize_spacelike(seed + center.v * mdot(seed, center.v));
    const Isometry f = frame(center, u);
    const double c = std::cos(angle), s = std::sin(angle);
    const Isometry rot(Mat{c, -s, 0, s, c, 0, 0, 0, 1});
    return f * rot * f.inverse();
}

Isometry Isometry::operator*(const Isometry& o) const {
    Mat r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r[3 * i + j] = m_[3 * i] * o.m_[j] + m_[3 * i + 1] * o.m_[3 + j] + m_[3 * i + 2] * o.m_[6 + j];
    return Isometry(r);
}

Vec3 Isometry::apply(const Vec3& v) const {
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z, m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

Point Isometry::apply(const Point& p) const { return Point{apply(p.v)}; }

Geodesic Isometry::apply(const Geodesic& g) const {
    // orientation-reversing maps flip the side convention but keep the direction
    return Geodesic(apply(g.base()), apply(g.tangent()));
}

Isometry Isometry::inverse() const {
    // M^{-1} = J M^T J
    const double s[3] = {1, 1, -1};
    Mat r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[3 * i + j] = s[i] * m_[3 * j + i] * s[j];
    return Isometry(r);
}

double Isometry::determinant() const {
    return det3({m_[0], m_[3], m_[6]}, {m_[1], m_[4], m_[7]}, {m_[2], m_[5], m_[8]});
}

double Isometry::minkowski_residual() const {
    const double s[3] = {1, 1, -1};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += m_[3 * k + i] * s[k] * m_[3 * k + j];
            worst = std::max(worst, std::abs(acc - (i == j ? s[i] : 0.0)));
        }
    return worst;
}

Isometry Isometry::renormalized() const {
    Vec3 c0{m_[0], m_[3], m_[6]}, c1{m_[1], m_[4], m_[7]}, c2{m_[2], m_[5], m_[8]};
    c2 = normalize_timelike(c2);
    c0 = normalize_spacelike(c0 + c2 * mdot(c0, c2));
    c1 = c1 + c2 * mdot(c1, c2) - c0 * mdot(c1, c0);
    c1 = normalize_spacelike(c1);
    return Isometry(Mat{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z});
}

double Isometry::distance_from(const Isometry& o) const {
    double worst = 0.0;
    for (int i = 0; i < 9; ++i) worst = std::max(worst, std::abs(m_[i] - o.m_[i]));
    return worst;
}

IsometryKind Isometry::classify(double tol) const {
    const double t = trace();
    if (t > 3.0 + tol) return IsometryKind::hyperbolic;
    if (t < 3.0 - tol) return IsometryKind::elliptic;
    return distance_from(identity()) <= std::sqrt(tol) ? IsometryKind::identity : IsometryKind::parabolic;
}

double Isometry::translation_length(double tol) const {
    if (classify(tol) != IsometryKind::hyperbolic) return 0.0;
    return std::acosh(0.5 * (trace() - 1.0));
}

namespace {

// Kernel of (M - lambda I) for a simple real eigenvalue.
Vec3 eigenvector(const Isometry& g, double lambda) {
    Vec3 rows[3];
    for (int r = 0; r < 3; ++r)
        rows[r] = {g(r, 0) - (r == 0 ? lambda : 0.0), g(r, 1) - (r == 1 ? lambda : 0.0),
                   g(r, 2) - (r == 2 ? lambda : 0.0)};
    Vec3 best{};
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const Vec3& a = rows[i];
            const Vec3& b = rows[j];
            const Vec3 c{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
            const double n = euclid_norm(c);
            if (n > best_norm) {
                best_norm = n;
                best = c;
            }
        }
    if (best.z < 0.0) best = -best;
    return best * (1.0 / best.z);
}

} // namespace

Geodesic Isometry::axis() const {
    const double len = translation_length();
    if (len <= 0.0) throw Error(ErrorKind::DomainError, "axis requested for a non-hyperbolic isometry");
    const Vec3 attracting = eigenvector(*this, std::exp(len));
    const Vec3 repelling = eigenvector(*this, std::exp(-len));
    return Geodesic::from_ideal(repelling, attracting);
}

// ---------------------------------------------------------------- angles and pencils

namespace {

Vec3 line_tangent_at(const Geodesic& g, const Point& p) {
    return normalize_spacelike(mcross(p.v, g.normal()));
}

} // namespace

Angle angle_at(const Geodesic& g1, const Geodesic& g2, const Point& p, double tol) {
    if (std::abs(g1.incidence(p)) > tol || std::abs(g2.incidence(p)) > tol) {
        std::ostringstream os;
        os << "point off geodesic (residuals " << g1.incidence(p) << ", " << g2.incidence(p) << ")";
        throw Error(ErrorKind::NotIncident, os.str());
    }
    const Vec3 u1 = line_tangent_at(g1, p);
    const Vec3 u2 = line_tangent_at(g2, p);
    double theta = oriented_angle(p, u1, u2);
    if (theta <= 0.0) theta += kPi;
    if (theta >= kPi) theta -= kPi;
    if (theta < 1e-14 || kPi - theta < 1e-14) throw Error(ErrorKind::TangentDegenerate, "geodesics coincide");
    return Angle{theta};
}

Geodesic pencil_line(const Geodesic& delta, double s, double eps) {
    const Point p = delta.point_at(s);
    const Vec3 t = normalize_spacelike(delta.tangent_at(s));
    return Geodesic(p, rotate_tangent(p, t, eps));
}

std::optional<Point> intersect(const Geodesic& a, const Geodesic& b) {
    const Vec3 x = mcross(a.normal(), b.normal());
    const double q = mdot(x, x);
    if (!(q < 0.0)) return std::nullopt;
    // Nearly tangent lines produce tiny cross products; still timelike means they meet.
    return Point{normalize_timelike(x)};
}

std::optional<Angle> try_omega_at(const Geodesic& delta, const Geodesic& deltap, double s, double eps) {
    const Geodesic f = pencil_line(delta, s, eps);
    const auto meet = intersect(f, deltap);
    if (!meet) return std::nullopt;
    return angle_at(deltap, f, *meet, 1e-6);
}

Angle omega_at(const Geodesic& delta, const Geodesic& deltap, double s, double eps) {
    auto w = try_omega_at(delta, deltap, s, eps);
    if (!w) throw Error(ErrorKind::NoIntersection, "pencil line misses the second line");
    return *w;
}

namespace {

void require_ultraparallel(const Geodesic& delta, const Geodesic& deltap) {
    const double c = std::abs(mdot(normalize_spacelike(delta.normal()), normalize_spacelike(deltap.normal())));
    if (!(c > 1.0 + 1e-12)) throw Error(ErrorKind::NotDisjoint, "lines meet or are asymptotic");
}

// Isometry taking the standard picture (delta = upward imaginary axis, base at i) to the actual one.
Isometry standard_frame(const Geodesic& delta) {
    const Vec3 b = delta.base().v;
    const Vec3 t = normalize_spacelike(delta.tangent());
    const Vec3 m = mcross(t, b);
    return Isometry(Isometry::Mat{m.x, t.x, b.x, m.y, t.y, b.y, m.z, t.z, b.z});
}

} // namespace

std::pair<double, double> pencil_band(const Geodesic& delta, const Geodesic& deltap, double eps) {
    require_ultraparallel(delta, deltap);
    if (!(eps > 0.0 && eps < kPi)) throw Error(ErrorKind::OutOfRange, "eps must lie in (0, pi)");
    const Isometry back = standard_frame(delta).inverse();
    double a = ideal_to_half_plane(back.apply(deltap.forward_ideal()));
    double b = ideal_to_half_plane(back.apply(deltap.backward_ideal()));
    if (a > b) std::swap(a, b);
    // In the standard picture the pencil line through i e^s ends at e^s tan(eps/2) and -e^s cot(eps/2).
    const double tau = std::tan(0.5 * eps);
    if (a > 0.0) return {std::log(a / tau), std::log(b / tau)};
    if (b < 0.0) return {std::log(-b * tau), std::log(-a * tau)};
    throw Error(ErrorKind::NotDisjoint, "second line crosses the first");
}

EpsilonEdge epsilon_edge(const Geodesic& delta, const Geodesic& deltap, double eps) {
    const auto [lo0, hi0] = pencil_band(delta, deltap, eps);
    const double width = hi0 - lo0;
    const auto w1 = try_omega_at(delta, deltap, lo0 + 0.25 * width, eps);
    const auto w3 = try_omega_at(delta, deltap, lo0 + 0.75 * width, eps);
    if (!w1 || !w3) throw Error(ErrorKind::DomainError, "pencil band probe failed");
    const bool increasing = w3->value > w1->value;

    // Outside the band the angle saturates at 0 or pi.
    auto value = [&](double s) {
        if (auto w = try_omega_at(delta, deltap, s, eps)) return w->value;
        const bool low_end = (s - lo0) < (hi0 - s);
        return (low_end == increasing) ? 0.0 : kPi;
    };

    double lo = lo0, hi = hi0;
    int it = 0;
    for (; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool below = value(mid) < eps;
        if (below == increasing)
            lo = mid;
        else
            hi = mid;
    }
    const double s = 0.5 * (lo + hi);
    const Geodesic f = pencil_line(delta, s, eps);
    const auto meet = intersect(f, deltap);
    if (!meet) throw Error(ErrorKind::DomainError, "epsilon-edge bisection left the band");
    EpsilonEdge e;
    e.start = delta.point_at(s);
    e.end = *meet;
    e.length = distance(e.start, e.end);
    e.parameter = s;
    e.iterations = it;
    return e;
}

Perpendicular common_perpendicular(const Geodesic& delta, const Geodesic& deltap) {
    require_ultraparallel(delta, deltap);
    const Vec3 n1 = normalize_spacelike(delta.normal());
    const Vec3 n2 = normalize_spacelike(deltap.normal());
    const Vec3 m = normalize_spacelike(mcross(n1, n2));
    Perpendicular out;
    out.foot = Point{normalize_timelike(mcross(m, n1))};
    out.foot_prime = Point{normalize_timelike(mcross(m, n2))};
    out.length = std::acosh(std::abs(mdot(n1, n2)));
    return out;
}

// ---------------------------------------------------------------- triangles

namespace {

double side_from_angles(double opp, double adj1, double adj2) {
    const double c = (std::cos(opp) + std::cos(adj1) * std::cos(adj2)) / (std::sin(adj1) * std::sin(adj2));
    if (!(c >= 1.0)) throw Error(ErrorKind::Infeasible, "angle data is not hyperbolic");
    return std::acosh(c);
}

double angle_from_sides(double opp, double adj1, double adj2) {
    const double c = (std::cosh(adj1) * std::cosh(adj2) - std::cosh(opp)) / (std::sinh(adj1) * std::sinh(adj2));
    if (c < -1.0 - 1e-9 || c > 1.0 + 1e-9) throw Error(ErrorKind::Infeasible, "side data violates the triangle inequality");
    return std::acos(clamp_unit(c));
}

Triangle from_sides(double a, double b, double c) {
    if (!(a > 0 && b > 0 && c > 0)) throw Error(ErrorKind::Infeasible, "sides must be positive");
    if (a >= b + c || b >= a + c || c >= a + b) throw Error(ErrorKind::Infeasible, "triangle inequality fails");
    Triangle t{a, b, c, 0, 0, 0};
    t.alpha = angle_from_sides(a, b, c);
    t.beta = angle_from_sides(b, c, a);
    t.gamma = angle_from_sides(c, a, b);
    return t;
}

// The three cyclic relabellings (a,b,c | alpha,beta,gamma) -> (b,c,a | beta,gamma,alpha) ...
struct Slots {
    std::optional<double> s[3];
    std::optional<double> g[3];
};

} // namespace

Triangle solve_triangle(const TriangleSpec& spec) {
    Slots x{{spec.a, spec.b, spec.c}, {spec.alpha, spec.beta, spec.gamma}};
    int ns = 0, na = 0;
    for (int i = 0; i < 3; ++i) {
        ns += x.s[i].has_value();
        na += x.g[i].has_value();
        if (x.g[i] && !(*x.g[i] > 0.0 && *x.g[i] < kPi)) throw Error(ErrorKind::Infeasible, "angles must lie in (0, pi)");
        if (x.s[i] && !(*x.s[i] > 0.0)) throw Error(ErrorKind::Infeasible, "sides must be positive");
    }
    if (ns + na != 3) throw Error(ErrorKind::Infeasible, "exactly three elements are required");

    double side[3] = {0, 0, 0};
    if (ns == 3) {
        return from_sides(*x.s[0], *x.s[1], *x.s[2]);
    } else if (na == 3) {
        if (*x.g[0] + *x.g[1] + *x.g[2] >= kPi) throw Error(ErrorKind::Infeasible, "angle sum must be below pi");
        for (int i = 0; i < 3; ++i) side[i] = side_from_angles(*x.g[i], *x.g[(i + 1) % 3], *x.g[(i + 2) % 3]);
        return from_sides(side[0], side[1], side[2]);
    } else if (ns == 2) {
        // SAS: the known angle must be the one between the known sides
        int missing = 0;
        while (x.s[missing]) ++missing;
        if (!x.g[missing]) throw Error(ErrorKind::Infeasible, "SSA data is ambiguous and not supported");
        const double p = *x.s[(missing + 1) % 3], q = *x.s[(missing + 2) % 3];
        const double ch = std::cosh(p) * std::cosh(q) - std::sinh(p) * std::sinh(q) * std::cos(*x.g[missing]);
        for (int i = 0; i < 3; ++i) side[i] = x.s[i] ? *x.s[i] : std::acosh(std::max(1.0, ch));
        return from_sides(side[0], side[1], side[2]);
    } else {
        // ASA: the known side must lie between the known angles
        int known = 0;
        while (!x.s[known]) ++known;
        if (x.g[known]) throw Error(ErrorKind::Infeasible, "AAS data is not supported");
        const double p = *x.g[(known + 1) % 3], q = *x.g[(known + 2) % 3];
        const double cg = -std::cos(p) * std::cos(q) + std::sin(p) * std::sin(q) * std::cosh(*x.s[known]);
        if (cg <= -1.0 || cg >= 1.0) throw Error(ErrorKind::Infeasible, "angle data is not hyperbolic");
        double ang[3];
        for (int i = 0; i < 3; ++i) ang[i] = x.g[i] ? *x.g[i] : std::acos(cg);
        if (ang[0] + ang[1] + ang[2] >= kPi) throw Error(ErrorKind::Infeasible, "angle sum must be below pi");
        for (int i = 0; i < 3; ++i) side[i] = side_from_angles(ang[i], ang[(i + 1) % 3], ang[(i + 2) % 3]);
        return from_sides(side[0], side[1], side[2]);
    }
}

double right_triangle_adjacent_leg(double hypotenuse, double angle) {
    return std::atanh(std::cos(angle) * std::tanh(hypotenuse));
}

// ---------------------------------------------------------------- log-space helpers

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double log_sinh(double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "log_sinh needs x > 0");
    if (x < 1.0) return std::log(std::sinh(x));
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

double acosh_from_log(double log_y) {
    if (log_y < 0.0) throw Error(ErrorKind::DomainError, "arcosh argument below 1");
    if (log_y < 1.0) return std::acosh(std::exp(log_y));
    // arcosh(y) = log(y) + log(1 + sqrt(1 - y^-2))
    return log_y + std::log1p(std::sqrt(-std::expm1(-2.0 * log_y)));
}

} // namespace hexspine
