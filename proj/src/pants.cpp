#include "hexspine/pants.hpp"

#include <algorithm>
#include <cmath>

#include "hexspine/hexagon.hpp"

namespace hexspine {

namespace {

void check_args(int k, double eps) {
    if (k < 3) throw Error(ErrorKind::OutOfRange, "k must be at least 3");
    if (!(eps > 0.0 && eps < kPi)) throw Error(ErrorKind::OutOfRange, "eps must lie in (0, pi)");
}

PantsMetrics lengths_only(int k, double eps) {
    check_args(k, eps);
    PantsMetrics m;
    m.k = k;
    m.eps = eps;
    const double s = std::sin(eps);
    m.L = hexagon_side_length(eps);
    // cosh H = 1 + sin eps, i.e. 2 sinh^2(H/2) = sin eps
    m.H = 2.0 * std::asinh(std::sqrt(0.5 * s));
    m.p0 = std::atanh(std::cos(eps) * std::tanh(0.5 * m.L));
    const double half = 0.5 * k * m.L;

    if (eps < kLogSpaceThreshold || kPi - eps < kLogSpaceThreshold) {
        m.log_space = true;
        // log(1 + cosh d) = 2 log sinh(kL/2) + log(cosh H - 1)
        const double log_one_plus = 2.0 * log_sinh(half) + std::log(s);
        const double log_cosh_d = log_one_plus + std::log1p(-std::exp(-log_one_plus));
        m.d = acosh_from_log(log_cosh_d);
        const double log_sinh_h = std::log(std::sinh(m.H)) + log_sinh(half) - log_sinh(m.d);
        m.h = std::asinh(std::exp(log_sinh_h));
    } else {
        const double sh = std::sinh(half);
        const double cosh_d = sh * sh * s - 1.0;
        if (!(cosh_d >= 1.0)) throw Error(ErrorKind::DomainError, "pants boundary length underflow");
        m.d = std::acosh(cosh_d);
        m.h = std::asinh(std::sinh(m.H) * sh / std::sinh(m.d));
    }
    return m;
}

} // namespace

double PantsMetrics::cosh_d() const { return std::cosh(d); }

PantsMetrics pants_metrics(int k, double eps) {
    PantsMetrics m = lengths_only(k, eps);
    m.omega = omega_angles(k, eps);
    return m;
}

std::vector<double> omega_angles(int k, double eps) {
    const PantsMetrics m = lengths_only(k, eps);
    // C is the upward imaginary axis, N = i its foot on h; D sits at distance h
    // to the right of C, perpendicular to h.
    const Geodesic c_line(Point::origin(), Vec3{0, 1, 0});
    const Point omega_foot = Point::polar(m.h, 0.0);
    const Geodesic d_line(omega_foot, Vec3{0, 1, 0});
    std::vector<double> out;
    out.reserve(k - 1);
    for (int i = 1; i <= k - 1; ++i) {
        const double x = (i - 0.5 * k) * m.L + m.p0;
        out.push_back(omega_at(c_line, d_line, x, eps).value);
    }
    return out;
}

OmegaChain omega_last_chain(int k, double eps) {
    const PantsMetrics m = lengths_only(k, eps);
    OmegaChain c;
    c.a = (0.5 * k - 1.0) * m.L + m.p0;
    if (!(c.a > 0.0)) throw Error(ErrorKind::DomainError, "foot of h is not below P_{k-1}");

    const double log_cosh_a = log_cosh(c.a);
    const double log_cosh_v = log_cosh_a + log_cosh(m.h);
    const double v = acosh_from_log(log_cosh_v);
    c.cosh_v = std::exp(log_cosh_v);
    const double log_sin_em = std::log(std::sinh(m.h)) - log_sinh(v);
    c.eps_minus = std::asin(std::min(1.0, std::exp(log_sin_em)));
    c.eps_plus = eps - c.eps_minus;

    const double cos_gm = std::exp(log_sin_em + log_cosh_a);
    if (cos_gm > 1.0 + 1e-9) throw Error(ErrorKind::DomainError, "cos(gamma-) leaves [-1, 1]");
    const double cos_gm_c = std::min(1.0, cos_gm);
    c.gamma_minus = std::acos(cos_gm_c);
    c.gamma_plus = std::asin(cos_gm_c); // pi/2 - gamma_minus, accurate when small

    // 1 - cos(omega) = sin e+ sin g+ cosh v + (1 - cos e+ cos g+)
    const double se = std::sin(c.eps_plus);
    double product;
    if (se > 0.0 && cos_gm_c > 0.0)
        product = std::exp(std::log(se) + std::log(cos_gm_c) + log_cosh_v);
    else
        product = se * cos_gm_c * c.cosh_v;
    const double s1 = std::sin(0.5 * c.eps_plus), s2 = std::sin(0.5 * c.gamma_plus);
    const double one_minus_cos = product + 2.0 * s1 * s1 + std::cos(c.eps_plus) * 2.0 * s2 * s2;
    if (one_minus_cos < -1e-9 || one_minus_cos > 2.0 + 1e-9)
        throw Error(ErrorKind::DomainError, "arccos argument leaves [-1, 1]");
    const double half = std::clamp(0.5 * one_minus_cos, 0.0, 1.0);
    c.omega = 2.0 * std::asin(std::sqrt(half));
    return c;
}

double omega_last_exact(int k, double eps) { return omega_last_chain(k, eps).omega; }

double asymptotic_slope(std::span<const double> f, std::span<const double> eps_grid) {
    if (f.size() != eps_grid.size() || eps_grid.size() < 4)
        throw Error(ErrorKind::BadGrid, "need at least four matching samples");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0) || !(f[i] > 0.0)) throw Error(ErrorKind::BadGrid, "samples must be positive");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw Error(ErrorKind::BadGrid, "grid must decrease strictly");
    }
    const double n = static_cast<double>(f.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = std::log(eps_grid[i]), y = std::log(f[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> geometric_grid(double hi, double lo, int n) {
    if (n < 2 || !(hi > lo) || !(lo > 0.0)) throw Error(ErrorKind::BadGrid, "invalid geometric grid");
    std::vector<double> out(n);
    const double r = std::log(lo / hi) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = hi * std::exp(r * i);
    out.back() = lo;
    return out;
}

} // namespace hexspine
