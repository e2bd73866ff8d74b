#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hexspine/hexagon.hpp"
#include "hexspine/pants.hpp"

using namespace hexspine;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <class F>
std::vector<double> sample(const std::vector<double>& grid, F f) {
    std::vector<double> out;
    for (double e : grid) out.push_back(f(e));
    return out;
}

} // namespace

TEST_CASE("right-angled pants with k = 4") {
    const PantsMetrics m = pants_metrics(4, kPi / 2);
    CHECK(std::cosh(m.H) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.H == doctest::Approx(m.L).epsilon(1e-12));
    CHECK(std::abs(m.p0) <= 1e-12);
    // 1 + cosh d = sinh^2(2L) (cosh H - 1) with cosh 2L = 7: sinh^2(2L) = 48
    CHECK(m.cosh_d() == doctest::Approx(47.0).epsilon(1e-12));
    REQUIRE(m.omega.size() == 3);
    CHECK(m.omega[0] < m.omega[1]);
    CHECK(m.omega[1] < m.omega[2]);
    CHECK_FALSE(m.log_space);
}

TEST_CASE("closed-form identities on a grid") {
    for (int k : {3, 4, 5}) {
        for (int j = 0; j < 40; ++j) {
            const double eps = 0.01 + (kPi - 0.02) * j / 39.0;
            const PantsMetrics m = pants_metrics(k, eps);
            const long double s = std::sin(static_cast<long double>(eps));
            CHECK(rel(std::cosh(m.L), static_cast<double>(1.0L + 1.0L / s)) <= 1e-9);
            CHECK(rel(std::cosh(m.H), static_cast<double>(1.0L + s)) <= 1e-9);
            const long double sh = std::sinh(0.5L * k * m.L);
            CHECK(rel(1.0 + std::cosh(m.d), static_cast<double>(sh * sh * (std::cosh(static_cast<long double>(m.H)) - 1.0L))) <= 1e-9);
            CHECK(rel(std::sinh(m.h), static_cast<double>(std::sinh(static_cast<long double>(m.H)) * sh / std::sinh(static_cast<long double>(m.d)))) <= 1e-9);
            for (std::size_t i = 1; i < m.omega.size(); ++i) CHECK(m.omega[i - 1] < m.omega[i]);
        }
    }
}

TEST_CASE("mirror symmetry eps <-> pi - eps") {
    for (double eps : {0.2, 0.9, 1.3}) {
        const PantsMetrics a = pants_metrics(4, eps), b = pants_metrics(4, kPi - eps);
        CHECK(std::abs(a.L - b.L) <= 1e-10);
        CHECK(std::abs(a.H - b.H) <= 1e-10);
        CHECK(std::abs(a.d - b.d) <= 1e-10);
        CHECK(std::abs(a.h - b.h) <= 1e-10);
    }
}

TEST_CASE("omega from the developed picture matches the exact chain") {
    CHECK(omega_angles(4, 0.5).back() == doctest::Approx(omega_last_exact(4, 0.5)).epsilon(1e-9));
    for (int k : {3, 4, 5}) {
        for (int j = 0; j < 20; ++j) {
            const double eps = 0.02 + 1.5 * j / 19.0;
            CHECK(std::abs(omega_angles(k, eps).back() - omega_last_exact(k, eps)) <= 1e-9);
        }
    }
}

TEST_CASE("omega tends to zero with eps") {
    double prev = INFINITY;
    for (double eps : geometric_grid(0.1, 1e-5, 9)) {
        const auto w = omega_angles(4, eps);
        const double mx = *std::max_element(w.begin(), w.end());
        CHECK(mx < prev);
        prev = mx;
    }
    CHECK(prev <= 0.1);
}

TEST_CASE("log-space path is continuous across the threshold") {
    const PantsMetrics below = pants_metrics(4, kLogSpaceThreshold * (1 - 1e-9));
    const PantsMetrics above = pants_metrics(4, kLogSpaceThreshold * (1 + 1e-9));
    CHECK(below.log_space);
    CHECK_FALSE(above.log_space);
    CHECK(rel(below.d, above.d) <= 1e-7);
    CHECK(rel(below.h, above.h) <= 1e-7);
}

TEST_CASE("asymptotic exponents") {
    const auto grid = geometric_grid(1e-3, 1e-5, 9);
    CHECK(asymptotic_slope(sample(grid, [](double e) { return std::cosh(hexagon_side_length(e)); }), grid) ==
          doctest::Approx(-1.0).epsilon(0.02));
    CHECK(asymptotic_slope(sample(grid, [](double e) { return pants_metrics(3, e).H; }), grid) ==
          doctest::Approx(0.5).epsilon(0.04));
    CHECK(asymptotic_slope(grid, grid) == doctest::Approx(1.0).epsilon(1e-9));
    for (int k : {3, 4}) {
        std::vector<double> h, cd, w, em;
        for (double e : grid) {
            const PantsMetrics m = pants_metrics(k, e);
            h.push_back(m.h);
            cd.push_back(m.cosh_d());
            w.push_back(omega_last_exact(k, e));
            em.push_back(omega_last_chain(k, e).eps_minus);
        }
        CHECK(std::abs(asymptotic_slope(h, grid) - 0.5 * (k - 1)) <= 0.02);
        CHECK(std::abs(asymptotic_slope(cd, grid) - (1 - k)) <= 0.05);
        CHECK(std::abs(asymptotic_slope(w, grid) - 0.5) <= 0.05);
        CHECK(std::abs(asymptotic_slope(em, grid) - (k - 1)) <= 0.05);
    }
}

TEST_CASE("h over eps^((k-1)/2) stabilises") {
    const auto grid = geometric_grid(1e-2, 1e-5, 11);
    double prev = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = pants_metrics(3, grid[i]).h / grid[i];
        if (i + 1 == grid.size()) CHECK(rel(r, prev) <= 0.02);
        prev = r;
    }
}

TEST_CASE("p0 approaches L/2") {
    CHECK(std::abs(pants_metrics(3, 1e-5).p0 - pants_metrics(3, 1e-5).L / 2) < 1e-2);
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(pants_metrics(2, 1.0), Error);
    CHECK_THROWS_AS(pants_metrics(4, 0.0), Error);
    CHECK_THROWS_AS(pants_metrics(4, kPi), Error);
    const std::vector<double> up{1e-3, 2e-3, 3e-3, 4e-3};
    CHECK_THROWS_AS(asymptotic_slope(up, up), Error);
    const std::vector<double> three{3e-3, 2e-3, 1e-3};
    CHECK_THROWS_AS(asymptotic_slope(three, three), Error);
}
