#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <set>

#include "hexspine/duality.hpp"
#include "hexspine/error.hpp"
#include "hexspine/pants.hpp"

using namespace hexspine;

namespace {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& a) {
    Eigen::MatrixXd m(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i][j];
    return m;
}

// half-length of the third boundary straight from the hexagon identities
double half_boundary(int k, double eps) {
    const double cosh_l = 1.0 + 1.0 / std::sin(eps);
    const double cosh_h = 1.0 + std::sin(eps);
    const double s = std::sinh(k * std::acosh(cosh_l) / 2);
    return std::acosh(s * s * (cosh_h - 1.0) - 1.0);
}

struct Gen17 {
    CombMap m = preset_gen17();
    std::vector<Curve> curves = extract_curves(m);
    std::vector<PantsAttachment> att = attach_all(m, curves);
};

const Gen17& gen17() {
    static const Gen17 g;
    return g;
}

} // namespace

TEST_CASE("pants attachments on genus 17") {
    const Gen17& g = gen17();
    CHECK(g.att.size() == 24);
    for (const PantsAttachment& a : g.att) {
        CHECK(a.k == 4);
        CHECK(a.red != a.red_prime);
        CHECK(g.curves[a.red].colour == Colour::red);
        CHECK(g.curves[a.red_prime].colour == Colour::red);
        CHECK(a.b_edges.size() == 3);
        CHECK(a.b_prime_edges.size() == 3);
        std::set<int> e{g.m.edge_of(a.b_half_edge)};
        e.insert(a.b_edges.begin(), a.b_edges.end());
        e.insert(a.b_prime_edges.begin(), a.b_prime_edges.end());
        CHECK(e.size() == 7);
        CHECK(a.d_word.size() == 6);
        // smallest half-edge of the curve
        for (int h : g.curves[a.blue_curve].half_edges) CHECK(a.b_half_edge <= std::min(h, g.m.twin(h)));
    }
}

TEST_CASE("pants boundary against the developed surface") {
    const Gen17& g = gen17();
    for (double eps : {0.5, 1.0, kPi / 2, 2.2}) {
        const DevelopedSurface s = develop(g.m, eps);
        const std::vector<double> omega = omega_angles(4, eps);
        for (const PantsAttachment& a : g.att) {
            CHECK(loop_length(s, a.d_word) == doctest::Approx(2 * half_boundary(4, eps)).epsilon(1e-10));
            const std::vector<double> ang = d_crossing_angles(s, a);
            REQUIRE(ang.size() == a.d_labels.size());
            for (std::size_t j = 0; j < ang.size(); ++j) CHECK(std::abs(ang[j] - omega[std::abs(a.d_labels[j]) - 1]) < 1e-9);
        }
        // the traced axis meets the same sides at the same angles
        const AxisTrace t = trace_axis(s, g.att[0].d_word);
        const std::vector<double> ang = d_crossing_angles(s, g.att[0]);
        std::map<int, double> by_edge;
        for (std::size_t j = 0; j < ang.size(); ++j) by_edge[g.m.edge_of(g.att[0].d_word[j])] = ang[j];
        REQUIRE(!t.crossings.empty());
        const AxisCrossing& first = t.crossings.front();
        REQUIRE(by_edge.count(g.m.edge_of(first.half_edge)));
        CHECK(first.angle == doctest::Approx(by_edge[g.m.edge_of(first.half_edge)]).epsilon(1e-7));
    }
}

TEST_CASE("attachment preconditions") {
    const CombMap two = preset_gen2();
    CHECK_THROWS_AS(attach_all(two, extract_curves(two)), Error);
    try {
        attach_all(two, extract_curves(two));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::KTooSmall);
    }
    // a genus 9 quotient whose curves have mixed lengths and whose pants overlap
    const CombMap bad = coxeter_map({1, 2, 4, 2, 8, 16});
    try {
        attach_all(bad, extract_curves(bad));
        FAIL("expected an axiom violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AxiomViolation);
    }
    const Gen17& g = gen17();
    CHECK_THROWS_AS(attach_pants(g.m, g.curves, g.att[0].red), Error);
    CHECK_THROWS_AS(attach_pants(g.m, g.curves, g.att[0].blue_curve, 0), Error);
}

TEST_CASE("bracket matrix structure") {
    const Gen17& g = gen17();
    std::vector<int> owner(g.m.half_edge_count(), -1);
    for (const Curve& c : g.curves)
        for (int h : c.half_edges) owner[g.m.edge_of(h)] = c.id;

    // red curves take no part: every pants edge is blue, and within one
    // column the incidences of all rows add up to the 2(k - 1) pants edges
    for (const PantsAttachment& a : g.att) {
        std::map<int, int> per_curve;
        for (const auto* side : {&a.b_edges, &a.b_prime_edges})
            for (int e : *side) {
                CHECK(g.curves[owner[e]].colour == Colour::blue);
                per_curve[owner[e]]++;
            }
        int total = 0;
        for (const auto& [c, n] : per_curve) total += n;
        CHECK(total == 2 * (a.k - 1));
    }

    for (double eps : {0.2, 1.0, kPi / 2, 2.5}) {
        const BracketMatrix M = bracket_matrix(g.m, g.curves, g.att, eps);
        REQUIRE(M.entry.size() == 24);
        for (std::size_t col = 0; col < M.entry.size(); ++col) {
            std::set<int> hit;
            for (int e : g.att[col].b_edges) hit.insert(owner[e]);
            for (int e : g.att[col].b_prime_edges) hit.insert(owner[e]);
            for (std::size_t row = 0; row < M.entry.size(); ++row) {
                CHECK(std::isfinite(M.entry[row][col]));
                CHECK(std::abs(M.entry[row][col]) <= 4 * (1 + std::abs(std::cos(eps))));
                if (row != col && !hit.count(M.blue[row])) CHECK(M.entry[row][col] == 0.0);
            }
        }
    }
    const BracketMatrix right = bracket_matrix(g.m, g.curves, g.att, kPi / 2);
    const std::vector<double> omega = omega_angles(4, kPi / 2);
    // cos(pi/2) vanishes, leaving only the pants terms on the diagonal
    double expected = 0.0;
    const PantsAttachment& a = g.att[0];
    for (int i = 1; i <= 3; ++i)
        for (int e : {a.b_edges[i - 1], a.b_prime_edges[i - 1]})
            if (owner[e] == a.blue_curve) expected += -0.5 * std::cos(omega[i - 1]);
    CHECK(right.entry[0][0] == doctest::Approx(expected + std::cos(kPi / 2)).epsilon(1e-12));
    CHECK_THROWS_AS(bracket_matrix(g.m, g.curves, g.att, 0.0), Error);
}

TEST_CASE("determinant against Eigen") {
    const Gen17& g = gen17();
    for (double eps : {1e-3, 0.3, 0.9, 1.4, kPi / 2 - 0.05, 2.0, 3.0}) {
        const BracketMatrix M = bracket_matrix(g.m, g.curves, g.att, eps);
        const Eigen::MatrixXd E = to_eigen(M.entry);
        const double oracle = E.determinant();
        CHECK(std::abs(determinant(M.entry) - oracle) <= 1e-10 * std::abs(oracle));
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(E);
        const double smin = svd.singularValues().minCoeff();
        const double lb = singular_lower_bound(M.entry);
        CHECK(lb <= smin * (1 + 1e-10));
        CHECK(lb >= smin / std::sqrt(24.0) * (1 - 1e-10));
    }
    CHECK(determinant({{2, 1}, {4, 2}}) == 0.0);
    CHECK(determinant({{0, 1}, {1, 0}}) == -1.0);
    CHECK(singular_lower_bound({{1, 0}, {0, 0}}) == 0.0);
}

TEST_CASE("delta near zero and near pi/2") {
    const CombMap m = preset_gen17();
    const BracketReport tail = delta_scan(m, {4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4});
    CHECK(tail.dimension == 24);
    CHECK(tail.b_choice.size() == 24);
    for (int j = 0; j + 1 < 4; ++j) CHECK(tail.deviation[j + 1] <= 0.7 * tail.deviation[j]);
    for (int j = 2; j + 1 < 5; ++j) CHECK(std::abs(tail.delta[j + 1] - 1) < std::abs(tail.delta[j] - 1));
    for (int j = 2; j < 5; ++j) {
        CHECK(tail.delta[j] >= 0.9);
        CHECK(tail.delta[j] <= 1.1);
    }

    std::vector<double> grid;
    for (double e : {0.1, 0.5, 1.0, 1.3, 1.5}) {
        grid.push_back(e);
        grid.push_back(kPi - e);
    }
    const BracketReport sym = delta_scan(m, grid);
    for (std::size_t j = 0; j < grid.size(); j += 2) CHECK(std::abs(std::abs(sym.delta[j]) - std::abs(sym.delta[j + 1])) < 1e-8);

    const BracketReport mid = delta_scan(m, {kPi / 2 - 0.1, kPi / 2 - 0.05, kPi / 2 - 0.01, kPi / 2 + 0.01, kPi / 2 + 0.05, kPi / 2 + 0.1});
    // delta has a high order zero at pi/2 while M stays well conditioned
    for (double d : mid.delta) CHECK(std::abs(d) < 1e-8);
    CHECK(mid.witnesses.empty());
    CHECK(mid.certified.size() == 6);
    for (double s : mid.sigma_bound) CHECK(s > 1e-4);
    CHECK_THROWS_AS(delta_scan(m, {}), Error);
    CHECK_THROWS_AS(delta_scan(m, {4.0}), Error);
}

TEST_CASE("codimension report") {
    const Gen17& g = gen17();
    const BracketReport mid = delta_scan(g.m, {kPi / 2 - 0.1, kPi / 2 + 0.1});
    std::vector<int> sub, all;
    for (const Curve& c : g.curves) {
        all.push_back(c.id);
        if (c.index >= 3) sub.push_back(c.id);
    }
    const CodimReport r = codim_report(g.m, g.curves, sub, mid);
    CHECK(r.curves == 32);
    CHECK(r.bound == 31);
    CHECK(r.comparison == 33);
    CHECK(r.bound < r.comparison);
    CHECK(!r.notes.empty());
    CHECK(codim_report(g.m, g.curves, all, mid).bound == 47);
    CHECK_THROWS_AS(codim_report(g.m, g.curves, {0, 1}, mid), Error);

    BracketReport empty = mid;
    empty.witnesses.clear();
    empty.certified.clear();
    try {
        codim_report(g.m, g.curves, sub, empty);
        FAIL("expected NoWitness");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoWitness);
    }
}

TEST_CASE("bound evaluators") {
    const long double g = 1000;
    const long double oracle = 38.0L / std::sqrt(std::log(std::log(std::log(g)))) * g / std::sqrt(std::log(g));
    CHECK(bound_theorem1(1000) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
    CHECK(bound_theorem1(1000) == doctest::Approx(1.78e4).epsilon(0.01));
    for (long long n : {16LL, 17LL, 100LL, 12345LL, 1000000LL}) CHECK(std::abs(bound_theorem1(n) / bound_im1(n) - 2.0 / 3.0) < 1e-12);
    for (long long n : {15LL, 2LL, 0LL, -4LL}) CHECK_THROWS_AS(bound_theorem1(n), Error);
    CHECK_THROWS_AS(bound_im1(15), Error);
}
