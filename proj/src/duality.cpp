#include "hexspine/duality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hexspine/error.hpp"
#include "hexspine/pants.hpp"
#include "hexspine/parallel.hpp"

namespace hexspine {

namespace {

std::string first_witness(const AxiomResult& r) { return r.witnesses.empty() ? std::string("no witness") : r.witnesses.front(); }

std::vector<int> curve_of_edge(const CombMap& m, const std::vector<Curve>& curves) {
    std::vector<int> out(m.half_edge_count(), -1); // indexed by edge_of
    for (const Curve& c : curves)
        for (int h : c.half_edges) out[m.edge_of(h)] = c.id;
    return out;
}

constexpr double kWitnessFloor = 1e-8;
constexpr double kWitnessWindow = 0.2;

} // namespace

void require_dual_axioms(const CombMap& m) {
    const AxiomReport rep = validate_axioms(m);
    for (int a = 0; a < 3; ++a)
        if (!rep.ax[a].pass) throw Error(ErrorKind::AxiomViolation, "AX" + std::to_string(a + 1) + ": " + first_witness(rep.ax[a]));
    if (rep.k < 3) throw Error(ErrorKind::KTooSmall, "curves have " + std::to_string(rep.k) + " edges, duality needs k >= 3");
    for (int a = 3; a < 5; ++a)
        if (!rep.ax[a].pass) throw Error(ErrorKind::AxiomViolation, "AX" + std::to_string(a + 1) + ": " + first_witness(rep.ax[a]));
}

PantsAttachment attach_pants(const CombMap& m, const std::vector<Curve>& curves, int blue_curve, int b_half_edge) {
    if (blue_curve < 0 || blue_curve >= static_cast<int>(curves.size()) || curves[blue_curve].colour != Colour::blue)
        throw Error(ErrorKind::OutOfRange, "curve " + std::to_string(blue_curve) + " is not a blue curve");
    const Curve& B = curves[blue_curve];
    const std::vector<int> owner = curve_of_edge(m, curves);
    if (b_half_edge < 0) {
        b_half_edge = m.half_edge_count();
        for (int h : B.half_edges) b_half_edge = std::min({b_half_edge, h, m.twin(h)});
    } else if (b_half_edge >= m.half_edge_count() || owner[m.edge_of(b_half_edge)] != blue_curve) {
        throw Error(ErrorKind::OutOfRange, "half-edge " + std::to_string(b_half_edge) + " is not on the blue curve");
    }

    PantsAttachment a;
    a.blue_curve = blue_curve;
    a.b_half_edge = b_half_edge;
    a.k = B.edge_count();
    const int k = a.k;
    if (k < 3) throw Error(ErrorKind::KTooSmall, "curves have " + std::to_string(k) + " edges, duality needs k >= 3");

    // Walk each red curve keeping b on the left; the faces on that side are the
    // tiles of the pants and the dual path through them runs along D.
    const auto walk = [&](int start) {
        std::vector<int> r{start};
        for (int i = 1; i < k; ++i) r.push_back(curve_successor(m, r.back()));
        if (curve_successor(m, r.back()) != start)
            throw Error(ErrorKind::AxiomViolation, "red curve through half-edge " + std::to_string(start) + " does not have k edges");
        return r;
    };
    const std::vector<int> r = walk(m.rot(m.rot(m.rot(b_half_edge))));
    const std::vector<int> rp = walk(CombMap::next(CombMap::next(r[k - 1])));
    a.red = owner[m.edge_of(r[0])];
    a.red_prime = owner[m.edge_of(rp[0])];
    if (a.red == a.red_prime) throw Error(ErrorKind::AxiomViolation, "AX4: blue edge meets red curve " + std::to_string(a.red) + " twice");

    // the walk runs clockwise round R as seen from the pants, so b_i sits k - i steps along
    for (int i = 1; i < k; ++i) {
        a.b_edges.push_back(m.edge_of(m.rot(r[k - i])));
        a.b_prime_edges.push_back(m.edge_of(m.rot(rp[k - i])));
    }
    std::set<int> distinct{m.edge_of(b_half_edge)};
    for (int e : a.b_edges) distinct.insert(e);
    for (int e : a.b_prime_edges) distinct.insert(e);
    if (static_cast<int>(distinct.size()) != 2 * k - 1)
        throw Error(ErrorKind::AxiomViolation, "AX5: the blue edges of the pants at edge " + std::to_string(m.edge_of(b_half_edge)) + " repeat");

    for (int i = 0; i < k - 1; ++i) {
        a.d_word.push_back(CombMap::next(r[i]));
        a.d_labels.push_back(k - 1 - i);
    }
    for (int i = 0; i < k - 1; ++i) {
        a.d_word.push_back(CombMap::next(rp[i]));
        a.d_labels.push_back(-(k - 1 - i));
    }
    check_loop(m, a.d_word);
    return a;
}

std::vector<PantsAttachment> attach_all(const CombMap& m, const std::vector<Curve>& curves) {
    require_dual_axioms(m);
    std::vector<PantsAttachment> out;
    for (const Curve& c : curves)
        if (c.colour == Colour::blue) out.push_back(attach_pants(m, curves, c.id));
    return out;
}

std::vector<double> d_crossing_angles(const DevelopedSurface& s, const PantsAttachment& a) {
    const std::vector<int>& w = a.d_word;
    std::vector<double> out;
    for (std::size_t j = 0; j < w.size(); ++j) {
        std::vector<int> rotated(w.begin() + static_cast<long>(j), w.end());
        rotated.insert(rotated.end(), w.begin(), w.begin() + static_cast<long>(j));
        const LoopClass loop = make_loop(s, rotated);
        if (loop.kind != IsometryKind::hyperbolic) throw Error(ErrorKind::DomainError, "boundary loop is not hyperbolic");
        const Geodesic axis = loop.holonomy.axis();
        const Geodesic& side = s.hex.sides[CombMap::pos(w[j])];
        const auto x = intersect(axis, side);
        if (!x) throw Error(ErrorKind::NoIntersection, "boundary axis misses the side it crosses");
        out.push_back(angle_at(axis, side, *x, 1e-7).value);
    }
    return out;
}

double BracketMatrix::max_deviation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < entry.size(); ++i)
        for (std::size_t j = 0; j < entry.size(); ++j) worst = std::max(worst, std::abs(entry[i][j] - (i == j ? 1.0 : 0.0)));
    return worst;
}

BracketMatrix bracket_matrix(const CombMap& m, const std::vector<Curve>& curves, const std::vector<PantsAttachment>& att,
                             double eps) {
    if (!(eps > 0.0 && eps < kPi)) throw Error(ErrorKind::OutOfRange, "eps must lie in (0, pi)");
    const std::vector<int> owner = curve_of_edge(m, curves);
    BracketMatrix M;
    M.eps = eps;
    std::map<int, int> row;
    for (const PantsAttachment& a : att) {
        row[a.blue_curve] = static_cast<int>(M.blue.size());
        M.blue.push_back(a.blue_curve);
    }
    const int n = static_cast<int>(M.blue.size());
    M.entry.assign(n, std::vector<double>(n, 0.0));
    const double c = std::cos(eps);
    for (int col = 0; col < n; ++col) {
        const PantsAttachment& a = att[col];
        const std::vector<double> omega = pants_metrics(a.k, eps).omega;
        M.entry[col][col] += c; // half of the 2 cos eps from b itself
        for (int i = 1; i < a.k; ++i) {
            const double term = 0.5 * (c - std::cos(omega[i - 1]));
            for (int e : {a.b_edges[i - 1], a.b_prime_edges[i - 1]}) {
                const auto it = row.find(owner[e]);
                if (it == row.end()) throw Error(ErrorKind::AxiomViolation, "pants edge " + std::to_string(e) + " is not blue");
                M.entry[it->second][col] += term;
            }
        }
    }
    return M;
}

double determinant(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (a[piv][k] == 0.0) return 0.0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

double singular_lower_bound(const std::vector<std::vector<double>>& m) {
    // Gauss-Jordan on [M | I]
    const std::size_t n = m.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(m[i].begin(), m[i].end(), a[i].begin());
        a[i][n + i] = 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (a[piv][k] == 0.0) return 0.0;
        std::swap(a[piv], a[k]);
        const double d = a[k][k];
        for (double& x : a[k]) x /= d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0.0) continue;
            const double f = a[i][k];
            for (std::size_t j = k; j < 2 * n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    double frob = 0.0;
    for (const auto& row : a)
        for (std::size_t j = n; j < 2 * n; ++j) frob += row[j] * row[j];
    return 1.0 / std::sqrt(frob);
}

BracketReport delta_scan(const CombMap& m, const std::vector<double>& grid, int workers) {
    if (grid.empty()) throw Error(ErrorKind::BadGrid, "empty eps grid");
    for (double e : grid)
        if (!(e > 0.0 && e < kPi)) throw Error(ErrorKind::BadGrid, "grid point outside (0, pi)");
    const std::vector<Curve> curves = extract_curves(m);
    const std::vector<PantsAttachment> att = attach_all(m, curves);

    BracketReport r;
    r.eps = grid;
    r.dimension = static_cast<int>(att.size());
    for (const auto& a : att) r.b_choice.push_back(a.b_half_edge);
    struct Row {
        double delta, deviation, sigma;
    };
    const auto rows = parallel_map(static_cast<int>(grid.size()), [&](int j) {
        const BracketMatrix M = bracket_matrix(m, curves, att, grid[j]);
        return Row{determinant(M.entry), M.max_deviation(), singular_lower_bound(M.entry)};
    }, workers);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        r.delta.push_back(rows[j].delta);
        r.deviation.push_back(rows[j].deviation);
        r.sigma_bound.push_back(rows[j].sigma);
        if (std::abs(grid[j] - kPi / 2) > kWitnessWindow) continue;
        if (std::abs(rows[j].delta) > kWitnessFloor) r.witnesses.push_back(grid[j]);
        if (rows[j].sigma > kWitnessFloor) r.certified.push_back(grid[j]);
    }
    return r;
}

CodimReport codim_report(const CombMap& m, const std::vector<Curve>& curves, const std::vector<int>& subset,
                         const BracketReport& report) {
    const FillingResult f = filling_check(m, curves, subset);
    if (!f.filling) {
        std::ostringstream os;
        os << "the " << subset.size() << " curves leave " << f.components << " regions, not all discs";
        throw Error(ErrorKind::NotFilling, os.str());
    }
    if (report.witnesses.empty() && report.certified.empty())
        throw Error(ErrorKind::NoWitness, "no eps near pi/2 with nonvanishing delta");
    CodimReport c;
    c.curves = static_cast<int>(subset.size());
    c.bound = c.curves - 1;
    c.genus = genus(m);
    c.comparison = 2 * c.genus - 1;
    if (!report.witnesses.empty()) {
        c.witnesses = report.witnesses;
        c.notes.push_back("conditional on nonvanishing witnesses");
    } else {
        c.witnesses = report.certified;
        c.notes.push_back("conditional on nonvanishing witnesses: |delta| stays below 1e-8 near pi/2, "
                          "nonvanishing is certified by a lower bound on the smallest singular value instead");
    }
    if (c.genus == 17)
        c.notes.push_back("printed bounds for genus 17 differ (33 in the statement, 32 in its proof); reported value is |c| - 1");
    return c;
}

namespace {

double bound_shape(long long g) {
    if (g <= 15) throw Error(ErrorKind::OutOfDomain, "g = " + std::to_string(g) + " needs ln ln ln g > 0, so g >= 16");
    const double x = static_cast<double>(g);
    return x / (std::sqrt(std::log(std::log(std::log(x)))) * std::sqrt(std::log(x)));
}

} // namespace

double bound_theorem1(long long g) { return 38.0 * bound_shape(g); }
double bound_im1(long long g) { return 57.0 * bound_shape(g); }

} // namespace hexspine
