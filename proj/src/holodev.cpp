#include "hexspine/holodev.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "hexspine/parallel.hpp"

namespace hexspine {

DevelopedSurface develop(const CombMap& m, double eps, double tol) {
    DevelopedSurface s;
    s.map = m;
    s.eps = eps;
    s.hex = build_hexagon(eps);
    const auto& v = s.hex.vertices;

    // frame at vertex p looking along side p, and at vertex p + 1 looking back
    std::array<Isometry, 6> along, back;
    for (int p = 0; p < 6; ++p) {
        along[p] = Isometry::frame(v[p], v[(p + 1) % 6]);
        back[p] = Isometry::frame(v[(p + 1) % 6], v[p]);
    }

    const int n = m.half_edge_count();
    s.crossing.resize(n);
    s.crossing_inverse.resize(n);
    for (int h = 0; h < n; ++h) {
        const int p = CombMap::pos(h), q = CombMap::pos(m.twin(h));
        // the neighbour's side q runs the other way along our side p
        s.crossing[h] = back[p] * along[q].inverse();
        s.crossing_inverse[h] = s.crossing[h].inverse();
        const double r = std::max(distance(s.crossing[h].apply(v[q]), v[(p + 1) % 6]),
                                  distance(s.crossing[h].apply(v[(q + 1) % 6]), v[p]));
        s.side_residual = std::max(s.side_residual, r);
    }

    int worst = -1;
    for (int x = 0; x < m.vertex_count(); ++x) {
        Isometry prod;
        int h = m.vertex_start(x);
        for (int j = 0; j < m.valence(x); ++j) {
            prod = prod * s.crossing[CombMap::prev(h)];
            h = m.rot(h);
        }
        const double r = prod.distance_from(Isometry::identity());
        if (worst < 0 || r > s.closure_residual) {
            s.closure_residual = r;
            worst = x;
        }
    }
    if (s.closure_residual > tol) {
        std::ostringstream os;
        os << "vertex " << worst << " (valence " << m.valence(worst) << ") does not close up, residual "
           << s.closure_residual;
        throw Error(ErrorKind::ClosureFailure, os.str());
    }

    bool regular = true;
    for (int x = 0; x < m.vertex_count(); ++x) regular = regular && m.valence(x) == 4;
    if (regular) {
        s.curve_of.assign(n, -1);
        for (const Curve& c : extract_curves(m))
            for (int h : c.half_edges) s.curve_of[h] = s.curve_of[m.twin(h)] = c.id;
    }
    return s;
}

void check_loop(const CombMap& m, const std::vector<int>& word) {
    if (word.empty()) throw Error(ErrorKind::MalformedMap, "empty loop");
    for (std::size_t j = 0; j < word.size(); ++j) {
        const int h = word[j];
        if (h < 0 || h >= m.half_edge_count()) throw Error(ErrorKind::MalformedMap, "half-edge out of range");
        const int reached = CombMap::face(m.twin(h));
        const int expect = CombMap::face(word[(j + 1) % word.size()]);
        if (reached != expect) {
            std::ostringstream os;
            os << "crossing " << j << " reaches face " << reached << " but the next crossing starts in face " << expect;
            throw Error(ErrorKind::MalformedMap, os.str());
        }
    }
}

Isometry holonomy(const DevelopedSurface& s, const std::vector<int>& word) {
    check_loop(s.map, word);
    Isometry acc;
    for (int h : word) acc = acc * s.crossing[h];
    return acc;
}

LoopClass make_loop(const DevelopedSurface& s, const std::vector<int>& word) {
    LoopClass l;
    l.word = word;
    l.holonomy = holonomy(s, word);
    // orientation is multiplicative; the factors are exact, the long product is not
    bool preserving = true;
    for (int h : word)
        if (!s.crossing[h].preserves_orientation()) preserving = !preserving;
    if (!preserving) throw Error(ErrorKind::OrientationReversing, "holonomy reverses orientation");
    l.kind = l.holonomy.classify();
    l.length = l.holonomy.translation_length();
    return l;
}

double loop_length(const DevelopedSurface& s, const std::vector<int>& word) { return make_loop(s, word).length; }

std::vector<int> curve_loop(const CombMap& m, const Curve& c) {
    (void)m;
    std::vector<int> w;
    for (int h : c.half_edges) w.push_back(CombMap::next(h));
    return w;
}

std::vector<int> loop_from_indices(const CombMap& m, int start_face, const std::vector<int>& indices) {
    std::vector<int> w;
    int f = start_face;
    for (int i : indices) {
        if (i < 1 || i > 6) throw Error(ErrorKind::OutOfRange, "decoration index must be 1..6");
        const int h = 6 * f + position_of(m.type(f), i);
        w.push_back(h);
        f = CombMap::face(m.twin(h));
    }
    if (f != start_face) throw Error(ErrorKind::MalformedMap, "index word does not return to its start face");
    return w;
}

// ---------------------------------------------------------------- axis tracing

namespace {

// Smallest t >= 0 at which g leaves the hexagon, and through which side.
std::pair<double, int> exit_of(const HexagonGeometry& hex, const Geodesic& g) {
    double best = INFINITY;
    int side = -1;
    for (int p = 0; p < 6; ++p) {
        const double a = mdot(g.base().v, hex.inward_normals[p]);
        const double b = mdot(g.tangent(), hex.inward_normals[p]);
        if (b >= -1e-13) continue; // not moving outwards
        const double r = std::max(0.0, -a / b);
        if (r >= 1.0) continue;
        const double t = std::atanh(r);
        if (t < best) {
            best = t;
            side = p;
        }
    }
    return {best, side};
}

// Axes of long words carry errors near 1e-8, so coincidence is judged loosely;
// a different closed geodesic cannot hug a side over a unit length this closely.
bool runs_along(const Geodesic& g, const Vec3& normal) {
    return std::abs(mdot(g.point_at(0).v, normal)) < 1e-6 && std::abs(mdot(g.point_at(1).v, normal)) < 1e-6;
}

} // namespace

AxisTrace trace_axis(const DevelopedSurface& s, const std::vector<int>& word) {
    const LoopClass loop = make_loop(s, word);
    if (loop.kind != IsometryKind::hyperbolic) throw Error(ErrorKind::DomainError, "loop is not hyperbolic");
    const CombMap& m = s.map;
    const HexagonGeometry& hex = s.hex;

    const auto nearest_origin = [](const Geodesic& a) {
        const double s0 = a.parameter_of(Point::origin());
        return Geodesic(a.point_at(s0), normalize_spacelike(a.tangent_at(s0)));
    };
    Geodesic g = nearest_origin(loop.holonomy.axis());
    int f = CombMap::face(word.front());
    Isometry to_local; // coordinates of the base face into those of f

    // bring the point nearest the origin into the closed hexagon of some face
    const auto reduce = [&] {
        for (int guard = 0;; ++guard) {
            if (guard > 10000) throw Error(ErrorKind::DomainError, "axis reduction does not terminate");
            int worst = -1;
            double most = -1e-9;
            for (int p = 0; p < 6; ++p) {
                const double a = mdot(g.base().v, hex.inward_normals[p]);
                if (a < most) {
                    most = a;
                    worst = p;
                }
            }
            if (worst < 0) break;
            const int h = 6 * f + worst;
            g = s.crossing_inverse[h].apply(g);
            to_local = s.crossing_inverse[h] * to_local;
            f = CombMap::face(m.twin(h));
        }
    };
    reduce();

    AxisTrace out;
    {
        double big = 0.0;
        for (double x : loop.holonomy.matrix()) big = std::max(big, std::abs(x));
        // rounding in the product, pulled back from the axis to the tile
        out.precision = 1e-6 + 1e-14 * big * big / std::exp(loop.length);
    }
    for (int p = 0; p < 6; ++p) {
        if (runs_along(g, hex.inward_normals[p])) {
            out.curve_id = s.curve_of.empty() ? -1 : s.curve_of[6 * f + p];
            return out;
        }
    }

    // start on the boundary so that the chords tile the closed geodesic exactly
    {
        const auto [tb, pb] = exit_of(hex, g.reversed());
        if (pb < 0) throw Error(ErrorKind::DomainError, "axis does not leave the tile");
        g = Geodesic(g.point_at(-tb), normalize_spacelike(g.tangent_at(-tb)));
    }

    double travelled = 0.0;
    for (int guard = 0; guard < 100000; ++guard) {
        const auto [t, p] = exit_of(hex, g);
        if (p < 0) throw Error(ErrorKind::DomainError, "axis does not leave the tile");
        const Point exit = g.point_at(t);
        if (!s.curve_of.empty() && std::abs(t - hex.side_length) < 1e-5 && std::abs(mdot(g.point_at(t / 2).v, hex.inward_normals[p])) < 1e-6) {
            // the chord covers side p from one end to the other
            out.curve_id = s.curve_of[6 * f + p];
            out.chords.clear();
            out.crossings.clear();
            return out;
        }
        out.chords.push_back({f, g.base(), exit, t});
        travelled += t;
        const Geodesic at_exit(exit, normalize_spacelike(g.tangent_at(t)));
        AxisCrossing c;
        c.half_edge = 6 * f + p;
        c.parameter = travelled;
        c.angle = angle_at(at_exit, hex.sides[p], exit, 1e-7).value;
        out.crossings.push_back(c);
        if (travelled >= loop.length - 1e-9) break;
        const int h = 6 * f + p;
        g = s.crossing_inverse[h].apply(at_exit);
        f = CombMap::face(m.twin(h));
    }
    return out;
}

// ---------------------------------------------------------------- systoles

namespace {

constexpr double kSameLength = 1e-7;

struct Candidate {
    double length;
    std::vector<int> word;
};

struct FaceSearch {
    std::vector<Candidate> found;
    double best = INFINITY;
    long long walks = 0;
};

FaceSearch search_from(const DevelopedSurface& s, int f0, int radius, double window) {
    const CombMap& m = s.map;
    FaceSearch fs;
    std::vector<int> word;
    std::vector<Isometry> prefix{Isometry::identity()};
    const double keep = std::max(window, kSameLength);

    // iterative DFS over non-backtracking walks starting in f0
    std::vector<int> choice{0};
    while (!choice.empty()) {
        const int depth = static_cast<int>(choice.size()) - 1;
        if (choice.back() >= 6) {
            choice.pop_back();
            if (!word.empty()) {
                word.pop_back();
                prefix.pop_back();
            }
            if (!choice.empty()) ++choice.back();
            continue;
        }
        const int f = depth == 0 ? f0 : CombMap::face(m.twin(word.back()));
        const int h = 6 * f + choice.back();
        if (depth > 0 && h == m.twin(word.back())) {
            ++choice.back();
            continue;
        }
        word.push_back(h);
        prefix.push_back(prefix.back() * s.crossing[h]);
        ++fs.walks;
        const bool closes = CombMap::face(m.twin(h)) == f0 && m.twin(h) != word.front();
        if (closes) {
            const double tr = prefix.back().trace();
            if (tr > 3.0 + 1e-9) {
                const double len = std::acosh(0.5 * (tr - 1.0));
                if (len < fs.best - kSameLength) {
                    fs.best = len;
                    std::erase_if(fs.found, [&](const Candidate& c) { return c.length > len + keep; });
                }
                if (len <= fs.best + keep) fs.found.push_back({len, word});
            }
        }
        if (static_cast<int>(word.size()) < radius) {
            choice.push_back(0);
        } else {
            word.pop_back();
            prefix.pop_back();
            ++choice.back();
        }
    }
    return fs;
}

bool same_chord(const AxisTrace::Chord& a, const AxisTrace::Chord& b, double tol) {
    if (a.face != b.face) return false;
    const bool fwd = distance(a.from, b.from) < tol && distance(a.to, b.to) < tol;
    const bool rev = distance(a.from, b.to) < tol && distance(a.to, b.from) < tol;
    return fwd || rev;
}

bool same_class(const AxisTrace& a, const AxisTrace& b) {
    if (a.curve_id >= 0 || b.curve_id >= 0) return a.curve_id == b.curve_id;
    const double tol = a.precision + b.precision;
    for (const auto& ca : a.chords) {
        if (ca.length < tol) continue;
        for (const auto& cb : b.chords)
            if (same_chord(ca, cb, tol)) return true;
        return false; // the first long chord of a must appear in b
    }
    return false;
}

} // namespace

SystoleCensus enumerate_systoles(const DevelopedSurface& s, int radius, double spectrum_window) {
    if (radius < 1) throw Error(ErrorKind::OutOfRange, "radius must be positive");
    const int nf = s.map.face_count();
    auto per_face = parallel_map(nf, [&](int f) { return search_from(s, f, radius, spectrum_window); });

    SystoleCensus census;
    census.radius = radius;
    double best = INFINITY;
    for (const auto& fs : per_face) {
        best = std::min(best, fs.best);
        census.walks += fs.walks;
    }
    census.min_length = best;
    const double keep = std::max(spectrum_window, kSameLength);
    std::vector<Candidate> cands;
    for (auto& fs : per_face)
        for (auto& c : fs.found)
            if (c.length <= best + keep) cands.push_back(std::move(c));
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (std::abs(a.length - b.length) > kSameLength) return a.length < b.length;
        return a.word.size() < b.word.size();
    });

    std::vector<AxisTrace> traces;
    std::vector<SystoleClass> classes;
    for (const Candidate& c : cands) {
        const AxisTrace t = trace_axis(s, c.word);
        bool matched = false;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            if (std::abs(classes[i].length - c.length) > kSameLength) continue;
            if (same_class(t, traces[i])) {
                classes[i].representatives++;
                matched = true;
                break;
            }
        }
        if (!matched) {
            classes.push_back({c.length, c.word, t.curve_id, 1});
            traces.push_back(t);
        }
    }
    std::stable_sort(classes.begin(), classes.end(),
                     [](const SystoleClass& a, const SystoleClass& b) { return a.length < b.length - kSameLength; });
    for (const auto& c : classes)
        if (c.length <= best + kSameLength) census.minimal.push_back(c);
    census.spectrum = classes;
    std::ostringstream os;
    os << "verified up to radius " << radius << " crossings";
    census.caveat = os.str();
    return census;
}

LengthTrack length_track(const CombMap& m, const std::vector<std::vector<int>>& loops, const std::vector<double>& eps_grid) {
    LengthTrack out;
    out.eps = eps_grid;
    out.length.assign(loops.size(), std::vector<double>(eps_grid.size()));
    auto cols = parallel_map(static_cast<int>(eps_grid.size()), [&](int j) {
        const DevelopedSurface s = develop(m, eps_grid[j]);
        std::vector<double> col;
        for (const auto& w : loops) col.push_back(loop_length(s, w));
        return col;
    });
    for (std::size_t j = 0; j < eps_grid.size(); ++j)
        for (std::size_t i = 0; i < loops.size(); ++i) out.length[i][j] = cols[j][i];
    return out;
}

BolzaCrossing find_length_crossing(const CombMap& m, double eps_low, double eps_high, double tol) {
    const auto curves = extract_curves(m);
    const std::vector<int> tess = curve_loop(m, curves.front());

    const SystoleCensus low = enumerate_systoles(develop(m, eps_low), 8);
    const SystoleClass* comp = nullptr;
    for (const auto& c : low.minimal)
        if (c.curve_id < 0) {
            comp = &c;
            break;
        }
    if (!comp) throw Error(ErrorKind::NoWitness, "no competing class is minimal at the lower end");

    BolzaCrossing out;
    out.competitor = comp->word;
    auto gap = [&](double e) {
        const DevelopedSurface s = develop(m, e);
        return loop_length(s, tess) - loop_length(s, out.competitor);
    };
    double lo = eps_low, hi = eps_high;
    double glo = gap(lo);
    const double ghi = gap(hi);
    if (!(glo > 0.0 && ghi < 0.0)) throw Error(ErrorKind::DomainError, "length difference does not change sign on the bracket");
    while (hi - lo > tol && out.iterations < 200) {
        const double mid = 0.5 * (lo + hi);
        const double gm = gap(mid);
        if (gm > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        ++out.iterations;
    }
    out.eps = 0.5 * (lo + hi);
    out.competitor_length_at_root = loop_length(develop(m, out.eps), out.competitor);
    return out;
}

// ---------------------------------------------------------------- SVG

std::string developed_svg(const DevelopedSurface& s, int depth) {
    const CombMap& m = s.map;
    const double size = 600.0, r = 280.0;
    auto disc = [&](const Point& p) {
        const double x = p.v.x / (1.0 + p.v.z), y = p.v.y / (1.0 + p.v.z);
        return std::pair<double, double>{size / 2 + r * x, size / 2 - r * y};
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    os << "<circle cx=\"" << size / 2 << "\" cy=\"" << size / 2 << "\" r=\"" << r << "\" fill=\"none\" stroke=\"#999\"/>\n";

    struct Tile {
        int face;
        Isometry place;
        int depth;
    };
    std::vector<Tile> queue{{0, Isometry::identity(), 0}};
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const Tile t = queue[q];
        for (int p = 0; p < 6; ++p) {
            const Point a = t.place.apply(s.hex.vertices[p]);
            const Point b = t.place.apply(s.hex.vertices[(p + 1) % 6]);
            const Geodesic g = Geodesic::through(a, b);
            const double len = distance(a, b);
            os << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\""
               << (s.hex.colours[p] == Colour::red ? "#c0392b" : "#2e6fbf") << "\" points=\"";
            for (int k = 0; k <= 16; ++k) {
                const auto [x, y] = disc(g.point_at(len * k / 16.0));
                os << x << ',' << y << ' ';
            }
            os << "\"/>\n";
            if (t.depth < depth) {
                const int h = 6 * t.face + p;
                queue.push_back({CombMap::face(m.twin(h)), t.place * s.crossing[h], t.depth + 1});
            }
        }
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace hexspine
