#include "hexspine/tess.hpp"

#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace hexspine {

const char* to_string(TileType t) { return t == TileType::H ? "H" : "Hbar"; }

int index_at(TileType t, int pos) { return t == TileType::H ? pos + 1 : (6 - pos) % 6 + 1; }

int position_of(TileType t, int index) { return t == TileType::H ? index - 1 : (7 - index) % 6; }

// ---------------------------------------------------------------- CombMap

CombMap::CombMap(std::vector<int> twin, std::vector<TileType> types, bool indexed)
    : twin_(std::move(twin)), types_(std::move(types)), indexed_(indexed) {
    const int n = static_cast<int>(twin_.size());
    if (types_.empty() || n != 6 * static_cast<int>(types_.size()))
        throw Error(ErrorKind::MalformedMap, "need six half-edges per face");
    for (int h = 0; h < n; ++h) {
        const int t = twin_[h];
        if (t < 0 || t >= n || t == h || twin_[t] != h) {
            std::ostringstream os;
            os << "half-edge " << h << " has no valid twin";
            throw Error(ErrorKind::MalformedMap, os.str());
        }
    }
    vertex_of_.assign(n, -1);
    for (int h = 0; h < n; ++h) {
        if (vertex_of_[h] >= 0) continue;
        const int v = static_cast<int>(vertex_start_.size());
        int count = 0;
        int x = h;
        do {
            vertex_of_[x] = v;
            x = rot(x);
            ++count;
        } while (x != h);
        vertex_start_.push_back(h);
        valence_.push_back(count);
    }
}

bool CombMap::connected() const {
    std::vector<char> seen(face_count(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int f = stack.back();
        stack.pop_back();
        for (int p = 0; p < 6; ++p) {
            const int g = face(twin_[6 * f + p]);
            if (!seen[g]) {
                seen[g] = 1;
                ++count;
                stack.push_back(g);
            }
        }
    }
    return count == face_count();
}

// ---------------------------------------------------------------- curves

int curve_successor(const CombMap& m, int h) {
    const int t = m.twin(h);
    if (m.valence(m.origin(t)) != 4) throw Error(ErrorKind::AxiomViolation, "curve continuation needs valence four");
    return m.rot(m.rot(t));
}

std::vector<Curve> extract_curves(const CombMap& m) {
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (m.valence(v) != 4) {
            std::ostringstream os;
            os << "vertex " << v << " has valence " << m.valence(v);
            throw Error(ErrorKind::AxiomViolation, os.str());
        }
    }
    std::vector<char> used(m.half_edge_count(), 0);
    std::vector<Curve> out;
    for (int h = 0; h < m.half_edge_count(); ++h) {
        if (used[h]) continue;
        Curve c;
        c.id = static_cast<int>(out.size());
        c.colour = m.colour(h);
        c.index = m.index(h);
        int x = h;
        do {
            c.half_edges.push_back(x);
            used[x] = used[m.twin(x)] = 1;
            if (m.index(x) != c.index) c.index = 0;
            x = curve_successor(m, x);
        } while (x != h && !used[x]);
        if (!m.indexed()) c.index = 0;
        out.push_back(std::move(c));
    }
    return out;
}

int genus(const CombMap& m) {
    if (!m.connected()) throw Error(ErrorKind::Disconnected, "map has several components");
    const int chi = m.vertex_count() - m.edge_count() + m.face_count();
    if (chi % 2 != 0 || chi > 2) throw Error(ErrorKind::MalformedMap, "Euler characteristic is not that of a closed oriented surface");
    return (2 - chi) / 2;
}

// ---------------------------------------------------------------- axioms

namespace {

template <class... Args>
std::string cat(const Args&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

void fail(AxiomResult& r, std::string w) {
    r.pass = false;
    if (r.witnesses.size() < 20) r.witnesses.push_back(std::move(w));
}

} // namespace

AxiomReport validate_axioms(const CombMap& m) {
    AxiomReport rep;
    auto& ax1 = rep.ax[0];
    auto& ax2 = rep.ax[1];
    auto& ax3 = rep.ax[2];
    auto& ax4 = rep.ax[3];
    auto& ax5 = rep.ax[4];

    for (int h = 0; h < m.half_edge_count(); ++h) {
        const int t = m.twin(h);
        if (h > t) continue;
        if (CombMap::face(h) == CombMap::face(t)) fail(ax1, cat("edge ", h, " glues face ", CombMap::face(h), " to itself"));
        if (m.colour(h) != m.colour(t)) fail(ax1, cat("edge ", h, " glues a red side to a blue side"));
        if (m.indexed() && m.index(h) != m.index(t)) fail(ax1, cat("edge ", h, " glues index ", m.index(h), " to index ", m.index(t)));
    }

    for (int v = 0; v < m.vertex_count(); ++v) {
        if (m.valence(v) != 4) {
            fail(ax2, cat("vertex ", v, " has valence ", m.valence(v)));
            continue;
        }
        const int h = m.vertex_start(v);
        if (m.colour(h) == m.colour(m.rot(h))) fail(ax2, cat("colours do not alternate at vertex ", v));
    }

    if (!ax2.pass) {
        for (auto* r : {&ax3, &ax4, &ax5}) fail(*r, "not evaluated: AX2 fails");
        return rep;
    }

    const auto curves = extract_curves(m);
    rep.k = curves.front().edge_count();
    for (const Curve& c : curves)
        if (c.edge_count() != rep.k) fail(ax3, cat("curve ", c.id, " has ", c.edge_count(), " edges, expected ", rep.k));
    if (!ax3.pass) rep.k = 0;

    // every vertex lies on exactly one red curve
    std::vector<int> red_curve(m.vertex_count(), -1);
    for (const Curve& c : curves)
        if (c.colour == Colour::red)
            for (int h : c.half_edges) red_curve[m.origin(h)] = c.id;

    for (int h = 0; h < m.half_edge_count(); ++h) {
        if (m.colour(h) != Colour::blue || h > m.twin(h)) continue;
        if (red_curve[m.origin(h)] == red_curve[m.target(h)])
            fail(ax4, cat("blue edge ", h, " meets red curve ", red_curve[m.origin(h)], " twice"));
    }

    // Sides: walking a red curve, the blue ray after the curve's outgoing
    // half-edge (anticlockwise) is on its left, the one before on its right.
    std::map<std::pair<int, int>, std::vector<int>> shared;
    for (const Curve& c : curves) {
        if (c.colour != Colour::red) continue;
        std::vector<int> left, right;
        for (int h : c.half_edges) {
            left.push_back(m.edge_of(m.rot(h)));
            right.push_back(m.edge_of(m.rot(m.rot(m.rot(h)))));
        }
        for (auto* side : {&left, &right}) {
            std::sort(side->begin(), side->end());
            side->erase(std::unique(side->begin(), side->end()), side->end());
            for (std::size_t i = 0; i < side->size(); ++i)
                for (std::size_t j = i + 1; j < side->size(); ++j) shared[{(*side)[i], (*side)[j]}].push_back(c.id);
        }
    }
    for (const auto& [pair, reds] : shared) {
        if (reds.size() > 1)
            fail(ax5, cat("blue edges ", pair.first, " and ", pair.second, " are on the same side of red curves ",
                          reds[0], " and ", reds[1]));
    }
    return rep;
}

// ---------------------------------------------------------------- filling

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

FillingResult filling_check(const CombMap& m, const std::vector<Curve>& curves, const std::vector<int>& curve_ids) {
    std::vector<char> cut(m.half_edge_count(), 0);
    for (int id : curve_ids)
        for (int h : curves.at(id).half_edges) cut[h] = cut[m.twin(h)] = 1;

    UnionFind uf(m.face_count());
    for (int h = 0; h < m.half_edge_count(); ++h)
        if (!cut[h]) uf.unite(CombMap::face(h), CombMap::face(m.twin(h)));

    std::map<int, int> comp_of_root;
    for (int f = 0; f < m.face_count(); ++f) comp_of_root.emplace(uf.find(f), static_cast<int>(comp_of_root.size()));
    const int nc = static_cast<int>(comp_of_root.size());
    auto comp = [&](int f) { return comp_of_root.at(uf.find(f)); };

    std::vector<int> faces(nc, 0), edges(nc, 0), sectors(nc, 0), corners(nc, 0);
    for (int f = 0; f < m.face_count(); ++f) faces[comp(f)]++;
    for (int h = 0; h < m.half_edge_count(); ++h) {
        // uncut edges are counted once, cut edges once per side
        if (cut[h] || h < m.twin(h)) edges[comp(CombMap::face(h))]++;
    }
    for (int v = 0; v < m.vertex_count(); ++v) {
        const int h0 = m.vertex_start(v);
        std::vector<int> rays;
        int x = h0;
        do {
            rays.push_back(x);
            x = m.rot(x);
        } while (x != h0);
        int cuts = 0;
        for (int r : rays) cuts += cut[r];
        if (cuts == 0) {
            sectors[comp(CombMap::face(h0))]++;
            continue;
        }
        for (int r : rays) {
            if (!cut[r]) continue;
            // sector starting at this ray, anticlockwise, lies in face(r)
            const int c = comp(CombMap::face(r));
            sectors[c]++;
            if (cuts >= 3) corners[c]++;
        }
    }

    FillingResult out;
    out.components = nc;
    out.filling = true;
    for (int c = 0; c < nc; ++c) {
        const int chi = sectors[c] - edges[c] + faces[c];
        out.euler.push_back(chi);
        out.polygon_sizes.push_back(corners[c]);
        if (chi != 1) out.filling = false;
    }
    return out;
}

SubsetSearch filling_subset_search(const CombMap& m, const std::vector<Curve>& curves, std::vector<int> start,
                                   int budget, std::uint32_t seed) {
    SubsetSearch out;
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    auto fills = [&](const std::vector<int>& s) {
        ++out.checks;
        return filling_check(m, curves, s).filling;
    };
    out.best = start;
    if (!fills(start)) return out;

    std::mt19937 rng(seed);
    auto greedy = [&](std::vector<int> s) {
        std::vector<int> order = s;
        std::shuffle(order.begin(), order.end(), rng);
        for (int c : order) {
            if (out.checks >= budget) break;
            std::vector<int> t;
            for (int x : s)
                if (x != c) t.push_back(x);
            if (fills(t)) s = std::move(t);
        }
        return s;
    };

    while (out.checks < budget) {
        std::vector<int> cur = greedy(start);
        // swap moves: drop two, add one from outside the set
        bool improved = true;
        while (improved && out.checks < budget) {
            improved = false;
            std::vector<int> outside;
            for (int c = 0; c < static_cast<int>(curves.size()); ++c)
                if (!std::binary_search(cur.begin(), cur.end(), c)) outside.push_back(c);
            for (std::size_t i = 0; i < cur.size() && !improved && out.checks < budget; ++i)
                for (std::size_t j = i + 1; j < cur.size() && !improved && out.checks < budget; ++j)
                    for (int add : outside) {
                        if (out.checks >= budget) break;
                        std::vector<int> t;
                        for (std::size_t q = 0; q < cur.size(); ++q)
                            if (q != i && q != j) t.push_back(cur[q]);
                        t.push_back(add);
                        std::sort(t.begin(), t.end());
                        if (fills(t)) {
                            cur = greedy(t);
                            std::sort(cur.begin(), cur.end());
                            improved = true;
                            break;
                        }
                    }
        }
        std::sort(cur.begin(), cur.end());
        if (cur.size() < out.best.size()) out.best = cur;
    }
    return out;
}

// ---------------------------------------------------------------- Coxeter quotients

CombMap coxeter_map(const std::vector<std::uint32_t>& sigma) {
    if (sigma.size() != 6) throw Error(ErrorKind::InvalidHomomorphism, "need images of the six reflections");
    for (int i = 0; i < 6; ++i)
        if (sigma[i] == 0) throw Error(ErrorKind::InvalidHomomorphism, cat("s", i + 1, " maps to the identity"));
    for (int i = 0; i < 6; ++i)
        if (sigma[i] == sigma[(i + 1) % 6])
            throw Error(ErrorKind::InvalidHomomorphism, cat("s", i + 1, " s", (i + 1) % 6 + 1, " maps to the identity, vertices collapse"));

    std::vector<std::uint32_t> elems{0};
    std::unordered_map<std::uint32_t, int> id{{0u, 0}};
    std::vector<int> parity{0};
    for (std::size_t q = 0; q < elems.size(); ++q) {
        for (int i = 0; i < 6; ++i) {
            const std::uint32_t g = elems[q] ^ sigma[i];
            auto it = id.find(g);
            if (it == id.end()) {
                id.emplace(g, static_cast<int>(elems.size()));
                elems.push_back(g);
                parity.push_back(1 - parity[q]);
            } else if (parity[it->second] == parity[q]) {
                throw Error(ErrorKind::InvalidHomomorphism, "no orientation character: an odd word maps to the identity");
            }
        }
    }
    const int nf = static_cast<int>(elems.size());
    std::vector<TileType> types(nf);
    for (int f = 0; f < nf; ++f) types[f] = parity[f] == 0 ? TileType::H : TileType::Hbar;
    std::vector<int> twin(6 * nf);
    for (int f = 0; f < nf; ++f) {
        for (int i = 1; i <= 6; ++i) {
            const int g = id.at(elems[f] ^ sigma[i - 1]);
            twin[6 * f + position_of(types[f], i)] = 6 * g + position_of(types[g], i);
        }
    }
    CombMap m(std::move(twin), std::move(types), true);
    for (int v = 0; v < m.vertex_count(); ++v)
        if (m.valence(v) != 4) throw Error(ErrorKind::InvalidHomomorphism, cat("vertex ", v, " has valence ", m.valence(v)));
    return m;
}

CombMap preset_gen17() {
    std::vector<std::uint32_t> sigma;
    for (int i = 0; i < 6; ++i) sigma.push_back(1u << i);
    return coxeter_map(sigma);
}

Gen2Search search_gen2() {
    Gen2Search out;
    std::set<std::vector<std::uint32_t>> classes;
    const std::uint32_t perms[6][4] = {{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1}};
    std::vector<std::uint32_t> s(6);
    for (int code = 0; code < 729; ++code) {
        int c = code;
        for (int i = 0; i < 6; ++i) {
            s[i] = static_cast<std::uint32_t>(c % 3 + 1);
            c /= 3;
        }
        CombMap m;
        try {
            m = coxeter_map(s);
        } catch (const Error&) {
            continue;
        }
        if (m.face_count() != 4 || genus(m) != 2) continue;
        const AxiomReport rep = validate_axioms(m);
        if (!rep.ax[0].pass || !rep.ax[1].pass || !rep.ax[2].pass) continue;
        if (out.valid_maps == 0) {
            out.map = m;
            out.sigma = s;
        }
        ++out.valid_maps;
        // automorphisms of (Z/2)^2 permute its three nonzero elements
        std::vector<std::uint32_t> best;
        for (const auto& p : perms) {
            std::vector<std::uint32_t> t(6);
            for (int i = 0; i < 6; ++i) t[i] = p[s[i]];
            if (best.empty() || t < best) best = t;
        }
        classes.insert(best);
    }
    out.up_to_automorphism = static_cast<int>(classes.size());
    if (out.valid_maps == 0) throw Error(ErrorKind::InvalidHomomorphism, "no genus-2 quotient found");
    return out;
}

CombMap preset_gen2() { return search_gen2().map; }

CombMap preset(const std::string& name) {
    if (name == "gen17") return preset_gen17();
    if (name == "gen2") return preset_gen2();
    throw Error(ErrorKind::OutOfRange, "unknown preset '" + name + "'");
}

// ---------------------------------------------------------------- JSON

std::string map_to_json(const CombMap& m) {
    using nlohmann::json;
    json faces = json::array();
    for (int f = 0; f < m.face_count(); ++f) {
        json idx = json::array();
        for (int p = 0; p < 6; ++p) idx.push_back(m.index(6 * f + p));
        faces.push_back({{"id", f}, {"type", to_string(m.type(f))}, {"indices", idx}});
    }
    json gluing = json::array();
    for (int h = 0; h < m.half_edge_count(); ++h) {
        const int t = m.twin(h);
        if (h > t) continue;
        gluing.push_back({{"face", CombMap::face(h)},
                          {"side", CombMap::pos(h)},
                          {"to_face", CombMap::face(t)},
                          {"to_side", CombMap::pos(t)},
                          {"colour", to_string(m.colour(h))}});
    }
    json doc{{"format", "hexspine-map"}, {"version", 1}, {"indexed", m.indexed()}, {"faces", faces}, {"gluing", gluing}};
    return doc.dump(2);
}

CombMap map_from_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedMap, std::string("invalid JSON: ") + e.what());
    }
    try {
        const auto& faces = doc.at("faces");
        const int nf = static_cast<int>(faces.size());
        if (nf == 0) throw Error(ErrorKind::MalformedMap, "no faces");
        std::vector<TileType> types(nf, TileType::H);
        for (const auto& f : faces) {
            const int id = f.at("id").get<int>();
            if (id < 0 || id >= nf) throw Error(ErrorKind::MalformedMap, "face id out of range");
            const std::string t = f.value("type", "H");
            if (t != "H" && t != "Hbar") throw Error(ErrorKind::MalformedMap, "unknown tile type " + t);
            types[id] = t == "H" ? TileType::H : TileType::Hbar;
        }
        std::vector<int> twin(6 * nf, -1);
        for (const auto& g : doc.at("gluing")) {
            const int f = g.at("face").get<int>(), p = g.at("side").get<int>();
            const int tf = g.at("to_face").get<int>(), tp = g.at("to_side").get<int>();
            if (f < 0 || f >= nf || tf < 0 || tf >= nf || p < 0 || p > 5 || tp < 0 || tp > 5)
                throw Error(ErrorKind::MalformedMap, "gluing entry out of range");
            if (g.contains("colour") && g.at("colour").get<std::string>() != to_string(HexagonGeometry::colour_at(p)))
                throw Error(ErrorKind::MalformedMap, cat("colour of face ", f, " side ", p, " does not match its position"));
            const int a = 6 * f + p, b = 6 * tf + tp;
            if (twin[a] != -1 || twin[b] != -1) throw Error(ErrorKind::MalformedMap, cat("side ", p, " of face ", f, " glued twice"));
            twin[a] = b;
            twin[b] = a;
        }
        for (int h = 0; h < 6 * nf; ++h)
            if (twin[h] == -1) throw Error(ErrorKind::MalformedMap, cat("side ", h % 6, " of face ", h / 6, " is not glued"));
        return CombMap(std::move(twin), std::move(types), doc.value("indexed", true));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedMap, std::string("bad map document: ") + e.what());
    }
}

} // namespace hexspine
