#pragma once

// Hexagonal tessellations of closed oriented surfaces as half-edge maps.
//
// Every face is a hexagon whose sides are numbered by position p = 0..5
// anticlockwise; half-edge 6f + p runs along side p of face f from vertex p to
// vertex p + 1, with the face on its left. Even positions are red, odd blue.
// Each face carries a type: H faces put decoration index p + 1 at position p,
// Hbar faces reverse the cyclic order of indices.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hexspine/hexagon.hpp"

namespace hexspine {

enum class TileType { H, Hbar };
const char* to_string(TileType t);

/// Decoration index (1..6) at position p of a tile of the given type.
int index_at(TileType t, int pos);
/// Position carrying decoration index i.
int position_of(TileType t, int index);

class CombMap {
public:
    CombMap() = default;
    /// twin has one entry per half-edge (6 per face). Checks the involution and
    /// derives vertices; colour consistency is left to validate_axioms.
    CombMap(std::vector<int> twin, std::vector<TileType> types, bool indexed = true);

    int face_count() const { return static_cast<int>(types_.size()); }
    int half_edge_count() const { return static_cast<int>(twin_.size()); }
    int edge_count() const { return half_edge_count() / 2; }
    int vertex_count() const { return static_cast<int>(vertex_start_.size()); }

    static int face(int h) { return h / 6; }
    static int pos(int h) { return h % 6; }
    static int next(int h) { return h - h % 6 + (h % 6 + 1) % 6; }
    static int prev(int h) { return h - h % 6 + (h % 6 + 5) % 6; }
    int twin(int h) const { return twin_[h]; }
    /// Next outgoing half-edge anticlockwise around the origin of h.
    int rot(int h) const { return twin_[prev(h)]; }
    int origin(int h) const { return vertex_of_[h]; }
    int target(int h) const { return vertex_of_[next(h)]; }
    /// Undirected edge id: the smaller of the two half-edge ids.
    int edge_of(int h) const { return std::min(h, twin_[h]); }

    TileType type(int f) const { return types_[f]; }
    bool indexed() const { return indexed_; }
    int index(int h) const { return index_at(types_[face(h)], pos(h)); }
    Colour colour(int h) const { return HexagonGeometry::colour_at(pos(h)); }

    /// Some outgoing half-edge at vertex v, and the vertex valence.
    int vertex_start(int v) const { return vertex_start_[v]; }
    int valence(int v) const { return valence_[v]; }

    bool connected() const;

private:
    std::vector<int> twin_;
    std::vector<TileType> types_;
    bool indexed_ = true;
    std::vector<int> vertex_of_;
    std::vector<int> vertex_start_;
    std::vector<int> valence_;
};

struct Curve {
    int id = 0;
    Colour colour = Colour::red;
    int index = 0;              // common decoration index, 0 when not uniform
    std::vector<int> half_edges; // directed along the curve
    int edge_count() const { return static_cast<int>(half_edges.size()); }
};

/// Continuation of a curve through the target vertex of h (valence 4).
int curve_successor(const CombMap& m, int h);

std::vector<Curve> extract_curves(const CombMap& m);

int genus(const CombMap& m);

struct AxiomResult {
    bool pass = true;
    std::vector<std::string> witnesses;
};

struct AxiomReport {
    AxiomResult ax[5];
    int k = 0; // common curve length when AX3 holds
    bool all() const { return ax[0].pass && ax[1].pass && ax[2].pass && ax[3].pass && ax[4].pass; }
};

AxiomReport validate_axioms(const CombMap& m);

struct FillingResult {
    bool filling = false;
    int components = 0;
    std::vector<int> euler;         // per component
    std::vector<int> polygon_sizes; // corners per component
};

/// curve_ids refer to the vector returned by extract_curves(m).
FillingResult filling_check(const CombMap& m, const std::vector<Curve>& curves, const std::vector<int>& curve_ids);

struct SubsetSearch {
    std::vector<int> best;
    int checks = 0;
};

/// Greedy removal plus swap moves from `start`, bounded by `budget` filling checks.
SubsetSearch filling_subset_search(const CombMap& m, const std::vector<Curve>& curves, std::vector<int> start,
                                   int budget, std::uint32_t seed = 20240601u);

/// Faces are the elements of the subgroup of (Z/2)^n spanned by sigma[i] (bitmasks),
/// face g glued across index i + 1 to face g ^ sigma[i].
CombMap coxeter_map(const std::vector<std::uint32_t>& sigma);

CombMap preset_gen17();

struct Gen2Search {
    CombMap map;
    std::vector<std::uint32_t> sigma;
    int valid_maps = 0;  // homomorphisms to (Z/2)^2 passing all checks
    int up_to_automorphism = 0;
};

Gen2Search search_gen2();
CombMap preset_gen2();

/// "gen2" or "gen17"; throws OutOfRange otherwise.
CombMap preset(const std::string& name);

std::string map_to_json(const CombMap& m);
CombMap map_from_json(const std::string& text);

} // namespace hexspine
