#pragma once

// Developing a tessellated surface with H(eps) tiles: one crossing isometry per
// half-edge, holonomy of dual-graph loops, and systole enumeration.
//
// Every face uses the same prototype hexagon in its own coordinates. The
// crossing isometry X_h carries coordinates of the face across h into those of
// face(h); a dual loop crossing h_1, ..., h_n (h_1 in the base face, h_{j+1} in
// the face reached after h_j) has holonomy X_{h_1} ... X_{h_n}.

#include <string>
#include <vector>

#include "hexspine/tess.hpp"

namespace hexspine {

struct DevelopedSurface {
    CombMap map;
    double eps = kPi / 2;
    HexagonGeometry hex;
    std::vector<Isometry> crossing;
    std::vector<Isometry> crossing_inverse;
    double closure_residual = 0.0; // worst vertex over the surface
    double side_residual = 0.0;    // worst endpoint mismatch of glued sides
    std::vector<int> curve_of;     // curve id per half-edge, empty unless all valences are four
};

/// Throws ClosureFailure naming the worst vertex when the four crossings around
/// it do not compose to the identity within tol.
DevelopedSurface develop(const CombMap& m, double eps, double tol = 1e-9);

/// Checks that consecutive crossings chain through faces and close up.
void check_loop(const CombMap& m, const std::vector<int>& word);
Isometry holonomy(const DevelopedSurface& s, const std::vector<int>& word);

struct LoopClass {
    std::vector<int> word;
    Isometry holonomy;
    IsometryKind kind = IsometryKind::identity;
    double length = 0.0;
};

/// Throws OrientationReversing if the holonomy reverses orientation.
LoopClass make_loop(const DevelopedSurface& s, const std::vector<int>& word);
double loop_length(const DevelopedSurface& s, const std::vector<int>& word);

/// Dual loop running alongside a curve, just to its left.
std::vector<int> curve_loop(const CombMap& m, const Curve& c);
/// Dual loop given by decoration indices of the crossed sides, from start_face.
std::vector<int> loop_from_indices(const CombMap& m, int start_face, const std::vector<int>& indices);

struct AxisCrossing {
    int half_edge = 0;  // side of the face being left
    double angle = 0.0; // angle_at(axis, side line) at the crossing point
    double parameter = 0.0;
};

struct AxisTrace {
    int curve_id = -1; // set when the axis runs along a tessellation curve
    struct Chord {
        int face;
        Point from, to;
        double length;
    };
    std::vector<Chord> chords;
    std::vector<AxisCrossing> crossings;
    double precision = 0.0; // expected position error, grows with the holonomy's entries
};

/// Follows the closed geodesic of a hyperbolic loop once around the surface.
AxisTrace trace_axis(const DevelopedSurface& s, const std::vector<int>& word);

struct SystoleClass {
    double length = 0.0;
    std::vector<int> word; // shortest representative found
    int curve_id = -1;     // tessellation curve, or -1
    int representatives = 0;
};

struct SystoleCensus {
    int radius = 0;
    double min_length = 0.0;
    std::vector<SystoleClass> minimal;  // classes within 1e-7 of the minimum
    std::vector<SystoleClass> spectrum; // classes within the requested window, sorted
    long long walks = 0;
    std::string caveat;
};

/// Enumerates cyclically reduced dual loops with at most `radius` crossings.
SystoleCensus enumerate_systoles(const DevelopedSurface& s, int radius, double spectrum_window = 0.0);

struct LengthTrack {
    std::vector<double> eps;
    std::vector<std::vector<double>> length; // [loop][eps]
};

LengthTrack length_track(const CombMap& m, const std::vector<std::vector<int>>& loops, const std::vector<double>& eps_grid);

struct BolzaCrossing {
    double eps = 0.0;
    int iterations = 0;
    std::vector<int> competitor; // word of the competing class
    double competitor_length_at_root = 0.0;
};

/// Locates where the tessellation curves of a 2-regular map stop being shorter
/// than the competing family found at eps_low.
BolzaCrossing find_length_crossing(const CombMap& m, double eps_low = 0.6, double eps_high = 1.2, double tol = 1e-10);

/// Developed tiles around the base face in the Poincare disc.
std::string developed_svg(const DevelopedSurface& s, int depth = 2);

} // namespace hexspine
