#pragma once

// Dual functions of blue curves: the pair of pants attached to a blue edge, the
// bracket matrix M(eps) of blue curves against their duals, its determinant and
// the codimension bound it supports.

#include <string>
#include <vector>

#include "hexspine/holodev.hpp"

namespace hexspine {

/// Pants glued along the red curves R, R' through the ends Q, Q' of a blue edge b.
/// b_edges[i - 1] is the edge b_i starting at the i-th point of R counted
/// anticlockwise from Q on the side of b; likewise b_prime_edges on R'.
struct PantsAttachment {
    int blue_curve = -1;
    int b_half_edge = -1; // runs from Q to Q'
    int red = -1, red_prime = -1;
    int k = 0;
    std::vector<int> b_edges, b_prime_edges;
    /// Dual loop parallel to the third boundary. It first crosses b_{k-1}, ..., b_1
    /// beside R, then b'_{k-1}, ..., b'_1 beside R'.
    std::vector<int> d_word;
    /// For each crossing of d_word: i, negated for the primed edges.
    std::vector<int> d_labels;
};

/// Throws AxiomViolation unless AX1-AX5 hold, KTooSmall when k < 3.
void require_dual_axioms(const CombMap& m);

/// b_half_edge < 0 picks the smallest half-edge id on the curve.
PantsAttachment attach_pants(const CombMap& m, const std::vector<Curve>& curves, int blue_curve, int b_half_edge = -1);
std::vector<PantsAttachment> attach_all(const CombMap& m, const std::vector<Curve>& curves);

/// Angle between the axis of D_b and each crossed side, in d_word order. Each is
/// measured on the word rotated to start at that crossing, so no error is carried
/// along the loop.
std::vector<double> d_crossing_angles(const DevelopedSurface& s, const PantsAttachment& a);

struct BracketMatrix {
    double eps = 0.0;
    std::vector<int> blue; // curve id of each row and column
    std::vector<std::vector<double>> entry; // entry[A][B] = {L(A), L(B*)}
    double max_deviation() const; // max |M - Id|
};

BracketMatrix bracket_matrix(const CombMap& m, const std::vector<Curve>& curves, const std::vector<PantsAttachment>& att,
                             double eps);

/// LU with partial pivoting.
double determinant(std::vector<std::vector<double>> a);
/// 1 / |M^-1|_F, a lower bound for the smallest singular value; 0 when singular.
double singular_lower_bound(const std::vector<std::vector<double>>& a);

struct BracketReport {
    std::vector<double> eps;
    std::vector<double> delta;
    std::vector<double> deviation; // max |M - Id| per grid point
    std::vector<double> sigma_bound; // singular_lower_bound of M per grid point
    std::vector<double> witnesses; // sampled eps within 0.2 of pi/2 with |delta| > 1e-8
    // Sampled eps within 0.2 of pi/2 where sigma_bound > 1e-8: M is certainly
    // nonsingular even when delta, a product of all singular values, is tiny.
    std::vector<double> certified;
    std::vector<int> b_choice;     // chosen half-edge per blue curve
    int dimension = 0;
};

BracketReport delta_scan(const CombMap& m, const std::vector<double>& grid, int workers = 0);

struct CodimReport {
    int curves = 0;
    int bound = 0;      // |c| - 1
    int comparison = 0; // 2g - 1
    int genus = 0;
    std::vector<double> witnesses;
    std::vector<std::string> notes;
};

/// Throws NotFilling when the subset leaves a non-disc region, NoWitness when
/// the report has neither a witness nor a certified sample near pi/2.
CodimReport codim_report(const CombMap& m, const std::vector<Curve>& curves, const std::vector<int>& subset,
                         const BracketReport& report);

/// Systole-count bounds for large genus; OutOfDomain for g <= 15.
double bound_theorem1(long long g);
double bound_im1(long long g);

} // namespace hexspine
