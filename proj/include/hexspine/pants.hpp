#pragma once

#include <span>
#include <vector>

#include "hexspine/hplane.hpp"

namespace hexspine {

/// Metric data of the pair of pants built from 2k - 2 deformed hexagons around
/// two k-edge red boundary curves C, C' joined by an eps-edge.
struct PantsMetrics {
    int k = 0;
    double eps = 0.0;
    double L = 0.0;  // edge length
    double H = 0.0;  // common perpendicular of C and C'
    double d = 0.0;  // half-length of the third boundary D
    double h = 0.0;  // common perpendicular of C and D (= that of C' and D)
    double p0 = 0.0; // signed distance from the foot of H to the eps-edge
    std::vector<double> omega; // omega_1 .. omega_{k-1}
    bool log_space = false;

    double cosh_d() const;
};

/// Below this eps the closed forms are evaluated through log-cosh / log-sinh.
inline constexpr double kLogSpaceThreshold = 1e-3;

PantsMetrics pants_metrics(int k, double eps);

/// Angles between D and the blue arcs e_1..e_{k-1}, read off the developed
/// picture: the red line C as the base of an eps-pencil and D at distance h.
std::vector<double> omega_angles(int k, double eps);

/// Intermediate quantities of the right-triangle chain for omega_{k-1}.
struct OmegaChain {
    double a = 0;         // d(N, P_{k-1})
    double cosh_v = 0;    // diagonal from P_{k-1} to the foot of h on D
    double eps_minus = 0; // angle between C and the diagonal
    double eps_plus = 0;
    double gamma_minus = 0;
    double gamma_plus = 0;
    double omega = 0;
};

OmegaChain omega_last_chain(int k, double eps);
double omega_last_exact(int k, double eps);

/// Least-squares slope of log f against log eps.
double asymptotic_slope(std::span<const double> f, std::span<const double> eps_grid);

/// Dyadic-style geometric grid from hi down to lo (inclusive), n points.
std::vector<double> geometric_grid(double hi, double lo, int n);

} // namespace hexspine
