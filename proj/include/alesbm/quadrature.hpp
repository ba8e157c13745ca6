#pragma once

#include <vector>

namespace alesbm {

/// Quadrature node on the reference triangle (0,0)-(1,0)-(0,1).
/// Weights include the reference area, i.e. sum(w) = 1/2 and
/// integral_{T_e} f = sum_i w_i f(xi_i, eta_i) for exact rules.
struct TriQuadPoint {
    double xi;
    double eta;
    double w;
};

/// Symmetric Gauss rule on the reference triangle, exact for all
/// polynomials of total degree <= `degree`. Rules with positive weights
/// are shipped for degrees up to 8; requests in between are served by
/// the next stronger rule.
const std::vector<TriQuadPoint>& triangle_rule(int degree);

/// Gauss-Legendre node on [0,1]; sum(w) = 1.
struct LineQuadPoint {
    double x;
    double w;
};

/// n-point Gauss-Legendre rule mapped to [0,1], 1 <= n <= 8.
const std::vector<LineQuadPoint>& gauss_legendre(int npoints);

/// Smallest point count whose Gauss-Legendre rule integrates the given
/// polynomial degree exactly (2n-1 >= degree).
int gauss_points_for_degree(int degree);

} // namespace alesbm
