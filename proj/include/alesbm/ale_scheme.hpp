#pragma once

#include <vector>

#include "alesbm/euler.hpp"
#include "alesbm/mesh.hpp"

namespace alesbm {

/// Quadrature point on the bilinear space-time surface swept by a moving
/// edge. chi parameterizes the edge, tau the slab. The spatial unit normal
/// points outward from the left cell; `measure` is the quadrature-weighted
/// space-time area of the spatial normal components (it integrates to
/// edge length x dt for a static edge). Reference coordinates of the point
/// inside the adjacent cells are constant in tau because the point moves
/// with fixed barycentric weights.
struct FaceQuadPoint {
    double chi;
    double tau;
    Vec2 xt;       ///< physical position at slab time t^n + tau dt
    Vec2 n;        ///< spatial unit normal (outward from left cell)
    double vn;     ///< mesh normal speed of the surface at this point
    double measure;
    Vec2 ref_left;
    Vec2 ref_right; ///< valid only for interior edges
};

struct SpaceTimeFace {
    int edge;
    std::vector<FaceQuadPoint> qp;
};

/// Gauss points on the ruled surface of one edge over [t^n, t^n + dt].
SpaceTimeFace face_geometry(const TriMesh& mesh, int edge, const std::vector<Vec2>& velocity,
                            double dt, int n_chi, int n_tau);

/// Osher-type ALE flux per unit spatial face measure:
/// 1/2 (F(q+) + F(q-)).n - vn/2 (q+ + q-) - 1/2 int_0^1 |A_n^V(Psi(s))| ds (q+ - q-)
/// along the straight segment Psi(s) = q- + s (q+ - q-), with the path
/// integral approximated by `npath` Gauss-Legendre points.
State osher_flux(const State& qm, const State& qp, const Vec2& n, double vn, const GasModel& gas,
                 int npath = 3);

/// One-step ALE finite-volume update of a single cell:
/// |T^{n+1}| Q^{n+1} = |T^n| Q^n - sum(fluxes) + source integral.
/// Throws on loss of positivity, naming the cell.
State fv_update(const State& qn, double area_n, double area_np1, const State& flux_sum,
                const State& source_integral, const GasModel& gas, long step = -1,
                long cell = -1);

/// CFL time step: cfl * min_i(incircle diameter / max face signal speed)
/// / (2M+1), capped by halving until no triangle inverts along the linear
/// vertex paths. Throws when dt underflows below 1e-14 * t_scale.
double compute_timestep(const TriMesh& mesh, const std::vector<State>& averages,
                        const std::vector<Vec2>& velocity, double cfl, int M,
                        const GasModel& gas, double t_scale = 1.0, long step = -1);

/// Minimum of the (quadratic in tau) triangle area along the slab; used
/// by the inversion cap and exposed for tests.
double min_area_in_slab(const Vec2& x0, const Vec2& x1, const Vec2& x2, const Vec2& v0,
                        const Vec2& v1, const Vec2& v2, double dt);

} // namespace alesbm
