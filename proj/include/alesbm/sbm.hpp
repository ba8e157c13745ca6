#pragma once

#include <functional>
#include <optional>

#include "alesbm/boundary_geometry.hpp"
#include "alesbm/euler.hpp"

namespace alesbm {

/// Exact-state provider g(x, t) for Dirichlet conditions.
using ExactStateFn = std::function<PrimitiveState(const Vec2&, double)>;

/// Evaluator of the owning cell's polynomial (reconstruction at t^n or the
/// space-time predictor trace at slab time t) at a physical point; the
/// affine cell map makes off-element evaluation unambiguous.
using CellPolyEval = std::function<State(const Vec2&)>;

/// Boundary condition bound to one boundary tag.
struct BCSpec {
    enum class Kind { DirichletExact, SlipWall };
    Kind kind = Kind::DirichletExact;
    bool corrected = false;
    ExactStateFn provider;                    ///< Dirichlet data
    std::optional<CircleBoundary> surface;    ///< true geometry (projection + wall velocity)
};

/// Ghost state from the prescribed data evaluated at the surrogate point.
State ghost_dirichlet_uncorrected(const Vec2& xt, double t, const ExactStateFn& provider,
                                  const GasModel& gas);

/// Shifted-boundary corrected Dirichlet ghost: for every primitive
/// variable, phi*(xt) = phi_D(x) - [phi(x) - phi(xt)], with x the
/// projection of xt onto the true boundary and phi the interior
/// polynomial. `cell_diameter` guards against projections farther than
/// two cell diameters.
State ghost_dirichlet_corrected(const Vec2& xt, double t, const ExactStateFn& provider,
                                const CircleBoundary& surface, const CellPolyEval& poly,
                                double cell_diameter, const GasModel& gas);

/// Slip-wall mirror ghost. Uncorrected: surrogate edge normal and wall
/// velocity at the surrogate point. Corrected: true normal at the
/// projected point and the normal wall datum shifted by the interior
/// polynomial, (w*.n)(xt) = (w.n)(x) - [u(x) - u(xt)].n.
State ghost_slipwall(const Vec2& xt, double t, const State& interior_trace,
                     const Vec2& edge_normal, bool corrected,
                     const CircleBoundary* surface, const CellPolyEval& poly,
                     double cell_diameter, const GasModel& gas);

/// Dispatch on the BCSpec; used per boundary space-time quadrature point.
State boundary_ghost_state(const BCSpec& bc, const Vec2& xt, double t,
                           const State& interior_trace, const Vec2& edge_normal,
                           const CellPolyEval& poly, double cell_diameter, const GasModel& gas);

} // namespace alesbm
