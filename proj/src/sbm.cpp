#include "alesbm/sbm.hpp"

#include <cmath>

#include "alesbm/errors.hpp"

namespace alesbm {

State ghost_dirichlet_uncorrected(const Vec2& xt, double t, const ExactStateFn& provider,
                                  const GasModel& gas) {
    return primitive_to_conserved(provider(xt, t), gas);
}

namespace {

Projection guarded_projection(const CircleBoundary& surface, const Vec2& xt, double t,
                              double cell_diameter) {
    const Projection pr = surface.closest_point(xt, t);
    if (std::abs(pr.d) > 2.0 * cell_diameter)
        throw SolverError("boundary",
                          "projected boundary point farther than two cell diameters from the "
                          "surrogate (mesh/descriptor mismatch)");
    return pr;
}

} // namespace

State ghost_dirichlet_corrected(const Vec2& xt, double t, const ExactStateFn& provider,
                                const CircleBoundary& surface, const CellPolyEval& poly,
                                double cell_diameter, const GasModel& gas) {
    const Projection pr = guarded_projection(surface, xt, t, cell_diameter);
    const PrimitiveState data = provider(pr.x, t);
    const PrimitiveState at_x = conserved_to_primitive(poly(pr.x), gas);
    const PrimitiveState at_xt = conserved_to_primitive(poly(xt), gas);

    PrimitiveState ghost;
    ghost.rho = data.rho - (at_x.rho - at_xt.rho);
    ghost.vel = data.vel - (at_x.vel - at_xt.vel);
    ghost.p = data.p - (at_x.p - at_xt.p);
    if (!(ghost.rho > 0.0) || !(ghost.p > 0.0))
        throw SolverError("boundary", "corrected Dirichlet ghost lost positivity");
    return primitive_to_conserved(ghost, gas);
}

State ghost_slipwall(const Vec2& xt, double t, const State& interior_trace,
                     const Vec2& edge_normal, bool corrected, const CircleBoundary* surface,
                     const CellPolyEval& poly, double cell_diameter, const GasModel& gas) {
    const PrimitiveState wm = conserved_to_primitive(interior_trace, gas);

    Vec2 n, ub;
    if (!corrected) {
        n = edge_normal;
        const Vec2 tau(-n[1], n[0]);
        const Vec2 w = surface ? surface->wall_velocity(xt, t) : Vec2::Zero();
        ub = w.dot(n) * n + wm.vel.dot(tau) * tau;
    } else {
        if (!surface)
            throw SolverError("boundary", "corrected slip wall requires a boundary descriptor");
        const Projection pr = guarded_projection(*surface, xt, t, cell_diameter);
        n = pr.n;
        const Vec2 tau(-n[1], n[0]);
        const Vec2 w = surface->wall_velocity(pr.x, t);
        const PrimitiveState at_x = conserved_to_primitive(poly(pr.x), gas);
        const PrimitiveState at_xt = conserved_to_primitive(poly(xt), gas);
        const double wn_star = w.dot(n) - (at_x.vel - at_xt.vel).dot(n);
        ub = wn_star * n + wm.vel.dot(tau) * tau;
    }

    PrimitiveState ghost;
    ghost.rho = wm.rho;
    ghost.p = wm.p;
    ghost.vel = 2.0 * ub - wm.vel;
    return primitive_to_conserved(ghost, gas);
}

State boundary_ghost_state(const BCSpec& bc, const Vec2& xt, double t,
                           const State& interior_trace, const Vec2& edge_normal,
                           const CellPolyEval& poly, double cell_diameter, const GasModel& gas) {
    switch (bc.kind) {
        case BCSpec::Kind::DirichletExact:
            if (bc.corrected) {
                if (!bc.surface)
                    throw SolverError("boundary",
                                      "corrected Dirichlet requires a boundary descriptor");
                return ghost_dirichlet_corrected(xt, t, bc.provider, *bc.surface, poly,
                                                 cell_diameter, gas);
            }
            return ghost_dirichlet_uncorrected(xt, t, bc.provider, gas);
        case BCSpec::Kind::SlipWall:
            return ghost_slipwall(xt, t, interior_trace, edge_normal, bc.corrected,
                                  bc.surface ? &*bc.surface : nullptr, poly, cell_diameter, gas);
    }
    throw SolverError("boundary", "unknown boundary condition kind");
}

} // namespace alesbm
