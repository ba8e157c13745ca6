#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "alesbm/mesh.hpp"
#include "alesbm/sbm.hpp"
#include "alesbm/weno.hpp"

namespace alesbm {

/// Slab-average boundary vertex velocity rule: (x, t, dt) with dt > 0
/// returns the mean velocity over [t, t+dt] along the prescribed
/// trajectory through x (so vertices track the exact path); dt == 0
/// returns the instantaneous velocity.
using VelocityRule = std::function<Vec2(const Vec2&, double, double)>;

struct CaseDefinition {
    std::string name;
    GasModel gas;
    double t_final = 1.0;
    std::function<TriMesh(int)> mesh_recipe; ///< resolution index -> mesh
    std::function<PrimitiveState(const Vec2&)> initial;
    std::function<PrimitiveState(const Vec2&, double)> exact; ///< null if unavailable
    std::function<State(const Vec2&)> source;                 ///< null if zero
    std::map<std::string, BCSpec> bcs;
    std::map<std::string, VelocityRule> boundary_velocity;
    /// Prescribed interior vertex velocity; replaces the harmonic solve
    /// when set (free-stream/GCL testing).
    std::function<Vec2(const Vec2&, double)> interior_motion;
};

// --- Manufactured steady solution in a radially expanding disk ---------

PrimitiveState manufactured2d_exact(const Vec2& x);
State manufactured2d_source(const Vec2& x);
/// Radial boundary node velocity u0 |x| (cos a, sin a) with u0 = 0.1.
Vec2 manufactured2d_boundary_velocity(const Vec2& x);
/// Max |div F(Q) - S| of the exact solution by central differences at
/// `samples` quasi-random points (the steady state has no time term).
double manufactured2d_residual(int samples = 50, double step = 1e-5);

// --- Kidder isentropic shell compression --------------------------------

struct KidderSolution {
    double gamma = 2.0;
    double r_i0 = 0.9, r_e0 = 1.0;
    double rho_i0 = 1.0, rho_e0 = 2.0;
    double s0 = 1.0;

    double p_i0() const { return s0 * std::pow(rho_i0, gamma); }
    double p_e0() const { return s0 * std::pow(rho_e0, gamma); }
    double c_i0() const { return std::sqrt(gamma * p_i0() / rho_i0); }
    double c_e0() const { return std::sqrt(gamma * p_e0() / rho_e0); }
    /// Focalisation time.
    double tau() const;
    double h(double t) const;
    double hdot(double t) const;

    double rho0(double r) const;
    double p0(double r) const { return s0 * std::pow(rho0(r), gamma); }

    struct Radial {
        double rho, ur, p;
    };
    /// Self-similar fields at Eulerian radius R and time t in [0, tau).
    /// Throws if R falls outside the moving shell (small tolerance).
    Radial exact(double R, double t) const;
};

// --- Case catalogue ------------------------------------------------------

/// Available: "manufactured2d", "kidder2d", "cylinder_horizontal",
/// "cylinder_vertical", "gcl_swirl". `corrected` toggles the shifted
/// boundary polynomial correction on the curved tags.
CaseDefinition make_case(const std::string& name, bool corrected);

/// The two FSI demonstrations (horizontal then vertical oscillation).
std::array<CaseDefinition, 2> oscillating_cylinder_cases(bool corrected);

// --- Error metrology -----------------------------------------------------

struct L2Errors {
    double rho;
    double u;
};

/// sqrt(sum_i int_{T_i} (w_h - q_exact)^2 dV) of the reconstructed density
/// and x-velocity against the exact solution at time t.
L2Errors l2_error(const TriMesh& mesh, const std::vector<CellPolynomial>& polys,
                  const Basis& basis,
                  const std::function<PrimitiveState(const Vec2&, double)>& exact, double t,
                  const GasModel& gas, int quad_degree);

/// ln(E1/E2) / ln(h1/h2).
double observed_order(double h1, double e1, double h2, double e2);

/// (barycenter radius, cell-average density) pairs.
std::vector<std::pair<double, double>> kidder_scatter(const TriMesh& mesh,
                                                      const std::vector<State>& averages);

} // namespace alesbm
