#include "alesbm/ale_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alesbm/errors.hpp"
#include "alesbm/quadrature.hpp"

namespace alesbm {

SpaceTimeFace face_geometry(const TriMesh& mesh, int edge, const std::vector<Vec2>& velocity,
                            double dt, int n_chi, int n_tau) {
    const Edge& e = mesh.edges[edge];
    const Vec2 a0 = mesh.vertices[e.v[0]], b0 = mesh.vertices[e.v[1]];
    const Vec2 va = velocity[e.v[0]], vb = velocity[e.v[1]];

    // Reference coordinates inside the adjacent cells: the quadrature point
    // keeps barycentric weights (1-chi, chi) on the edge endpoints.
    auto edge_ref = [&mesh](int cell, int va_id, int vb_id, double chi) {
        const auto& t = mesh.triangles[cell];
        double lam[3] = {0.0, 0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            if (t[k] == va_id) lam[k] = 1.0 - chi;
            if (t[k] == vb_id) lam[k] = chi;
        }
        return Vec2(lam[1], lam[2]);
    };

    SpaceTimeFace face;
    face.edge = edge;
    const auto& chi_rule = gauss_legendre(n_chi);
    const auto& tau_rule = gauss_legendre(n_tau);
    face.qp.reserve(chi_rule.size() * tau_rule.size());
    for (const auto& qt : tau_rule) {
        const Vec2 at = a0 + qt.x * dt * va;
        const Vec2 bt = b0 + qt.x * dt * vb;
        const Vec2 ev = bt - at;
        const double len = ev.norm();
        for (const auto& qc : chi_rule) {
            FaceQuadPoint p;
            p.chi = qc.x;
            p.tau = qt.x;
            p.xt = at + qc.x * ev;
            p.n = Vec2(ev[1], -ev[0]) / len;
            const Vec2 vloc = (1.0 - qc.x) * va + qc.x * vb;
            p.vn = vloc.dot(p.n);
            p.measure = qc.w * qt.w * dt * len;
            p.ref_left = edge_ref(e.left, e.v[0], e.v[1], qc.x);
            p.ref_right = e.right >= 0 ? edge_ref(e.right, e.v[0], e.v[1], qc.x) : Vec2::Zero();
            face.qp.push_back(p);
        }
    }
    return face;
}

State osher_flux(const State& qm, const State& qp, const Vec2& n, double vn, const GasModel& gas,
                 int npath) {
    const FluxTensor fm = physical_flux(qm, gas);
    const FluxTensor fp = physical_flux(qp, gas);
    State flux = 0.5 * ((fm + fp) * n) - 0.5 * vn * (qm + qp);

    const State jump = qp - qm;
    if (jump.cwiseAbs().maxCoeff() > 0.0) {
        Mat4 dissip = Mat4::Zero();
        for (const auto& g : gauss_legendre(npath)) {
            const State psi = qm + g.x * jump;
            if (!is_valid_state(psi, gas))
                throw SolverError("flux", "invalid intermediate state on the integration path");
            dissip += g.w * abs_ale_jacobian(psi, n, vn, gas);
        }
        flux -= 0.5 * (dissip * jump);
    }
    return flux;
}

State fv_update(const State& qn, double area_n, double area_np1, const State& flux_sum,
                const State& source_integral, const GasModel& gas, long step, long cell) {
    const State q = (area_n * qn - flux_sum + source_integral) / area_np1;
    if (!is_valid_state(q, gas))
        throw SolverError("update", "positivity failure in updated cell average", step, cell);
    return q;
}

double min_area_in_slab(const Vec2& x0, const Vec2& x1, const Vec2& x2, const Vec2& v0,
                        const Vec2& v1, const Vec2& v2, double dt) {
    const Vec2 u0 = x1 - x0, w0 = x2 - x0;
    const Vec2 du = (v1 - v0) * dt, dw = (v2 - v0) * dt;
    auto cross = [](const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; };
    const double c0 = cross(u0, w0);
    const double c1 = cross(u0, dw) + cross(du, w0);
    const double c2 = cross(du, dw);
    auto area_at = [&](double t) { return 0.5 * (c0 + c1 * t + c2 * t * t); };
    double amin = std::min(area_at(0.0), area_at(1.0));
    if (std::abs(c2) > 0.0) {
        const double tstar = -c1 / (2.0 * c2);
        if (tstar > 0.0 && tstar < 1.0) amin = std::min(amin, area_at(tstar));
    }
    return amin;
}

double compute_timestep(const TriMesh& mesh, const std::vector<State>& averages,
                        const std::vector<Vec2>& velocity, double cfl, int M,
                        const GasModel& gas, double t_scale, long step) {
    double limit = std::numeric_limits<double>::max();
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& tri = mesh.triangles[c];
        double lmax = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Vec2 a = mesh.vertices[tri[k]], b = mesh.vertices[tri[(k + 1) % 3]];
            const Vec2 ev = b - a;
            const Vec2 n = Vec2(ev[1], -ev[0]).normalized();
            const double vn = 0.5 * (velocity[tri[k]] + velocity[tri[(k + 1) % 3]]).dot(n);
            lmax = std::max(lmax, max_signal_speed(averages[c], n, vn, gas));
        }
        if (lmax > 0.0) limit = std::min(limit, mesh.incircle_diameter(c) / lmax);
    }
    double dt = cfl * limit / (2.0 * M + 1.0);
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw SolverError("timestep", "no admissible time step", step);

    // Halve until no triangle inverts along the linear vertex paths.
    for (;;) {
        bool ok = true;
        for (int c = 0; c < mesh.num_cells() && ok; ++c) {
            const auto& t = mesh.triangles[c];
            if (min_area_in_slab(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                                 velocity[t[0]], velocity[t[1]], velocity[t[2]], dt) <= 0.0)
                ok = false;
        }
        if (ok) break;
        dt *= 0.5;
        if (dt < 1e-14 * t_scale)
            throw SolverError("timestep", "time step underflow while avoiding mesh inversion",
                              step);
    }
    return dt;
}

} // namespace alesbm
