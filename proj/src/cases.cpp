#include "alesbm/cases.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "alesbm/errors.hpp"
#include "alesbm/quadrature.hpp"

namespace alesbm {

namespace {
constexpr double kManufacturedU0 = 0.1;
const double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

PrimitiveState manufactured2d_exact(const Vec2& x) {
    const double s = 1.0 + 0.2 * std::sin(x[0] + x[1]);
    return {s, Vec2(1.0, 1.0), s};
}

State manufactured2d_source(const Vec2& x) {
    const double c = std::cos(x[0] + x[1]);
    return State(0.4 * c, 0.6 * c, 0.6 * c, 1.8 * c);
}

Vec2 manufactured2d_boundary_velocity(const Vec2& x) {
    return kManufacturedU0 * x;
}

double manufactured2d_residual(int samples, double step) {
    const GasModel gas{1.4};
    auto conserved_at = [&gas](const Vec2& x) {
        return primitive_to_conserved(manufactured2d_exact(x), gas);
    };
    std::mt19937 rng(20240517);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Vec2 x(unif(rng), unif(rng));
        State div = State::Zero();
        for (int d = 0; d < 2; ++d) {
            Vec2 xp = x, xm = x;
            xp[d] += step;
            xm[d] -= step;
            const FluxTensor fp = physical_flux(conserved_at(xp), gas);
            const FluxTensor fm = physical_flux(conserved_at(xm), gas);
            div += (fp.col(d) - fm.col(d)) / (2.0 * step);
        }
        // Steady state: residual is div F - S.
        worst = std::max(worst, (div - manufactured2d_source(x)).cwiseAbs().maxCoeff());
    }
    return worst;
}

double KidderSolution::tau() const {
    const double ci = c_i0(), ce = c_e0();
    return std::sqrt(0.5 * (gamma - 1.0) * (r_e0 * r_e0 - r_i0 * r_i0) / (ce * ce - ci * ci));
}

double KidderSolution::h(double t) const {
    const double T = tau();
    const double arg = 1.0 - t * t / (T * T);
    if (!(arg > 0.0)) throw SolverError("cases", "Kidder h(t) queried at or past focalisation");
    return std::sqrt(arg);
}

double KidderSolution::hdot(double t) const {
    const double T = tau();
    return -t / (T * T * h(t));
}

double KidderSolution::rho0(double r) const {
    const double denom = r_e0 * r_e0 - r_i0 * r_i0;
    const double wi = (r_e0 * r_e0 - r * r) / denom;
    const double we = (r * r - r_i0 * r_i0) / denom;
    const double g1 = gamma - 1.0;
    return std::pow(wi * std::pow(rho_i0, g1) + we * std::pow(rho_e0, g1), 1.0 / g1);
}

KidderSolution::Radial KidderSolution::exact(double R, double t) const {
    const double ht = h(t);
    double r0 = R / ht;
    const double tol = 1e-9 * r_e0;
    if (r0 < r_i0 - tol || r0 > r_e0 + tol)
        throw SolverError("cases", "Kidder solution queried outside the shell");
    r0 = std::clamp(r0, r_i0, r_e0);
    Radial out;
    const double g1 = gamma - 1.0;
    out.rho = std::pow(ht, -2.0 / g1) * rho0(r0);
    out.p = std::pow(ht, -2.0 * gamma / g1) * p0(r0);
    out.ur = R * hdot(t) / ht;
    return out;
}

namespace {

CaseDefinition make_manufactured(bool corrected) {
    CaseDefinition c;
    c.name = "manufactured2d";
    c.gas = GasModel{1.4};
    c.t_final = 0.5;
    c.mesh_recipe = [](int res) { return generate_disk(1.0, res); };
    c.initial = [](const Vec2& x) { return manufactured2d_exact(x); };
    c.exact = [](const Vec2& x, double) { return manufactured2d_exact(x); };
    c.source = [](const Vec2& x) { return manufactured2d_source(x); };

    // The disk boundary moves radially with u0 |x|, so a boundary vertex at
    // radius r follows r(t) = r exp(u0 t).
    BCSpec bc;
    bc.kind = BCSpec::Kind::DirichletExact;
    bc.corrected = corrected;
    bc.provider = [](const Vec2& x, double) { return manufactured2d_exact(x); };
    bc.surface = CircleBoundary::scaling(
        Vec2::Zero(), [](double t) { return std::exp(kManufacturedU0 * t); },
        [](double t) { return kManufacturedU0 * std::exp(kManufacturedU0 * t); });
    c.bcs["outer"] = bc;
    c.boundary_velocity["outer"] = [](const Vec2& x, double, double dt) {
        if (dt <= 0.0) return manufactured2d_boundary_velocity(x);
        return ((std::expm1(kManufacturedU0 * dt)) / dt * x).eval();
    };
    return c;
}

CaseDefinition make_kidder(bool corrected) {
    const KidderSolution kd;
    CaseDefinition c;
    c.name = "kidder2d";
    c.gas = GasModel{kd.gamma};
    c.t_final = 0.5 * std::sqrt(3.0) * kd.tau();
    c.mesh_recipe = [kd](int res) {
        return generate_annulus(kd.r_i0, kd.r_e0, res, 60 * res);
    };
    auto exact_state = [kd](const Vec2& x, double t) {
        const double R = x.norm();
        const auto f = kd.exact(R, t);
        const Vec2 dir = R > 0.0 ? (x / R).eval() : Vec2::Zero();
        return PrimitiveState{f.rho, f.ur * dir, f.p};
    };
    c.initial = [exact_state](const Vec2& x) { return exact_state(x, 0.0); };
    c.exact = exact_state;

    auto shell_bc = [&](double radius0) {
        BCSpec bc;
        bc.kind = BCSpec::Kind::DirichletExact;
        bc.corrected = corrected;
        bc.provider = exact_state;
        bc.surface = CircleBoundary::scaling(
            Vec2::Zero(), [kd, radius0](double t) { return radius0 * kd.h(t); },
            [kd, radius0](double t) { return radius0 * kd.hdot(t); });
        return bc;
    };
    c.bcs["inner"] = shell_bc(kd.r_i0);
    c.bcs["outer"] = shell_bc(kd.r_e0);

    // Exact mesh velocity at boundary nodes: trajectories scale with h(t).
    VelocityRule rule = [kd](const Vec2& x, double t, double dt) {
        if (dt <= 0.0) return (x * (kd.hdot(t) / kd.h(t))).eval();
        return (x * ((kd.h(t + dt) / kd.h(t) - 1.0) / dt)).eval();
    };
    c.boundary_velocity["inner"] = rule;
    c.boundary_velocity["outer"] = rule;
    return c;
}

CaseDefinition make_cylinder(bool corrected, bool vertical) {
    CaseDefinition c;
    c.gas = GasModel{1.4};
    const double A = vertical ? 0.05 : 0.1;
    const double f = vertical ? 0.25 : 0.1;
    c.t_final = vertical ? 8.0 : 10.0;
    c.name = vertical ? "cylinder_vertical" : "cylinder_horizontal";

    // Harmonic rigid paths; the vertical cosine is anchored so both cases
    // start from the same centered mesh with zero initial mismatch.
    std::function<Vec2(double)> offset, rate;
    if (vertical) {
        offset = [A, f](double t) { return Vec2(0.0, A * (std::cos(kTwoPi * f * t) - 1.0)); };
        rate = [A, f](double t) { return Vec2(0.0, -kTwoPi * A * f * std::sin(kTwoPi * f * t)); };
    } else {
        offset = [A, f](double t) { return Vec2(A * std::sin(kTwoPi * f * t), 0.0); };
        rate = [A, f](double t) { return Vec2(kTwoPi * A * f * std::cos(kTwoPi * f * t), 0.0); };
    }
    c.mesh_recipe = [](int res) {
        return generate_cylinder_box(1.0, 10.0, 48 * res, 18 * res);
    };

    const Vec2 freestream = vertical ? Vec2(0.25, 0.0) : Vec2(0.0, 0.0);
    c.initial = [freestream](const Vec2&) { return PrimitiveState{1.0, freestream, 1.0}; };

    BCSpec wall;
    wall.kind = BCSpec::Kind::SlipWall;
    wall.corrected = corrected;
    wall.surface = CircleBoundary::translating(Vec2::Zero(), 1.0, offset, rate);
    c.bcs["wall"] = wall;

    BCSpec far;
    far.kind = BCSpec::Kind::DirichletExact;
    far.corrected = false; // straight outer box: nothing to correct
    far.provider = [freestream](const Vec2&, double) {
        return PrimitiveState{1.0, freestream, 1.0};
    };
    c.bcs["farfield"] = far;

    c.boundary_velocity["wall"] = [offset](const Vec2&, double t, double dt) {
        if (dt <= 0.0) {
            const double eps = 1e-8;
            return ((offset(t + eps) - offset(t - eps)) / (2.0 * eps)).eval();
        }
        return ((offset(t + dt) - offset(t)) / dt).eval();
    };
    c.boundary_velocity["farfield"] = [](const Vec2&, double, double) { return Vec2::Zero().eval(); };
    return c;
}

CaseDefinition make_gcl_swirl() {
    CaseDefinition c;
    c.name = "gcl_swirl";
    c.gas = GasModel{1.4};
    c.t_final = 1.0;
    c.mesh_recipe = [](int res) { return generate_rect(0.0, 0.0, 1.0, 1.0, res, res); };
    const PrimitiveState uniform{1.0, Vec2(0.1, 0.1), 1.0};
    c.initial = [uniform](const Vec2&) { return uniform; };
    c.exact = [uniform](const Vec2&, double) { return uniform; };

    BCSpec bc;
    bc.kind = BCSpec::Kind::DirichletExact;
    bc.corrected = false;
    bc.provider = [uniform](const Vec2&, double) { return uniform; };
    c.bcs["outer"] = bc;
    c.boundary_velocity["outer"] = [](const Vec2&, double, double) { return Vec2::Zero().eval(); };

    // Smooth swirl vanishing on the unit-square boundary.
    c.interior_motion = [](const Vec2& x, double t) {
        const double pi = std::numbers::pi;
        const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
        const double mod = 1.0 + 0.3 * std::sin(2.2 * t);
        return (0.15 * mod *
                Vec2(sx * sx * std::sin(2.0 * pi * x[1]), -std::sin(2.0 * pi * x[0]) * sy * sy))
            .eval();
    };
    return c;
}

} // namespace

CaseDefinition make_case(const std::string& name, bool corrected) {
    if (name == "manufactured2d") return make_manufactured(corrected);
    if (name == "kidder2d") return make_kidder(corrected);
    if (name == "cylinder_horizontal") return make_cylinder(corrected, false);
    if (name == "cylinder_vertical") return make_cylinder(corrected, true);
    if (name == "gcl_swirl") return make_gcl_swirl();
    throw SolverError("config", "unknown case name: " + name);
}

std::array<CaseDefinition, 2> oscillating_cylinder_cases(bool corrected) {
    return {make_case("cylinder_horizontal", corrected),
            make_case("cylinder_vertical", corrected)};
}

L2Errors l2_error(const TriMesh& mesh, const std::vector<CellPolynomial>& polys,
                  const Basis& basis,
                  const std::function<PrimitiveState(const Vec2&, double)>& exact, double t,
                  const GasModel& gas, int quad_degree) {
    const auto& rule = triangle_rule(quad_degree);
    double err_rho = 0.0, err_u = 0.0;
    for (int i = 0; i < mesh.num_cells(); ++i) {
        const ReferenceMap map = mesh.cell_map(i);
        const double jac = map.jacobian_det();
        for (const auto& qp : rule) {
            const Vec2 ref(qp.xi, qp.eta);
            const Vec2 x = map.to_physical(ref);
            const State qh = evaluate(polys[i], basis, ref);
            const PrimitiveState ex = exact(x, t);
            const double drho = qh[0] - ex.rho;
            const double du = qh[1] / qh[0] - ex.vel[0];
            err_rho += qp.w * jac * drho * drho;
            err_u += qp.w * jac * du * du;
        }
    }
    return {std::sqrt(err_rho), std::sqrt(err_u)};
}

double observed_order(double h1, double e1, double h2, double e2) {
    return std::log(e1 / e2) / std::log(h1 / h2);
}

std::vector<std::pair<double, double>> kidder_scatter(const TriMesh& mesh,
                                                      const std::vector<State>& averages) {
    std::vector<std::pair<double, double>> out;
    out.reserve(mesh.num_cells());
    for (int i = 0; i < mesh.num_cells(); ++i)
        out.emplace_back(mesh.barycenter(i).norm(), averages[i][0]);
    return out;
}

} // namespace alesbm
