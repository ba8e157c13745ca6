#include "alesbm/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "alesbm/errors.hpp"
#include "alesbm/quadrature.hpp"
#include "alesbm/vtk.hpp"

namespace alesbm {

namespace {

class StageTimer {
public:
    StageTimer(std::map<std::string, double>& sink, const char* name)
        : sink_(sink), name_(name), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const auto end = std::chrono::steady_clock::now();
        sink_[name_] += std::chrono::duration<double>(end - start_).count();
    }

private:
    std::map<std::string, double>& sink_;
    const char* name_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<State> initial_averages(const TriMesh& mesh, const CaseDefinition& def, int degree) {
    std::vector<State> avg(mesh.num_cells());
    const auto& rule = triangle_rule(degree);
    for (int i = 0; i < mesh.num_cells(); ++i) {
        const ReferenceMap map = mesh.cell_map(i);
        State q = State::Zero();
        for (const auto& qp : rule)
            q += qp.w * primitive_to_conserved(def.initial(map.to_physical(Vec2(qp.xi, qp.eta))),
                                               def.gas);
        avg[i] = 2.0 * q;
    }
    return avg;
}

} // namespace

Simulation::Simulation(const CaseDefinition& def, TriMesh mesh, const RunOptions& opt)
    : def_(def), opt_(opt), mesh_(std::move(mesh)) {
    if (opt_.M < 1 || opt_.M > 3) throw SolverError("config", "M must be 1, 2 or 3");
    t_final_ = opt_.t_final > 0.0 ? opt_.t_final : def_.t_final;

    // Configuration is validated before any compute: every boundary tag of
    // the mesh needs a boundary condition and a vertex velocity rule.
    if (mesh_.tag_names.size() > 32) throw SolverError("config", "too many boundary tags");
    for (size_t tag = 0; tag < mesh_.tag_names.size(); ++tag) {
        const std::string& name = mesh_.tag_names[tag];
        const auto bc = def_.bcs.find(name);
        if (bc == def_.bcs.end())
            throw SolverError("config", "mesh boundary tag '" + name + "' has no boundary condition");
        bc_by_tag_[tag] = &bc->second;
        if (!def_.boundary_velocity.count(name))
            throw SolverError("config", "mesh boundary tag '" + name + "' has no velocity rule");
    }
    for (const auto& [name, bc] : def_.bcs)
        if (mesh_.tag_id(name) < 0)
            throw SolverError("config", "boundary condition names unknown tag '" + name + "'");

    n_chi_ = n_tau_ = (opt_.M + 3) / 2;
    weno_ = std::make_unique<WenoReconstruction>(mesh_, opt_.M);
    predictor_ = std::make_unique<SpaceTimePredictor>(opt_.M);
    harmonic_ = std::make_unique<HarmonicMotionSolver>(mesh_);
    checksum0_ = mesh_.connectivity_checksum();

    averages_ = initial_averages(mesh_, def_, 2 * opt_.M + 2);
    initial_averages_ = averages_;
    vprev_ = vertex_velocities(0.0, 0.0);
}

Simulation::~Simulation() = default;

std::vector<Vec2> Simulation::vertex_velocities(double t, double dt) const {
    StageTimer timer(stage_seconds_, "motion");
    std::vector<std::optional<Vec2>> bvals(mesh_.num_vertices());
    for (const Edge& e : mesh_.edges) {
        if (e.right >= 0) continue;
        const auto& rule = def_.boundary_velocity.at(mesh_.tag_names[e.tag]);
        for (int v : e.v) {
            const Vec2 val = rule(mesh_.vertices[v], t, dt);
            if (bvals[v] && (*bvals[v] - val).norm() > 1e-12 * (1.0 + val.norm()))
                throw SolverError("motion", "conflicting boundary velocities at vertex", step_, v);
            bvals[v] = val;
        }
    }
    if (def_.interior_motion) {
        std::vector<Vec2> vel(mesh_.num_vertices());
        for (int v = 0; v < mesh_.num_vertices(); ++v)
            vel[v] = mesh_.vertex_on_boundary[v] ? *bvals[v]
                                                 : def_.interior_motion(mesh_.vertices[v], t);
        return vel;
    }
    return harmonic_->solve(mesh_, bvals);
}

std::vector<CellPolynomial> Simulation::reconstruct_now() const {
    return weno_->reconstruct(mesh_, averages_);
}

State Simulation::face_flux_integral(int edge, const std::vector<Vec2>& velocity, double dt,
                                     const std::vector<Predictor>& preds,
                                     const std::vector<SlabGeometry>& slabs) const {
    const Edge& e = mesh_.edges[edge];
    const SpaceTimeFace face = face_geometry(mesh_, edge, velocity, dt, n_chi_, n_tau_);
    const SpaceTimeBasis& stb = predictor_->basis();
    State total = State::Zero();

    if (e.right >= 0) {
        for (const FaceQuadPoint& qp : face.qp) {
            const State qm = eval_spacetime(stb, preds[e.left].qhat, qp.ref_left, qp.tau);
            const State qp_state = eval_spacetime(stb, preds[e.right].qhat, qp.ref_right, qp.tau);
            total += qp.measure *
                     osher_flux(qm, qp_state, qp.n, qp.vn, def_.gas, opt_.path_quadrature);
        }
        return total;
    }

    const BCSpec& bc = *bc_by_tag_[e.tag];
    const double diam = mesh_.circumcircle_diameter(e.left);
    for (const FaceQuadPoint& qp : face.qp) {
        const State qm = eval_spacetime(stb, preds[e.left].qhat, qp.ref_left, qp.tau);
        const double t_abs = t_ + qp.tau * dt;
        // Off-element polynomial evaluation through the moving affine map
        // at the quadrature time (the predictor trace when available).
        CellPolyEval poly = [&](const Vec2& x) {
            const Vec2 ref = slabs[e.left].to_reference(x, qp.tau);
            return eval_spacetime(stb, preds[e.left].qhat, ref, qp.tau);
        };
        const State ghost =
            boundary_ghost_state(bc, qp.xt, t_abs, qm, qp.n, poly, diam, def_.gas);
        total += qp.measure * osher_flux(qm, ghost, qp.n, qp.vn, def_.gas, opt_.path_quadrature);
    }
    return total;
}

double Simulation::step() {
    if (t_ >= t_final_ * (1.0 - 1e-14)) return 0.0;

    std::vector<CellPolynomial> polys;
    {
        StageTimer timer(stage_seconds_, "reconstruct");
        polys = weno_->reconstruct(mesh_, averages_);
    }

    double dt;
    {
        StageTimer timer(stage_seconds_, "timestep");
        dt = compute_timestep(mesh_, averages_, vprev_, opt_.cfl, opt_.M, def_.gas, t_final_,
                              step_);
    }
    bool hits_final = false;
    if (opt_.snapshot_every > 0.0) {
        const double next_snap =
            (std::floor(t_ / opt_.snapshot_every + 1e-9) + 1.0) * opt_.snapshot_every;
        if (next_snap - t_ < dt) dt = next_snap - t_;
    }
    if (t_ + dt >= t_final_ * (1.0 - 1e-14)) {
        dt = t_final_ - t_;
        hits_final = true;
    }

    // Vertex velocities at the chosen dt; halve on inversion.
    std::vector<Vec2> velocity;
    for (;;) {
        velocity = vertex_velocities(t_, dt);
        bool ok = true;
        for (int c = 0; c < mesh_.num_cells() && ok; ++c) {
            const auto& t = mesh_.triangles[c];
            if (min_area_in_slab(mesh_.vertices[t[0]], mesh_.vertices[t[1]],
                                 mesh_.vertices[t[2]], velocity[t[0]], velocity[t[1]],
                                 velocity[t[2]], dt) <= 0.0)
                ok = false;
        }
        if (ok) break;
        dt *= 0.5;
        hits_final = false;
        if (dt < 1e-14 * t_final_)
            throw SolverError("timestep", "time step underflow while avoiding mesh inversion",
                              step_);
    }

    const int nc = mesh_.num_cells();
    std::vector<SlabGeometry> slabs(nc);
    std::vector<Predictor> preds(nc);
    {
        StageTimer timer(stage_seconds_, "predictor");
        std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 8)
        for (int c = 0; c < nc; ++c) {
            if (failure) continue;
            try {
                slabs[c] = make_slab_geometry(mesh_, c, velocity, dt);
                preds[c] = predictor_->solve(polys[c], weno_->basis(), slabs[c], def_.gas,
                                             def_.source ? &def_.source : nullptr, c, step_);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    const int ne = mesh_.num_edges();
    std::vector<State> edge_flux(ne);
    {
        StageTimer timer(stage_seconds_, "flux");
        std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 16)
        for (int e = 0; e < ne; ++e) {
            if (failure) continue;
            try {
                edge_flux[e] = face_flux_integral(e, velocity, dt, preds, slabs);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<State> next(nc);
    std::vector<State> source_int(nc, State::Zero());
    {
        StageTimer timer(stage_seconds_, "update");
        const SpaceTimeBasis& stb = predictor_->basis();
        const auto& vol_rule = triangle_rule(2 * opt_.M + 2);
        const auto& tau_rule = gauss_legendre(opt_.M + 1);
        std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static)
        for (int c = 0; c < nc; ++c) {
            if (failure) continue;
            try {
                State flux_sum = State::Zero();
                for (int k = 0; k < 3; ++k) {
                    const int e = mesh_.cell_edges[c][k];
                    flux_sum += mesh_.edges[e].left == c ? edge_flux[e] : (-edge_flux[e]).eval();
                }
                if (def_.source) {
                    State s = State::Zero();
                    for (const auto& qt : tau_rule) {
                        const double jac = 2.0 * slabs[c].area(qt.x);
                        State slice = State::Zero();
                        for (const auto& qs : vol_rule)
                            slice += qs.w * eval_spacetime(stb, preds[c].shat,
                                                           Vec2(qs.xi, qs.eta), qt.x);
                        s += qt.w * jac * slice;
                    }
                    source_int[c] = dt * s;
                }
                next[c] = fv_update(averages_[c], mesh_.area(c), slabs[c].area(1.0), flux_sum,
                                    source_int[c], def_.gas, step_, c);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    // Conservation budget: interior fluxes telescope, so the total may only
    // change by boundary fluxes and sources.
    {
        State before = State::Zero(), after = State::Zero(), bflux = State::Zero(),
              src = State::Zero();
        for (int c = 0; c < nc; ++c) {
            before += mesh_.area(c) * averages_[c];
            after += slabs[c].area(1.0) * next[c];
            src += source_int[c];
        }
        for (int e = 0; e < ne; ++e)
            if (mesh_.is_boundary_edge(e)) bflux += edge_flux[e];
        double rel = 0.0;
        for (int k = 0; k < 4; ++k)
            rel = std::max(rel, std::abs(after[k] - before[k] + bflux[k] - src[k]) /
                                    (1.0 + std::abs(before[k])));
        last_residual_ = rel;
    }

    {
        StageTimer timer(stage_seconds_, "motion");
        std::vector<Vec2> displacement(mesh_.num_vertices());
        for (int v = 0; v < mesh_.num_vertices(); ++v) displacement[v] = dt * velocity[v];
        move_vertices(mesh_, displacement);
    }

    averages_ = std::move(next);
    vprev_ = std::move(velocity);
    t_ = hits_final ? t_final_ : t_ + dt;
    ++step_;
    if (mesh_.connectivity_checksum() != checksum0_)
        throw SolverError("update", "mesh connectivity changed during the run", step_);
    return dt;
}

L2Errors Simulation::current_l2() const {
    if (!def_.exact) throw SolverError("cases", "case has no exact solution");
    return l2_error(mesh_, reconstruct_now(), weno_->basis(), def_.exact, t_, def_.gas,
                    2 * opt_.M + 2);
}

double Simulation::entropy_deviation() const {
    const auto polys = reconstruct_now();
    const Vec2 bary(1.0 / 3.0, 1.0 / 3.0);
    double dev = 0.0;
    for (int c = 0; c < mesh_.num_cells(); ++c) {
        const State q = evaluate(polys[c], weno_->basis(), bary);
        dev = std::max(dev, std::abs(entropy(q, def_.gas) - 1.0));
    }
    return dev;
}

double Simulation::avg_deviation() const {
    double dev = 0.0;
    for (int c = 0; c < mesh_.num_cells(); ++c)
        dev = std::max(dev, (averages_[c] - initial_averages_[c]).cwiseAbs().maxCoeff());
    return dev;
}

double Simulation::mean_boundary_radius(const std::string& tag) const {
    const int id = mesh_.tag_id(tag);
    if (id < 0) throw SolverError("cases", "unknown boundary tag: " + tag);
    double sum = 0.0;
    int count = 0;
    std::vector<char> seen(mesh_.num_vertices(), 0);
    for (const Edge& e : mesh_.edges) {
        if (e.right >= 0 || e.tag != id) continue;
        for (int v : e.v)
            if (!seen[v]) {
                seen[v] = 1;
                sum += mesh_.vertices[v].norm();
                ++count;
            }
    }
    return sum / count;
}

RunReport run_case(const CaseDefinition& def, TriMesh mesh, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Simulation sim(def, std::move(mesh), opt);

    const bool write_output = !opt.output_dir.empty();
    int snapshot_index = 0;
    if (write_output) {
        std::filesystem::create_directories(opt.output_dir);
        write_vtk(sim.mesh(), sim.averages(), sim.gas(),
                  opt.output_dir + "/" + def.name + "_0000.vtk");
    }

    RunReport rep;
    rep.case_name = def.name;
    rep.M = opt.M;
    rep.cfl = opt.cfl;
    rep.cells = sim.mesh().num_cells();
    rep.grid_size = sim.mesh().grid_size();

    while (true) {
        if (opt.max_steps > 0 && sim.step_index() >= opt.max_steps) break;
        const double dt = sim.step();
        if (dt == 0.0) break;
        rep.conservation_log.emplace_back(sim.time(), sim.last_conservation_residual());
        rep.max_conservation_residual =
            std::max(rep.max_conservation_residual, sim.last_conservation_residual());
        if (write_output && opt.snapshot_every > 0.0) {
            const double snap_t = (snapshot_index + 1) * opt.snapshot_every;
            if (sim.time() >= snap_t * (1.0 - 1e-12)) {
                ++snapshot_index;
                std::ostringstream name;
                name << opt.output_dir << "/" << def.name << "_" << std::setw(4)
                     << std::setfill('0') << snapshot_index << ".vtk";
                write_vtk(sim.mesh(), sim.averages(), sim.gas(), name.str());
            }
        }
    }

    rep.steps = sim.step_index();
    rep.t_end = sim.time();
    if (def.exact) {
        const L2Errors err = sim.current_l2();
        rep.l2_rho = err.rho;
        rep.l2_u = err.u;
    }
    rep.max_entropy_dev = sim.entropy_deviation();
    rep.max_avg_deviation = sim.avg_deviation();
    if (sim.mesh().tag_id("inner") >= 0)
        rep.final_inner_radius = sim.mean_boundary_radius("inner");
    rep.stage_seconds = sim.stage_seconds();
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (write_output) {
        write_vtk(sim.mesh(), sim.averages(), sim.gas(),
                  opt.output_dir + "/" + def.name + "_final.vtk");
        if (def.name == "kidder2d") {
            std::ofstream csv(opt.output_dir + "/" + def.name + "_scatter.csv");
            csv.precision(15);
            csv << "radius,rho\n";
            for (const auto& [r, rho] : kidder_scatter(sim.mesh(), sim.averages()))
                csv << r << ',' << rho << '\n';
        }
        std::ofstream txt(opt.output_dir + "/" + def.name + "_report.txt");
        txt << rep.to_text();
    }
    return rep;
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os.precision(12);
    os << "case " << case_name << "  M=" << M << "  cfl=" << cfl << "\n";
    os << "cells " << cells << "  grid_size " << grid_size << "\n";
    os << "steps " << steps << "  t_end " << t_end << "\n";
    if (l2_rho >= 0.0) os << "L2_rho " << l2_rho << "  L2_u " << l2_u << "\n";
    os << "max_entropy_dev " << max_entropy_dev << "\n";
    os << "max_conservation_residual " << max_conservation_residual << "\n";
    os << "max_avg_deviation " << max_avg_deviation << "\n";
    if (final_inner_radius >= 0.0) os << "final_inner_radius " << final_inner_radius << "\n";
    os << "wall_seconds " << wall_seconds << "\n";
    for (const auto& [stage, sec] : stage_seconds)
        os << "  stage " << stage << " " << sec << "\n";
    return os.str();
}

std::vector<SweepRow> convergence_sweep(const CaseDefinition& def,
                                        const std::vector<int>& resolutions,
                                        const RunOptions& opt) {
    if (resolutions.empty()) throw SolverError("config", "sweep needs at least one resolution");
    if (!def.exact) throw SolverError("config", "sweep requires a case with an exact solution");
    std::vector<SweepRow> rows;
    for (int res : resolutions) {
        RunOptions ropt = opt;
        ropt.output_dir.clear();
        const RunReport rep = run_case(def, def.mesh_recipe(res), ropt);
        SweepRow row;
        row.resolution = res;
        row.cells = rep.cells;
        row.h = rep.grid_size;
        row.rho_l2 = rep.l2_rho;
        row.u_l2 = rep.l2_u;
        row.steps = rep.steps;
        row.seconds = rep.wall_seconds;
        if (!rows.empty()) {
            row.rho_order = observed_order(rows.back().h, rows.back().rho_l2, row.h, row.rho_l2);
            row.u_order = observed_order(rows.back().h, rows.back().u_l2, row.h, row.u_l2);
        }
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os.precision(12);
    os << "grid_size,rho_l2,rho_order,u_l2,u_order,cells,steps,seconds\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        os << r.h << ',' << r.rho_l2 << ',';
        if (i > 0) os << r.rho_order;
        os << ',' << r.u_l2 << ',';
        if (i > 0) os << r.u_order;
        os << ',' << r.cells << ',' << r.steps << ',' << r.seconds << "\n";
    }
    return os.str();
}

CaseDefinition case_from_config(const RunConfig& cfg) {
    CaseDefinition def = make_case(cfg.case_name, cfg.correction);
    for (const auto& [tag, corrected] : cfg.tag_correction) {
        auto it = def.bcs.find(tag);
        if (it == def.bcs.end())
            throw SolverError("config", "correction override names unknown tag '" + tag + "'");
        it->second.corrected = corrected;
    }
    return def;
}

TriMesh mesh_from_config(const RunConfig& cfg, const CaseDefinition& def) {
    if (!cfg.mesh_file.empty()) return read_mesh(cfg.mesh_file);
    return def.mesh_recipe(cfg.resolution);
}

RunOptions options_from_config(const RunConfig& cfg) {
    RunOptions opt;
    opt.M = cfg.M;
    opt.cfl = cfg.cfl;
    opt.t_final = cfg.final_time;
    opt.max_steps = cfg.max_steps;
    opt.snapshot_every = cfg.snapshot_every;
    opt.output_dir = cfg.output_dir;
    opt.path_quadrature = cfg.path_quadrature;
    return opt;
}

RunReport run_from_config(const RunConfig& cfg) {
    const CaseDefinition def = case_from_config(cfg);
    return run_case(def, mesh_from_config(cfg, def), options_from_config(cfg));
}

std::vector<SweepRow> sweep_from_config(const RunConfig& cfg) {
    if (cfg.sweep_resolutions.size() < 2)
        throw SolverError("config", "sweep needs at least two resolutions");
    return convergence_sweep(case_from_config(cfg), cfg.sweep_resolutions,
                             options_from_config(cfg));
}

} // namespace alesbm
