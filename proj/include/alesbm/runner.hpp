#pragma once

#include <memory>

#include "alesbm/ale_scheme.hpp"
#include "alesbm/cases.hpp"
#include "alesbm/config.hpp"
#include "alesbm/mesh_motion.hpp"
#include "alesbm/spacetime.hpp"

namespace alesbm {

struct RunOptions {
    int M = 2;
    double cfl = 0.5;
    double t_final = -1.0; ///< < 0: case default
    long max_steps = 0;    ///< 0: unlimited
    double snapshot_every = 0.0;
    std::string output_dir; ///< empty: no VTK/CSV output
    int path_quadrature = 3;
};

struct RunReport {
    std::string case_name;
    int M = 0;
    double cfl = 0.0;
    int cells = 0;
    double grid_size = 0.0;
    long steps = 0;
    double t_end = 0.0;
    double l2_rho = -1.0, l2_u = -1.0; ///< -1 when no exact solution
    double max_entropy_dev = -1.0;     ///< max |S - 1| of the final reconstruction
    double max_conservation_residual = 0.0;
    double max_avg_deviation = -1.0;   ///< max |avg - avg_0| (uniform-state diagnostics)
    double final_inner_radius = -1.0;  ///< mean radius of the "inner" boundary vertices
    double wall_seconds = 0.0;
    std::map<std::string, double> stage_seconds;
    std::vector<std::pair<double, double>> conservation_log; ///< (t, relative residual)

    std::string to_text() const;
};

/// One time-marching problem the acceptance tests can drive step by step.
/// Pipeline per step: WENO reconstruction -> time step -> vertex
/// velocities (harmonic or prescribed) -> per-cell space-time predictor ->
/// face fluxes with boundary ghosts -> one-step ALE update -> mesh motion.
class Simulation {
public:
    Simulation(const CaseDefinition& def, TriMesh mesh, const RunOptions& opt);
    ~Simulation();

    /// Advances one step; returns the dt taken (0 once t_final is reached).
    double step();

    double time() const { return t_; }
    long step_index() const { return step_; }
    double t_final() const { return t_final_; }
    const TriMesh& mesh() const { return mesh_; }
    const std::vector<State>& averages() const { return averages_; }
    const CaseDefinition& definition() const { return def_; }
    const GasModel& gas() const { return def_.gas; }
    double last_conservation_residual() const { return last_residual_; }
    const std::map<std::string, double>& stage_seconds() const { return stage_seconds_; }

    std::vector<CellPolynomial> reconstruct_now() const;
    /// L2 errors of the current reconstruction vs the exact solution.
    L2Errors current_l2() const;
    /// max |S - 1| of the reconstruction evaluated at cell barycenters.
    double entropy_deviation() const;
    /// max component deviation of the averages from the initial averages.
    double avg_deviation() const;
    double mean_boundary_radius(const std::string& tag) const;

private:
    std::vector<Vec2> vertex_velocities(double t, double dt) const;
    State face_flux_integral(int edge, const std::vector<Vec2>& velocity, double dt,
                             const std::vector<Predictor>& preds,
                             const std::vector<SlabGeometry>& slabs) const;

    CaseDefinition def_;
    RunOptions opt_;
    TriMesh mesh_;
    std::vector<State> averages_;
    std::vector<State> initial_averages_;
    std::unique_ptr<WenoReconstruction> weno_;
    std::unique_ptr<SpaceTimePredictor> predictor_;
    std::unique_ptr<HarmonicMotionSolver> harmonic_;
    std::vector<Vec2> vprev_;
    const BCSpec* bc_by_tag_[32] = {nullptr};
    double t_ = 0.0;
    double t_final_ = 0.0;
    long step_ = 0;
    int n_chi_ = 2, n_tau_ = 2;
    double last_residual_ = 0.0;
    std::uint64_t checksum0_ = 0;
    mutable std::map<std::string, double> stage_seconds_;
};

RunReport run_case(const CaseDefinition& def, TriMesh mesh, const RunOptions& opt);

struct SweepRow {
    int resolution = 0;
    int cells = 0;
    double h = 0.0;
    double rho_l2 = 0.0, u_l2 = 0.0;
    double rho_order = 0.0, u_order = 0.0; ///< 0 on the first row
    long steps = 0;
    double seconds = 0.0;
};

std::vector<SweepRow> convergence_sweep(const CaseDefinition& def,
                                        const std::vector<int>& resolutions,
                                        const RunOptions& opt);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Applies the config's correction toggles to the named case.
CaseDefinition case_from_config(const RunConfig& cfg);
TriMesh mesh_from_config(const RunConfig& cfg, const CaseDefinition& def);
RunOptions options_from_config(const RunConfig& cfg);
RunReport run_from_config(const RunConfig& cfg);
std::vector<SweepRow> sweep_from_config(const RunConfig& cfg);

} // namespace alesbm
