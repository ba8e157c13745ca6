#pragma once

#include <Eigen/Dense>

namespace alesbm {

using Vec2 = Eigen::Vector2d;
/// Conserved state (rho, rho*u, rho*v, rho*E).
using State = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
/// Flux tensor: 4 equations x 2 spatial directions.
using FluxTensor = Eigen::Matrix<double, 4, 2>;

struct GasModel {
    double gamma = 1.4;
};

struct PrimitiveState {
    double rho;
    Vec2 vel;
    double p;
};

/// p = (gamma - 1) rho e. Throws on rho <= 0 or e <= 0.
double eos_pressure(double rho, double e, const GasModel& gas);

PrimitiveState conserved_to_primitive(const State& q, const GasModel& gas);
State primitive_to_conserved(const PrimitiveState& w, const GasModel& gas);

double pressure(const State& q, const GasModel& gas);
double sound_speed(const State& q, const GasModel& gas);

/// Columns (rho u, rho u x u + p I, rho H u).
FluxTensor physical_flux(const State& q, const GasModel& gas);

/// Eigenstructure of the ALE Jacobian A_n^V = d(F.n)/dQ - (V.n) I
/// for a unit spatial normal n and mesh normal speed vn.
struct EigenSystem {
    Eigen::Vector4d lambda; // u.n - vn + (-c, 0, 0, +c)
    Mat4 R;                 // right eigenvectors (columns)
    Mat4 Rinv;              // left eigenvectors (rows)
};

EigenSystem ale_eigen(const State& q, const Vec2& n, double vn, const GasModel& gas);

/// R |Lambda| R^{-1} of the ALE Jacobian.
Mat4 abs_ale_jacobian(const State& q, const Vec2& n, double vn, const GasModel& gas);

/// S = p / rho^gamma.
double entropy(const State& q, const GasModel& gas);

/// max |lambda| over the ALE eigenvalues.
double max_signal_speed(const State& q, const Vec2& n, double vn, const GasModel& gas);

/// True if rho > 0 and the derived pressure is positive.
bool is_valid_state(const State& q, const GasModel& gas);

} // namespace alesbm
