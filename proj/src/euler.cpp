#include "alesbm/euler.hpp"

#include <cmath>

#include "alesbm/errors.hpp"

namespace alesbm {

double eos_pressure(double rho, double e, const GasModel& gas) {
    if (!(rho > 0.0)) throw SolverError("euler", "non-positive density in EOS");
    if (!(e > 0.0)) throw SolverError("euler", "non-positive internal energy in EOS");
    return (gas.gamma - 1.0) * rho * e;
}

PrimitiveState conserved_to_primitive(const State& q, const GasModel& gas) {
    const double rho = q[0];
    if (!(rho > 0.0)) throw SolverError("euler", "non-positive density");
    const Vec2 u = q.segment<2>(1) / rho;
    const double e = q[3] / rho - 0.5 * u.squaredNorm();
    return {rho, u, eos_pressure(rho, e, gas)};
}

State primitive_to_conserved(const PrimitiveState& w, const GasModel& gas) {
    if (!(w.rho > 0.0)) throw SolverError("euler", "non-positive density");
    if (!(w.p > 0.0)) throw SolverError("euler", "non-positive pressure");
    State q;
    q[0] = w.rho;
    q.segment<2>(1) = w.rho * w.vel;
    q[3] = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.vel.squaredNorm();
    return q;
}

double pressure(const State& q, const GasModel& gas) {
    return conserved_to_primitive(q, gas).p;
}

double sound_speed(const State& q, const GasModel& gas) {
    const PrimitiveState w = conserved_to_primitive(q, gas);
    return std::sqrt(gas.gamma * w.p / w.rho);
}

FluxTensor physical_flux(const State& q, const GasModel& gas) {
    const PrimitiveState w = conserved_to_primitive(q, gas);
    const double H = (q[3] + w.p) / w.rho; // total enthalpy h + |u|^2/2
    FluxTensor f;
    for (int d = 0; d < 2; ++d) {
        const double un = w.vel[d];
        f(0, d) = w.rho * un;
        f(1, d) = w.rho * w.vel[0] * un;
        f(2, d) = w.rho * w.vel[1] * un;
        f(3, d) = w.rho * H * un;
    }
    f(1, 0) += w.p;
    f(2, 1) += w.p;
    return f;
}

EigenSystem ale_eigen(const State& q, const Vec2& n, double vn, const GasModel& gas) {
    const PrimitiveState w = conserved_to_primitive(q, gas);
    const double c = std::sqrt(gas.gamma * w.p / w.rho);
    const double un = w.vel.dot(n);
    const Vec2 t(-n[1], n[0]);
    const double ut = w.vel.dot(t);
    const double H = (q[3] + w.p) / w.rho;
    const double k = 0.5 * w.vel.squaredNorm();

    EigenSystem es;
    es.lambda << un - vn - c, un - vn, un - vn, un - vn + c;

    // Right eigenvectors: acoustic-, entropy, shear, acoustic+.
    es.R.col(0) << 1.0, w.vel[0] - c * n[0], w.vel[1] - c * n[1], H - c * un;
    es.R.col(1) << 1.0, w.vel[0], w.vel[1], k;
    es.R.col(2) << 0.0, t[0], t[1], ut;
    es.R.col(3) << 1.0, w.vel[0] + c * n[0], w.vel[1] + c * n[1], H + c * un;

    const double b2 = (gas.gamma - 1.0) / (c * c);
    const double b1 = b2 * k;
    es.Rinv.row(0) << 0.5 * (b1 + un / c), 0.5 * (-b2 * w.vel[0] - n[0] / c),
        0.5 * (-b2 * w.vel[1] - n[1] / c), 0.5 * b2;
    es.Rinv.row(1) << 1.0 - b1, b2 * w.vel[0], b2 * w.vel[1], -b2;
    es.Rinv.row(2) << -ut, t[0], t[1], 0.0;
    es.Rinv.row(3) << 0.5 * (b1 - un / c), 0.5 * (-b2 * w.vel[0] + n[0] / c),
        0.5 * (-b2 * w.vel[1] + n[1] / c), 0.5 * b2;
    return es;
}

Mat4 abs_ale_jacobian(const State& q, const Vec2& n, double vn, const GasModel& gas) {
    const EigenSystem es = ale_eigen(q, n, vn, gas);
    return es.R * es.lambda.cwiseAbs().asDiagonal() * es.Rinv;
}

double entropy(const State& q, const GasModel& gas) {
    const PrimitiveState w = conserved_to_primitive(q, gas);
    return w.p / std::pow(w.rho, gas.gamma);
}

double max_signal_speed(const State& q, const Vec2& n, double vn, const GasModel& gas) {
    const PrimitiveState w = conserved_to_primitive(q, gas);
    const double c = std::sqrt(gas.gamma * w.p / w.rho);
    const double un = w.vel.dot(n) - vn;
    return std::max(std::abs(un - c), std::abs(un + c));
}

bool is_valid_state(const State& q, const GasModel& gas) {
    if (!(q[0] > 0.0) || !q.allFinite()) return false;
    const double e = q[3] / q[0] - 0.5 * q.segment<2>(1).squaredNorm() / (q[0] * q[0]);
    return e > 0.0 && gas.gamma > 1.0;
}

} // namespace alesbm
