#pragma once

#include <functional>
#include <optional>

#include "alesbm/euler.hpp"
#include "alesbm/quadrature.hpp"
#include "alesbm/weno.hpp"

namespace alesbm {

/// Nodal space-time basis on T_e x [0,1]: tensor product of the degree-M
/// Lagrange basis on the triangle lattice and the degree-M Lagrange basis
/// on M+1 equispaced tau levels. Node k = b*D + a pairs spatial node a
/// with tau level b. theta_k(node_l) = delta_kl and sum_k theta_k = 1.
class SpaceTimeBasis {
public:
    explicit SpaceTimeBasis(int M);

    int degree() const { return M_; }
    int space_size() const { return D_; }
    int time_size() const { return M_ + 1; }
    int size() const { return D_ * (M_ + 1); } // Q

    const std::vector<Vec2>& space_nodes() const { return snodes_; }
    const std::vector<double>& time_levels() const { return tlevels_; }

    /// Spatial Lagrange values (D) at a reference point.
    void eval_space(const Vec2& xi, double* psi) const;
    void eval_space_grad(const Vec2& xi, Vec2* dpsi) const;
    /// Temporal Lagrange values and derivatives (M+1) at tau.
    void eval_time(double tau, double* L, double* dL) const;
    /// All Q space-time values.
    void eval_all(const Vec2& xi, double tau, double* theta) const;

    // Reference matrices (exact for the basis degree).
    const Eigen::MatrixXd& space_mass() const { return Ms_; }     // int psi_a psi_b
    const Eigen::MatrixXd& time_mass() const { return Mt_; }      // int L_a L_b
    const Eigen::MatrixXd& time_stiff() const { return Kt1d_; }   // int L_a L_b'
    /// int psi_a d(psi_b)/dxi * m_p with moment m_p in {1, xi, eta}.
    const Eigen::MatrixXd& sxi(int p) const { return Sxi_[p]; }
    const Eigen::MatrixXd& seta(int p) const { return Seta_[p]; }

    /// Full Q x Q matrices <theta_l, d theta_k/dtau> and <theta_l, theta_k>
    /// (Kronecker products of the 1D/2D factors), mainly for testing.
    Eigen::MatrixXd ktau_full() const;
    Eigen::MatrixXd mass_full() const;

    const std::vector<LineQuadPoint>& time_rule() const;

private:
    int M_;
    int D_;
    std::vector<Vec2> snodes_;
    std::vector<double> tlevels_;
    Basis mono_;                     // monomial basis backing the Lagrange one
    Eigen::MatrixXd lagrange_coeff_; // monomial -> spatial Lagrange coefficients
    Eigen::MatrixXd Ms_, Mt_, Kt1d_;
    std::array<Eigen::MatrixXd, 3> Sxi_, Seta_;
};

/// Slab geometry of one cell: vertices move on straight lines
/// X_v(tau) = X_v + tau dt V_v. The spatial map stays affine at each tau,
/// so the Jacobian entries depend on tau only and the mesh velocity is P1.
struct SlabGeometry {
    std::array<Vec2, 3> x0;
    std::array<Vec2, 3> vel;
    double dt;

    Vec2 vertex(int k, double tau) const { return x0[k] + tau * dt * vel[k]; }
    Vec2 position(const Vec2& xi, double tau) const {
        return vertex(0, tau) + (vertex(1, tau) - vertex(0, tau)) * xi[0] +
               (vertex(2, tau) - vertex(0, tau)) * xi[1];
    }
    Vec2 velocity(const Vec2& xi) const {
        return vel[0] + (vel[1] - vel[0]) * xi[0] + (vel[2] - vel[0]) * xi[1];
    }
    /// Columns (x_xi, x_eta).
    Eigen::Matrix2d spatial_jacobian(double tau) const {
        Eigen::Matrix2d j;
        j.col(0) = vertex(1, tau) - vertex(0, tau);
        j.col(1) = vertex(2, tau) - vertex(0, tau);
        return j;
    }
    double area(double tau) const { return 0.5 * spatial_jacobian(tau).determinant(); }
    Vec2 to_reference(const Vec2& x, double tau) const;
};

SlabGeometry make_slab_geometry(const TriMesh& mesh, int cell, const std::vector<Vec2>& velocity,
                                double dt);

/// Element-local predictor: nodal states plus the nodal source used by
/// the volume integral of the update.
struct Predictor {
    Eigen::Matrix<double, Eigen::Dynamic, 4> qhat;
    Eigen::Matrix<double, Eigen::Dynamic, 4> shat;
};

State eval_spacetime(const SpaceTimeBasis& basis,
                     const Eigen::Matrix<double, Eigen::Dynamic, 4>& nodal, const Vec2& xi,
                     double tau);

/// Solves the element-local weak space-time problem by Picard iteration.
/// The tau = 0 nodal trace is pinned to the reconstruction polynomial and
/// the weak equations tested against the tau > 0 nodal functions propagate
/// it forward in the slab.
class SpaceTimePredictor {
public:
    explicit SpaceTimePredictor(int M) : basis_(M) {}

    const SpaceTimeBasis& basis() const { return basis_; }

    /// `sweep_deltas`, when given, receives the max-norm update of every
    /// Picard sweep (diagnostics for the iteration-contraction property).
    Predictor solve(const CellPolynomial& recon, const Basis& space_basis,
                    const SlabGeometry& geo, const GasModel& gas,
                    const std::function<State(const Vec2&)>* source, long cell = -1,
                    long step = -1, std::vector<double>* sweep_deltas = nullptr) const;

private:
    SpaceTimeBasis basis_;
};

} // namespace alesbm
