#pragma once

#include <vector>

#include "alesbm/mesh.hpp"

namespace alesbm {

/// Monomial basis (xi - 1/3)^a (eta - 1/3)^b, a + b <= M, on the reference
/// triangle; centering at the barycenter improves conditioning. psi_0 = 1.
class Basis {
public:
    explicit Basis(int degree);

    int degree() const { return degree_; }
    int size() const { return size_; } // D = (M+1)(M+2)/2

    double eval(int k, const Vec2& ref) const;
    Vec2 grad(int k, const Vec2& ref) const;
    /// Mixed derivative d^{ax+ay} psi_k / dxi^ax deta^ay.
    double derivative(int k, int ax, int ay, const Vec2& ref) const;

    /// Cell-average weights: c_k = (1/|T|) int_T psi_k dV = 2 int_{T_e} psi_k.
    const Eigen::VectorXd& average_weights() const { return moments_; }

    /// Oscillation quadratic form over derivative orders 1..M.
    const Eigen::MatrixXd& oscillation_matrix() const { return sigma_; }

private:
    int degree_;
    int size_;
    std::vector<std::array<int, 2>> exps_;
    Eigen::VectorXd moments_;
    Eigen::MatrixXd sigma_;
};

/// Reconstruction stencil: owner plus members grown by adjacency.
struct Stencil {
    int owner;
    int kind; ///< 0 = central, 1..3 = sector opposite local edge kind-1
    std::vector<int> members;
};

/// 1 central + up to 3 sector stencils per cell, each with exactly
/// 2D members; sector stencils that cannot reach 2D members (boundary
/// cells) are dropped. Throws if a central stencil cannot be filled.
std::vector<std::vector<Stencil>> build_stencils(const TriMesh& mesh, int M);

/// Per-cell polynomial coefficients, one column per conserved component.
struct CellPolynomial {
    Eigen::Matrix<double, Eigen::Dynamic, 4> coeff;
};

State evaluate(const CellPolynomial& poly, const Basis& basis, const Vec2& ref);

/// WENO reconstruction operator: stencils and basis are fixed at setup
/// (topology never changes); the least-squares systems are reassembled on
/// the current geometry at every call.
class WenoReconstruction {
public:
    WenoReconstruction(const TriMesh& mesh, int M);

    const Basis& basis() const { return basis_; }
    const std::vector<std::vector<Stencil>>& stencils() const { return stencils_; }

    /// Constrained least squares on one stencil: member cell averages are
    /// matched in the least-squares sense, the owner average exactly.
    Eigen::Matrix<double, Eigen::Dynamic, 4> reconstruct_stencil(
        const TriMesh& mesh, const Stencil& stencil, const std::vector<State>& averages) const;

    /// sigma_s per conserved component.
    Eigen::Vector4d oscillation(const Eigen::Matrix<double, Eigen::Dynamic, 4>& coeff) const;

    /// Normalized nonlinear weights of one conserved component.
    static Eigen::VectorXd weno_weights(const std::vector<Eigen::Vector4d>& sigmas,
                                        const std::vector<int>& kinds, int component);

    /// Nonlinear combination; candidates/sigmas indexed as stencils
    /// (kind 0 gets the large linear weight).
    static Eigen::Matrix<double, Eigen::Dynamic, 4> weno_combine(
        const std::vector<Eigen::Matrix<double, Eigen::Dynamic, 4>>& candidates,
        const std::vector<Eigen::Vector4d>& sigmas, const std::vector<int>& kinds);

    /// Full WENO reconstruction for every cell (parallel over cells).
    std::vector<CellPolynomial> reconstruct(const TriMesh& mesh,
                                            const std::vector<State>& averages) const;

    static constexpr double kEpsilon = 1e-14;
    static constexpr double kExponent = 8.0;
    static constexpr double kLambdaCentral = 1e5;
    static constexpr double kLambdaSector = 1.0;

private:
    Basis basis_;
    std::vector<std::vector<Stencil>> stencils_;
    int quad_degree_;
};

} // namespace alesbm
