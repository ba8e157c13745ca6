#include "alesbm/spacetime.hpp"

#include <cmath>

#include "alesbm/errors.hpp"
#include "alesbm/quadrature.hpp"

namespace alesbm {

SpaceTimeBasis::SpaceTimeBasis(int M) : M_(M), mono_(M) {
    if (M < 1 || M > 3) throw SolverError("predictor", "unsupported predictor degree");
    D_ = (M + 1) * (M + 2) / 2;

    for (int j = 0; j <= M; ++j)
        for (int i = 0; i + j <= M; ++i) snodes_.push_back(Vec2(double(i) / M, double(j) / M));
    for (int b = 0; b <= M; ++b) tlevels_.push_back(double(b) / M);

    // Spatial Lagrange basis through the monomials of the WENO basis.
    Eigen::MatrixXd vander(D_, D_);
    for (int a = 0; a < D_; ++a)
        for (int k = 0; k < D_; ++k) vander(a, k) = mono_.eval(k, snodes_[a]);
    lagrange_coeff_ = vander.inverse(); // column a: monomial coefficients of Lagrange_a

    // Reference matrices by over-integrated quadrature.
    const auto& rule = triangle_rule(2 * M + 2);
    Ms_ = Eigen::MatrixXd::Zero(D_, D_);
    for (auto& m : Sxi_) m = Eigen::MatrixXd::Zero(D_, D_);
    for (auto& m : Seta_) m = Eigen::MatrixXd::Zero(D_, D_);
    std::vector<double> psi(D_);
    std::vector<Vec2> dpsi(D_);
    for (const auto& qp : rule) {
        const Vec2 xi(qp.xi, qp.eta);
        eval_space(xi, psi.data());
        eval_space_grad(xi, dpsi.data());
        const double mom[3] = {1.0, qp.xi, qp.eta};
        for (int a = 0; a < D_; ++a)
            for (int b = 0; b < D_; ++b) {
                Ms_(a, b) += qp.w * psi[a] * psi[b];
                for (int p = 0; p < 3; ++p) {
                    Sxi_[p](a, b) += qp.w * psi[a] * dpsi[b][0] * mom[p];
                    Seta_[p](a, b) += qp.w * psi[a] * dpsi[b][1] * mom[p];
                }
            }
    }

    const auto& trule = gauss_legendre(M + 1);
    Mt_ = Eigen::MatrixXd::Zero(M + 1, M + 1);
    Kt1d_ = Eigen::MatrixXd::Zero(M + 1, M + 1);
    std::vector<double> L(M + 1), dL(M + 1);
    for (const auto& qp : trule) {
        eval_time(qp.x, L.data(), dL.data());
        for (int a = 0; a <= M; ++a)
            for (int b = 0; b <= M; ++b) {
                Mt_(a, b) += qp.w * L[a] * L[b];
                Kt1d_(a, b) += qp.w * L[a] * dL[b];
            }
    }
}

void SpaceTimeBasis::eval_space(const Vec2& xi, double* psi) const {
    for (int a = 0; a < D_; ++a) {
        double s = 0.0;
        for (int k = 0; k < D_; ++k) s += lagrange_coeff_(k, a) * mono_.eval(k, xi);
        psi[a] = s;
    }
}

void SpaceTimeBasis::eval_space_grad(const Vec2& xi, Vec2* dpsi) const {
    for (int a = 0; a < D_; ++a) {
        Vec2 g = Vec2::Zero();
        for (int k = 0; k < D_; ++k) g += lagrange_coeff_(k, a) * mono_.grad(k, xi);
        dpsi[a] = g;
    }
}

void SpaceTimeBasis::eval_time(double tau, double* L, double* dL) const {
    const int n = M_ + 1;
    for (int b = 0; b < n; ++b) {
        double v = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != b) v *= (tau - tlevels_[j]) / (tlevels_[b] - tlevels_[j]);
        L[b] = v;
        double dv = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i == b) continue;
            double term = 1.0 / (tlevels_[b] - tlevels_[i]);
            for (int j = 0; j < n; ++j)
                if (j != b && j != i) term *= (tau - tlevels_[j]) / (tlevels_[b] - tlevels_[j]);
            dv += term;
        }
        dL[b] = dv;
    }
}

void SpaceTimeBasis::eval_all(const Vec2& xi, double tau, double* theta) const {
    std::vector<double> psi(D_), L(M_ + 1), dL(M_ + 1);
    eval_space(xi, psi.data());
    eval_time(tau, L.data(), dL.data());
    for (int b = 0; b <= M_; ++b)
        for (int a = 0; a < D_; ++a) theta[b * D_ + a] = psi[a] * L[b];
}

Eigen::MatrixXd SpaceTimeBasis::ktau_full() const {
    const int Q = size();
    Eigen::MatrixXd k(Q, Q);
    for (int bl = 0; bl <= M_; ++bl)
        for (int al = 0; al < D_; ++al)
            for (int bk = 0; bk <= M_; ++bk)
                for (int ak = 0; ak < D_; ++ak)
                    k(bl * D_ + al, bk * D_ + ak) = Ms_(al, ak) * Kt1d_(bl, bk);
    return k;
}

Eigen::MatrixXd SpaceTimeBasis::mass_full() const {
    const int Q = size();
    Eigen::MatrixXd m(Q, Q);
    for (int bl = 0; bl <= M_; ++bl)
        for (int al = 0; al < D_; ++al)
            for (int bk = 0; bk <= M_; ++bk)
                for (int ak = 0; ak < D_; ++ak)
                    m(bl * D_ + al, bk * D_ + ak) = Ms_(al, ak) * Mt_(bl, bk);
    return m;
}

const std::vector<LineQuadPoint>& SpaceTimeBasis::time_rule() const {
    return gauss_legendre(M_ + 1);
}

Vec2 SlabGeometry::to_reference(const Vec2& x, double tau) const {
    const Eigen::Matrix2d j = spatial_jacobian(tau);
    const Vec2 rel = x - vertex(0, tau);
    const double det = j.determinant();
    if (std::abs(det) < 1e-300) throw SolverError("predictor", "degenerate slab geometry");
    return Vec2((rel[0] * j(1, 1) - rel[1] * j(0, 1)) / det,
                (j(0, 0) * rel[1] - j(1, 0) * rel[0]) / det);
}

SlabGeometry make_slab_geometry(const TriMesh& mesh, int cell, const std::vector<Vec2>& velocity,
                                double dt) {
    const auto& t = mesh.triangles[cell];
    SlabGeometry g;
    g.x0 = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    g.vel = {velocity[t[0]], velocity[t[1]], velocity[t[2]]};
    g.dt = dt;
    if (g.area(1.0) <= 0.0)
        throw SolverError("predictor", "slab geometry degenerates within the time step", -1, cell);
    return g;
}

State eval_spacetime(const SpaceTimeBasis& basis,
                     const Eigen::Matrix<double, Eigen::Dynamic, 4>& nodal, const Vec2& xi,
                     double tau) {
    const int D = basis.space_size();
    const int nt = basis.time_size();
    std::vector<double> psi(D), L(nt), dL(nt);
    basis.eval_space(xi, psi.data());
    basis.eval_time(tau, L.data(), dL.data());
    State q = State::Zero();
    for (int b = 0; b < nt; ++b) {
        if (L[b] == 0.0) continue;
        State level = State::Zero();
        for (int a = 0; a < D; ++a) level += psi[a] * nodal.row(b * D + a).transpose();
        q += L[b] * level;
    }
    return q;
}

Predictor SpaceTimePredictor::solve(const CellPolynomial& recon, const Basis& space_basis,
                                    const SlabGeometry& geo, const GasModel& gas,
                                    const std::function<State(const Vec2&)>* source, long cell,
                                    long step, std::vector<double>* sweep_deltas) const {
    const int M = basis_.degree();
    const int D = basis_.space_size();
    const int nt = M + 1;
    const int Q = D * nt;
    const int nu = D * M; // unknown nodal coefficients (tau levels 1..M)
    const double dt = geo.dt;

    // Temporal coefficient matrices: inverse-Jacobian entries sampled at
    // the Gauss points in tau (they depend on tau only).
    const auto& trule = basis_.time_rule();
    const int nq = static_cast<int>(trule.size());
    Eigen::MatrixXd t_ae(nt, nt), t_be(nt, nt), t_ce(nt, nt), t_de(nt, nt);
    t_ae.setZero();
    t_be.setZero();
    t_ce.setZero();
    t_de.setZero();
    std::vector<double> L(nt), dL(nt);
    for (int g = 0; g < nq; ++g) {
        const double tau = trule[g].x;
        const Eigen::Matrix2d j = geo.spatial_jacobian(tau);
        const double e = j.determinant();
        if (!(e > 0.0))
            throw SolverError("predictor", "negative Jacobian inside slab", step, cell);
        basis_.eval_time(tau, L.data(), dL.data());
        const double w = trule[g].w;
        for (int l = 0; l < nt; ++l)
            for (int k = 0; k < nt; ++k) {
                const double lk = w * L[l] * L[k];
                t_ae(l, k) += lk * j(0, 0) / e;
                t_be(l, k) += lk * j(0, 1) / e;
                t_ce(l, k) += lk * j(1, 0) / e;
                t_de(l, k) += lk * j(1, 1) / e;
            }
    }

    // Spatial factors of the mesh-motion term: velocity components are P1,
    // V(xi) = V0 + dV1 xi + dV2 eta.
    const Vec2 dv1 = geo.vel[1] - geo.vel[0];
    const Vec2 dv2 = geo.vel[2] - geo.vel[0];
    auto blend = [this](double c0, double c1, double c2, const std::array<Eigen::MatrixXd, 3>& s) {
        return (c0 * s[0] + c1 * s[1] + c2 * s[2]).eval();
    };
    const std::array<Eigen::MatrixXd, 3> sxi = {basis_.sxi(0), basis_.sxi(1), basis_.sxi(2)};
    const std::array<Eigen::MatrixXd, 3> seta = {basis_.seta(0), basis_.seta(1), basis_.seta(2)};
    const Eigen::MatrixXd sxi_vx = blend(geo.vel[0][0], dv1[0], dv2[0], sxi);
    const Eigen::MatrixXd sxi_vy = blend(geo.vel[0][1], dv1[1], dv2[1], sxi);
    const Eigen::MatrixXd seta_vx = blend(geo.vel[0][0], dv1[0], dv2[0], seta);
    const Eigen::MatrixXd seta_vy = blend(geo.vel[0][1], dv1[1], dv2[1], seta);

    // LHS rows: test functions at tau levels >= 1. Columns: all Q nodes.
    // K_tau + dt*K_t, with K_t = <theta_l, dxi(theta_k) xi_t + deta(theta_k) eta_t>,
    // xi_t = (b Vy - d Vx)/e, eta_t = (c Vx - a Vy)/e.
    const Eigen::MatrixXd& ms = basis_.space_mass();
    const Eigen::MatrixXd& kt1d = basis_.time_stiff();
    Eigen::MatrixXd lhs(nu, Q);
    for (int bl = 1; bl < nt; ++bl)
        for (int al = 0; al < D; ++al) {
            const int row = (bl - 1) * D + al;
            for (int bk = 0; bk < nt; ++bk)
                for (int ak = 0; ak < D; ++ak) {
                    double v = ms(al, ak) * kt1d(bl, bk);
                    v += dt * (sxi_vy(al, ak) * t_be(bl, bk) - sxi_vx(al, ak) * t_de(bl, bk) +
                               seta_vx(al, ak) * t_ce(bl, bk) - seta_vy(al, ak) * t_ae(bl, bk));
                    lhs(row, bk * D + ak) = v;
                }
        }

    // tau = 0 trace pinned to the reconstruction polynomial.
    Predictor out;
    out.qhat.resize(Q, 4);
    for (int a = 0; a < D; ++a)
        out.qhat.row(a) = evaluate(recon, space_basis, basis_.space_nodes()[a]).transpose();
    for (int b = 1; b < nt; ++b) out.qhat.middleRows(b * D, D) = out.qhat.topRows(D);

    Eigen::Matrix<double, Eigen::Dynamic, 4> rhs_known(nu, 4);
    rhs_known = -lhs.leftCols(D) * out.qhat.topRows(D);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs.rightCols(nu));

    // Nodal physical positions (for the source) are fixed by the geometry.
    Eigen::Matrix<double, Eigen::Dynamic, 2> node_pos(Q, 2);
    for (int b = 0; b < nt; ++b)
        for (int a = 0; a < D; ++a)
            node_pos.row(b * D + a) =
                geo.position(basis_.space_nodes()[a], basis_.time_levels()[b]).transpose();

    out.shat.resize(Q, 4);
    out.shat.setZero();

    Eigen::Matrix<double, Eigen::Dynamic, 4> fhat(Q, 4), ghat(Q, 4);
    const int max_sweeps = 2 * (M + 1);
    const Eigen::MatrixXd& mt = basis_.time_mass();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int k = 0; k < Q; ++k) {
            const State q = out.qhat.row(k).transpose();
            if (!is_valid_state(q, gas))
                throw SolverError("predictor", "invalid state during Picard iteration", step,
                                  cell);
            const FluxTensor f = physical_flux(q, gas);
            fhat.row(k) = f.col(0).transpose();
            ghat.row(k) = f.col(1).transpose();
            if (source) out.shat.row(k) = (*source)(node_pos.row(k).transpose()).transpose();
        }

        // Sandwich products: K_x f = Sxi0 F Txix^T + Seta0 F Txetax^T etc.,
        // with F arranged D x nt per component.
        Eigen::Matrix<double, Eigen::Dynamic, 4> rhs = rhs_known;
        for (int comp = 0; comp < 4; ++comp) {
            Eigen::MatrixXd F(D, nt), G(D, nt), S(D, nt);
            for (int b = 0; b < nt; ++b)
                for (int a = 0; a < D; ++a) {
                    F(a, b) = fhat(b * D + a, comp);
                    G(a, b) = ghat(b * D + a, comp);
                    S(a, b) = out.shat(b * D + a, comp);
                }
            // xi_x = d/e, eta_x = -c/e, xi_y = -b/e, eta_y = a/e.
            Eigen::MatrixXd R = sxi[0] * F * t_de.transpose() - seta[0] * F * t_ce.transpose() -
                                sxi[0] * G * t_be.transpose() + seta[0] * G * t_ae.transpose();
            if (source) R -= ms * S * mt.transpose();
            for (int b = 1; b < nt; ++b)
                for (int a = 0; a < D; ++a) rhs((b - 1) * D + a, comp) -= dt * R(a, b);
        }

        const Eigen::Matrix<double, Eigen::Dynamic, 4> qu = lu.solve(rhs);
        double delta = 0.0, scale = 0.0;
        for (int k = 0; k < nu; ++k) {
            delta = std::max(delta, (qu.row(k) - out.qhat.row(D + k)).cwiseAbs().maxCoeff());
            scale = std::max(scale, qu.row(k).cwiseAbs().maxCoeff());
        }
        if (sweep_deltas) sweep_deltas->push_back(delta);
        out.qhat.bottomRows(nu) = qu;
        if (!out.qhat.allFinite())
            throw SolverError("predictor", "non-finite predictor coefficients", step, cell);
        if (delta <= 1e-12 * (1.0 + scale)) break;
    }

    // Refresh the source at the converged states' positions (positions are
    // fixed, so only needed if the loop exited before evaluating).
    if (source)
        for (int k = 0; k < Q; ++k)
            out.shat.row(k) = (*source)(node_pos.row(k).transpose()).transpose();
    return out;
}

} // namespace alesbm
