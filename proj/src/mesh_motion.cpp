#include "alesbm/mesh_motion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "alesbm/errors.hpp"

namespace alesbm {

Eigen::Matrix3d p1_element_stiffness(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    const double two_area = (p1 - p0)[0] * (p2 - p0)[1] - (p1 - p0)[1] * (p2 - p0)[0];
    if (two_area <= 0.0) throw SolverError("mesh_motion", "inverted element in assembly");
    const std::array<Vec2, 3> pts = {p0, p1, p2};
    std::array<Vec2, 3> grad;
    for (int a = 0; a < 3; ++a) {
        const Vec2 e = pts[(a + 2) % 3] - pts[(a + 1) % 3]; // edge opposite vertex a
        grad[a] = Vec2(-e[1], e[0]) / two_area;
    }
    Eigen::Matrix3d k;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) k(a, b) = 0.5 * two_area * grad[a].dot(grad[b]);
    return k;
}

HarmonicMotionSolver::HarmonicMotionSolver(const TriMesh& mesh) {
    const int nv = mesh.num_vertices();
    free_slot_.assign(nv, -1);
    for (int v = 0; v < nv; ++v) {
        if (!mesh.vertex_on_boundary[v]) {
            free_slot_[v] = n_free_;
            free_vertex_.push_back(v);
            ++n_free_;
        }
    }

    // Pattern: diagonal + interior-interior vertex adjacency through triangles.
    std::vector<std::set<int>> adj(n_free_);
    for (int i = 0; i < n_free_; ++i) adj[i].insert(i);
    for (const auto& t : mesh.triangles)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const int fa = free_slot_[t[a]], fb = free_slot_[t[b]];
                if (fa >= 0 && fb >= 0) adj[fa].insert(fb);
            }
    row_ptr_.assign(n_free_ + 1, 0);
    for (int i = 0; i < n_free_; ++i) row_ptr_[i + 1] = row_ptr_[i] + static_cast<int>(adj[i].size());
    col_.reserve(row_ptr_[n_free_]);
    for (int i = 0; i < n_free_; ++i) col_.insert(col_.end(), adj[i].begin(), adj[i].end());

    auto slot_of = [this](int row, int c) {
        for (int s = row_ptr_[row]; s < row_ptr_[row + 1]; ++s)
            if (col_[s] == c) return s;
        throw SolverError("mesh_motion", "internal: missing pattern slot");
    };

    element_refs_.resize(mesh.triangles.size());
    for (size_t e = 0; e < mesh.triangles.size(); ++e) {
        const auto& t = mesh.triangles[e];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                EntryRef& ref = element_refs_[e][a * 3 + b];
                const int fa = free_slot_[t[a]], fb = free_slot_[t[b]];
                if (fa < 0) {
                    ref.kind = 0; // test function on the boundary: eliminated row
                } else if (fb >= 0) {
                    ref.kind = 1;
                    ref.slot = slot_of(fa, fb);
                } else {
                    ref.kind = 2;
                    ref.row = fa;
                    ref.bvertex = t[b];
                }
            }
    }
}

std::vector<Vec2> HarmonicMotionSolver::solve(
    const TriMesh& mesh, const std::vector<std::optional<Vec2>>& boundary_velocity,
    double tol) const {
    const int nv = mesh.num_vertices();
    if (static_cast<int>(boundary_velocity.size()) != nv)
        throw SolverError("mesh_motion", "boundary velocity array size mismatch");
    for (int v = 0; v < nv; ++v)
        if (mesh.vertex_on_boundary[v] && !boundary_velocity[v].has_value())
            throw SolverError("mesh_motion", "boundary vertex without Dirichlet velocity", -1, v);

    std::vector<double> val(col_.size(), 0.0);
    std::vector<double> rhs_x(n_free_, 0.0), rhs_y(n_free_, 0.0);
    for (size_t e = 0; e < mesh.triangles.size(); ++e) {
        const auto& t = mesh.triangles[e];
        const Eigen::Matrix3d k =
            p1_element_stiffness(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const EntryRef& ref = element_refs_[e][a * 3 + b];
                if (ref.kind == 1) {
                    val[ref.slot] += k(a, b);
                } else if (ref.kind == 2) {
                    const Vec2 g = *boundary_velocity[ref.bvertex];
                    rhs_x[ref.row] -= k(a, b) * g[0];
                    rhs_y[ref.row] -= k(a, b) * g[1];
                }
            }
    }

    // Jacobi-preconditioned conjugate gradient (deterministic).
    auto cg = [this, &val, tol](const std::vector<double>& b) {
        const int n = n_free_;
        std::vector<double> x(n, 0.0);
        if (n == 0) return x;
        std::vector<double> dinv(n);
        for (int i = 0; i < n; ++i) {
            double d = 0.0;
            for (int s = row_ptr_[i]; s < row_ptr_[i + 1]; ++s)
                if (col_[s] == i) d = val[s];
            if (!(d > 0.0)) throw SolverError("mesh_motion", "non-positive diagonal in stiffness");
            dinv[i] = 1.0 / d;
        }
        auto matvec = [this, &val](const std::vector<double>& v, std::vector<double>& out) {
            for (int i = 0; i < static_cast<int>(out.size()); ++i) {
                double s = 0.0;
                for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val[k] * v[col_[k]];
                out[i] = s;
            }
        };
        const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
        if (bnorm == 0.0) return x;
        std::vector<double> r = b, z(n), p(n), ap(n);
        for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        p = z;
        double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        const int max_iter = 10 * static_cast<int>(std::ceil(std::sqrt(double(n)))) + 10;
        for (int it = 0; it < max_iter; ++it) {
            matvec(p, ap);
            const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
            if (!(pap > 0.0)) throw SolverError("mesh_motion", "CG breakdown: non-SPD system");
            const double alpha = rz / pap;
            double rnorm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
                rnorm2 += r[i] * r[i];
            }
            if (std::sqrt(rnorm2) <= tol * bnorm) return x;
            for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
            const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        throw SolverError("mesh_motion", "CG did not converge within 10*sqrt(n) iterations");
    };

    const std::vector<double> vx = cg(rhs_x);
    const std::vector<double> vy = cg(rhs_y);

    std::vector<Vec2> velocity(nv, Vec2::Zero());
    for (int v = 0; v < nv; ++v)
        if (mesh.vertex_on_boundary[v]) velocity[v] = *boundary_velocity[v];
    for (int i = 0; i < n_free_; ++i) velocity[free_vertex_[i]] = Vec2(vx[i], vy[i]);
    return velocity;
}

} // namespace alesbm
