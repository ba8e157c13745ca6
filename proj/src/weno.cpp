#include "alesbm/weno.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "alesbm/errors.hpp"
#include "alesbm/quadrature.hpp"

namespace alesbm {

namespace {
constexpr double kCenter = 1.0 / 3.0;

double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double falling_factorial(int a, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (a - i);
    return r;
}
} // namespace

Basis::Basis(int degree) : degree_(degree) {
    if (degree < 0 || degree > 4) throw SolverError("weno", "unsupported basis degree");
    for (int total = 0; total <= degree; ++total)
        for (int a = total; a >= 0; --a) exps_.push_back({a, total - a});
    size_ = static_cast<int>(exps_.size());

    moments_.resize(size_);
    const auto& rule = triangle_rule(2 * degree + 2);
    for (int k = 0; k < size_; ++k) {
        double s = 0.0;
        for (const auto& qp : rule) s += qp.w * eval(k, Vec2(qp.xi, qp.eta));
        moments_[k] = 2.0 * s;
    }

    sigma_ = Eigen::MatrixXd::Zero(size_, size_);
    for (int ax = 0; ax <= degree; ++ax)
        for (int ay = 0; ay <= degree - ax; ++ay) {
            if (ax + ay < 1) continue;
            for (int k = 0; k < size_; ++k)
                for (int m = 0; m < size_; ++m) {
                    double s = 0.0;
                    for (const auto& qp : rule)
                        s += qp.w * derivative(k, ax, ay, Vec2(qp.xi, qp.eta)) *
                             derivative(m, ax, ay, Vec2(qp.xi, qp.eta));
                    sigma_(k, m) += s;
                }
        }
}

double Basis::eval(int k, const Vec2& ref) const {
    const auto [a, b] = exps_[k];
    return int_pow(ref[0] - kCenter, a) * int_pow(ref[1] - kCenter, b);
}

Vec2 Basis::grad(int k, const Vec2& ref) const {
    const auto [a, b] = exps_[k];
    const double x = ref[0] - kCenter, y = ref[1] - kCenter;
    Vec2 g(0.0, 0.0);
    if (a > 0) g[0] = a * int_pow(x, a - 1) * int_pow(y, b);
    if (b > 0) g[1] = b * int_pow(x, a) * int_pow(y, b - 1);
    return g;
}

double Basis::derivative(int k, int ax, int ay, const Vec2& ref) const {
    const auto [a, b] = exps_[k];
    if (ax > a || ay > b) return 0.0;
    const double x = ref[0] - kCenter, y = ref[1] - kCenter;
    return falling_factorial(a, ax) * falling_factorial(b, ay) * int_pow(x, a - ax) *
           int_pow(y, b - ay);
}

State evaluate(const CellPolynomial& poly, const Basis& basis, const Vec2& ref) {
    State q = State::Zero();
    for (int k = 0; k < basis.size(); ++k) {
        const double psi = basis.eval(k, ref);
        q += psi * poly.coeff.row(k).transpose();
    }
    return q;
}

namespace {

// Breadth-first stencil growth. `accept` filters candidate cells; the
// last ring is truncated by distance to the owner barycenter so the
// stencil has exactly `target` members when enough cells are reachable.
std::vector<int> grow_stencil(const TriMesh& mesh, int owner, int target,
                              const std::function<bool(int)>& accept) {
    std::vector<int> members{owner};
    std::vector<char> in(mesh.num_cells(), 0);
    in[owner] = 1;
    std::vector<int> ring{owner};
    const Vec2 xc = mesh.barycenter(owner);
    while (static_cast<int>(members.size()) < target && !ring.empty()) {
        std::set<int> next_set;
        for (int c : ring)
            for (int k = 0; k < 3; ++k) {
                const int nb = mesh.neighbor(c, k);
                if (nb >= 0 && !in[nb] && accept(nb)) next_set.insert(nb);
            }
        std::vector<int> next(next_set.begin(), next_set.end());
        const int missing = target - static_cast<int>(members.size());
        if (static_cast<int>(next.size()) > missing) {
            std::sort(next.begin(), next.end(), [&mesh, &xc](int a, int b) {
                const double da = (mesh.barycenter(a) - xc).squaredNorm();
                const double db = (mesh.barycenter(b) - xc).squaredNorm();
                return da != db ? da < db : a < b;
            });
            next.resize(missing);
        }
        for (int c : next) {
            in[c] = 1;
            members.push_back(c);
        }
        ring = std::move(next);
    }
    return members;
}

} // namespace

std::vector<std::vector<Stencil>> build_stencils(const TriMesh& mesh, int M) {
    const int D = (M + 1) * (M + 2) / 2;
    const int target = 2 * D;
    std::vector<std::vector<Stencil>> out(mesh.num_cells());

    for (int i = 0; i < mesh.num_cells(); ++i) {
        auto& list = out[i];
        std::vector<int> central = grow_stencil(mesh, i, target, [](int) { return true; });
        if (static_cast<int>(central.size()) < target)
            throw SolverError("weno", "mesh too small to fill central stencil", -1, i);
        list.push_back({i, 0, std::move(central)});

        const Vec2 xc = mesh.barycenter(i);
        const auto& tri = mesh.triangles[i];
        for (int k = 0; k < 3; ++k) {
            const Vec2 ra = mesh.vertices[tri[k]] - xc;
            const Vec2 rb = mesh.vertices[tri[(k + 1) % 3]] - xc;
            auto in_wedge = [&](int c) {
                const Vec2 d = mesh.barycenter(c) - xc;
                const double tol = 1e-12 * d.norm();
                return ra[0] * d[1] - ra[1] * d[0] >= -tol * ra.norm() &&
                       d[0] * rb[1] - d[1] * rb[0] >= -tol * rb.norm();
            };
            std::vector<int> sector = grow_stencil(mesh, i, target, in_wedge);
            if (static_cast<int>(sector.size()) == target)
                list.push_back({i, k + 1, std::move(sector)});
        }
    }
    return out;
}

WenoReconstruction::WenoReconstruction(const TriMesh& mesh, int M)
    : basis_(M), stencils_(build_stencils(mesh, M)), quad_degree_(2 * M + 2) {}

Eigen::Matrix<double, Eigen::Dynamic, 4> WenoReconstruction::reconstruct_stencil(
    const TriMesh& mesh, const Stencil& stencil, const std::vector<State>& averages) const {
    const int D = basis_.size();
    const int ns = static_cast<int>(stencil.members.size());
    const Eigen::VectorXd& c = basis_.average_weights();
    const ReferenceMap owner_map = mesh.cell_map(stencil.owner);
    const auto& rule = triangle_rule(quad_degree_);

    // Row j: average of owner-frame basis functions over member cell j.
    Eigen::MatrixXd A(ns, D);
    for (int j = 0; j < ns; ++j) {
        const int cell = stencil.members[j];
        if (cell == stencil.owner) {
            A.row(j) = c.transpose();
            continue;
        }
        const ReferenceMap mj = mesh.cell_map(cell);
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(D);
        for (const auto& qp : rule) {
            const Vec2 ref_i = owner_map.to_reference(mj.to_physical(Vec2(qp.xi, qp.eta)));
            for (int k = 0; k < D; ++k) row[k] += qp.w * basis_.eval(k, ref_i);
        }
        A.row(j) = 2.0 * row;
    }

    // Conservation on the owner is enforced exactly by eliminating the
    // constraint c . w = Q_owner through the null space of c (c_0 = 1):
    // w = Q_owner e_0 + N z.
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(D, D - 1);
    for (int m = 0; m < D - 1; ++m) {
        N(0, m) = -c[m + 1];
        N(m + 1, m) = 1.0;
    }
    const Eigen::MatrixXd B = A * N;
    Eigen::Matrix<double, Eigen::Dynamic, 4> rhs(ns, 4);
    const State q_owner = averages[stencil.owner];
    for (int j = 0; j < ns; ++j)
        rhs.row(j) = (averages[stencil.members[j]] - q_owner).transpose();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    if (qr.rank() < D - 1)
        throw SolverError("weno", "rank-deficient reconstruction system", -1, stencil.owner);
    const Eigen::Matrix<double, Eigen::Dynamic, 4> z = qr.solve(rhs);

    Eigen::Matrix<double, Eigen::Dynamic, 4> w(D, 4);
    w.row(0) = q_owner.transpose();
    for (int m = 0; m < D - 1; ++m) {
        w.row(0) -= c[m + 1] * z.row(m);
        w.row(m + 1) = z.row(m);
    }
    return w;
}

Eigen::Vector4d WenoReconstruction::oscillation(
    const Eigen::Matrix<double, Eigen::Dynamic, 4>& coeff) const {
    Eigen::Vector4d s;
    const Eigen::MatrixXd& sig = basis_.oscillation_matrix();
    for (int c = 0; c < 4; ++c) s[c] = coeff.col(c).dot(sig * coeff.col(c));
    return s;
}

Eigen::VectorXd WenoReconstruction::weno_weights(const std::vector<Eigen::Vector4d>& sigmas,
                                                 const std::vector<int>& kinds, int component) {
    Eigen::VectorXd wt(sigmas.size());
    for (size_t s = 0; s < sigmas.size(); ++s) {
        const double lambda = kinds[s] == 0 ? kLambdaCentral : kLambdaSector;
        wt[s] = lambda / std::pow(sigmas[s][component] + kEpsilon, kExponent);
    }
    return wt / wt.sum();
}

Eigen::Matrix<double, Eigen::Dynamic, 4> WenoReconstruction::weno_combine(
    const std::vector<Eigen::Matrix<double, Eigen::Dynamic, 4>>& candidates,
    const std::vector<Eigen::Vector4d>& sigmas, const std::vector<int>& kinds) {
    if (candidates.empty()) throw SolverError("weno", "weno_combine: no stencils");
    const auto rows = candidates[0].rows();
    Eigen::Matrix<double, Eigen::Dynamic, 4> out = Eigen::MatrixXd::Zero(rows, 4);
    for (int c = 0; c < 4; ++c) {
        const Eigen::VectorXd omega = weno_weights(sigmas, kinds, c);
        for (size_t s = 0; s < candidates.size(); ++s)
            out.col(c) += omega[s] * candidates[s].col(c);
    }
    return out;
}

std::vector<CellPolynomial> WenoReconstruction::reconstruct(
    const TriMesh& mesh, const std::vector<State>& averages) const {
    const int nc = mesh.num_cells();
    std::vector<CellPolynomial> polys(nc);
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < nc; ++i) {
        if (failure) continue;
        try {
            const auto& cell_stencils = stencils_[i];
            std::vector<Eigen::Matrix<double, Eigen::Dynamic, 4>> cands;
            std::vector<Eigen::Vector4d> sig;
            std::vector<int> kinds;
            cands.reserve(cell_stencils.size());
            for (const Stencil& s : cell_stencils) {
                cands.push_back(reconstruct_stencil(mesh, s, averages));
                sig.push_back(oscillation(cands.back()));
                kinds.push_back(s.kind);
            }
            polys[i].coeff = weno_combine(cands, sig, kinds);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return polys;
}

} // namespace alesbm
