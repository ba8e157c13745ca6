#pragma once

#include <optional>
#include <vector>

#include "alesbm/mesh.hpp"

namespace alesbm {

/// P1 stiffness of one triangle (row sums are zero).
Eigen::Matrix3d p1_element_stiffness(const Vec2& p0, const Vec2& p1, const Vec2& p2);

/// Harmonic extension of prescribed boundary velocities to the interior
/// vertices: -lap V = 0 with Dirichlet data, discretized by P1 finite
/// elements on the current geometry. The sparsity pattern is built once
/// from the (fixed) topology; values are reassembled on every solve.
class HarmonicMotionSolver {
public:
    explicit HarmonicMotionSolver(const TriMesh& mesh);

    /// boundary_velocity[v] must hold a value for every boundary vertex.
    /// Returns per-vertex velocities; boundary vertices carry the data
    /// exactly. Throws on uncovered boundary vertices or non-convergence
    /// (Jacobi-PCG, relative residual <= tol within 10*sqrt(n) iterations).
    std::vector<Vec2> solve(const TriMesh& mesh,
                            const std::vector<std::optional<Vec2>>& boundary_velocity,
                            double tol = 1e-10) const;

    int num_free() const { return n_free_; }

private:
    int n_free_ = 0;
    std::vector<int> free_slot_;          // vertex -> free index or -1
    std::vector<int> free_vertex_;        // free index -> vertex
    std::vector<int> row_ptr_, col_;      // CSR pattern over free vertices
    // Per triangle, per (a,b) vertex pair: destination slot in `val`
    // (interior x interior) or ~rhs coupling (interior row, boundary col).
    struct EntryRef {
        int kind; // 0: skip, 1: matrix slot, 2: rhs coupling (row = free, col = boundary vertex)
        int slot;
        int row;
        int bvertex;
    };
    std::vector<std::array<EntryRef, 9>> element_refs_;
};

} // namespace alesbm
