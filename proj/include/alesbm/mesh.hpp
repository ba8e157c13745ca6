#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "alesbm/euler.hpp"

namespace alesbm {

/// Affine map between the reference triangle (0,0)-(1,0)-(0,1) and a
/// physical triangle given by its three vertices.
struct ReferenceMap {
    Vec2 x1, x2, x3;

    Vec2 to_physical(const Vec2& ref) const {
        return x1 + (x2 - x1) * ref[0] + (x3 - x1) * ref[1];
    }
    Vec2 to_reference(const Vec2& phys) const;
    /// det of the spatial Jacobian = 2 * triangle area.
    double jacobian_det() const {
        const Vec2 a = x2 - x1, b = x3 - x1;
        return a[0] * b[1] - a[1] * b[0];
    }
};

struct Edge {
    std::array<int, 2> v;  ///< endpoints, ordered so `left` sees them CCW
    int left = -1;         ///< owning cell
    int right = -1;        ///< neighbor cell, -1 on the boundary
    int tag = -1;          ///< boundary tag index, -1 for interior edges
};

/// Conforming triangle mesh with mutable vertex positions and immutable
/// connectivity. Triangles are counterclockwise.
struct TriMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> cell_edges; ///< edge id for local edge k = (v_k, v_{k+1})
    std::vector<std::string> tag_names;
    std::vector<char> vertex_on_boundary;

    int num_cells() const { return static_cast<int>(triangles.size()); }
    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    double area(int cell) const;
    Vec2 barycenter(int cell) const;
    ReferenceMap cell_map(int cell) const;
    double incircle_diameter(int cell) const;
    double circumcircle_diameter(int cell) const;
    /// max circumcircle diameter over all cells (the reported grid size).
    double grid_size() const;
    double total_area() const;

    int tag_id(const std::string& name) const; ///< -1 if absent
    bool is_boundary_edge(int edge) const { return edges[edge].right < 0; }
    /// Cell across local edge k of `cell`, -1 on the boundary.
    int neighbor(int cell, int k) const {
        const Edge& e = edges[cell_edges[cell][k]];
        return e.left == cell ? e.right : e.left;
    }

    /// FNV-1a hash of the connectivity arrays (not positions); used to
    /// assert that topology never changes during a run.
    std::uint64_t connectivity_checksum() const;
};

/// Directed boundary edge specification (v1, v2, tag name); orientation
/// is not significant.
struct BoundaryEdgeSpec {
    int v1;
    int v2;
    std::string tag;
};

/// Builds edge connectivity from raw triangles. Throws on non-conforming
/// input (an edge shared by more than two triangles, inverted triangles,
/// tags naming non-boundary edges). Boundary edges missing from `tags`
/// receive the tag "boundary".
TriMesh build_connectivity(std::vector<Vec2> vertices,
                           std::vector<std::array<int, 3>> triangles,
                           const std::vector<BoundaryEdgeSpec>& tags = {});

/// Average of `field` over a physical cell, by a rule exact to `degree`.
double cell_average(const ReferenceMap& map, const std::function<double(Vec2)>& field,
                    int degree);

/// Structured polar annulus: rings at n_r+1 radii, n_theta vertices each,
/// quads split along alternating diagonals. Boundary tags "inner"/"outer".
TriMesh generate_annulus(double r_inner, double r_outer, int n_r, int n_theta,
                         const Vec2& center = Vec2::Zero());

/// Disk of radius r: n concentric rings, ring k carrying 6k vertices, so
/// triangles stay near-equilateral. Boundary tag "outer".
TriMesh generate_disk(double r, int n, const Vec2& center = Vec2::Zero());

/// Structured rectangle mesh, alternating diagonals, boundary tag "outer".
TriMesh generate_rect(double x0, double y0, double x1, double y1, int nx, int ny);

/// Annulus from a circle of radius r (tag "wall") out to the square
/// [-half|+half]^2 (tag "farfield"), geometrically graded in the radial
/// direction. n_theta must be a multiple of 8 so vertices hit the corners.
TriMesh generate_cylinder_box(double r, double half_width, int n_theta, int n_r,
                              const Vec2& center = Vec2::Zero());

/// ASCII mesh format: `NV NT NB`, NV lines `x y`, NT lines `v1 v2 v3`
/// (1-based, CCW), NB lines `v1 v2 tag`. '#' starts a comment.
TriMesh read_mesh(const std::string& path);
void write_mesh(const TriMesh& mesh, const std::string& path);

/// Applies per-vertex displacements in place; throws a tangled-mesh error
/// naming the first inverted cell.
void move_vertices(TriMesh& mesh, const std::vector<Vec2>& displacement);

} // namespace alesbm
