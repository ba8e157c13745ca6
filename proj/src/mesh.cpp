#include "alesbm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "alesbm/errors.hpp"
#include "alesbm/quadrature.hpp"

namespace alesbm {

Vec2 ReferenceMap::to_reference(const Vec2& phys) const {
    const Vec2 a = x2 - x1, b = x3 - x1, r = phys - x1;
    const double det = a[0] * b[1] - a[1] * b[0];
    if (std::abs(det) < 1e-300) throw SolverError("mesh", "degenerate triangle in reference map");
    return Vec2((r[0] * b[1] - r[1] * b[0]) / det, (a[0] * r[1] - a[1] * r[0]) / det);
}

double TriMesh::area(int cell) const {
    const auto& t = triangles[cell];
    const Vec2 a = vertices[t[1]] - vertices[t[0]];
    const Vec2 b = vertices[t[2]] - vertices[t[0]];
    return 0.5 * (a[0] * b[1] - a[1] * b[0]);
}

Vec2 TriMesh::barycenter(int cell) const {
    const auto& t = triangles[cell];
    return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

ReferenceMap TriMesh::cell_map(int cell) const {
    const auto& t = triangles[cell];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
}

double TriMesh::incircle_diameter(int cell) const {
    const auto& t = triangles[cell];
    const double a = (vertices[t[1]] - vertices[t[0]]).norm();
    const double b = (vertices[t[2]] - vertices[t[1]]).norm();
    const double c = (vertices[t[0]] - vertices[t[2]]).norm();
    return 4.0 * area(cell) / (a + b + c);
}

double TriMesh::circumcircle_diameter(int cell) const {
    const auto& t = triangles[cell];
    const double a = (vertices[t[1]] - vertices[t[0]]).norm();
    const double b = (vertices[t[2]] - vertices[t[1]]).norm();
    const double c = (vertices[t[0]] - vertices[t[2]]).norm();
    return a * b * c / (2.0 * area(cell));
}

double TriMesh::grid_size() const {
    double h = 0.0;
    for (int i = 0; i < num_cells(); ++i) h = std::max(h, circumcircle_diameter(i));
    return h;
}

double TriMesh::total_area() const {
    double s = 0.0;
    for (int i = 0; i < num_cells(); ++i) s += area(i);
    return s;
}

int TriMesh::tag_id(const std::string& name) const {
    for (size_t i = 0; i < tag_names.size(); ++i)
        if (tag_names[i] == name) return static_cast<int>(i);
    return -1;
}

std::uint64_t TriMesh::connectivity_checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    for (const auto& t : triangles)
        for (int v : t) mix(static_cast<std::uint64_t>(v) + 1);
    for (const auto& e : edges) {
        mix(static_cast<std::uint64_t>(e.v[0]) + 1);
        mix(static_cast<std::uint64_t>(e.v[1]) + 1);
        mix(static_cast<std::uint64_t>(e.left) + 2);
        mix(static_cast<std::uint64_t>(e.right) + 2);
        mix(static_cast<std::uint64_t>(e.tag) + 2);
    }
    return h;
}

TriMesh build_connectivity(std::vector<Vec2> vertices,
                           std::vector<std::array<int, 3>> triangles,
                           const std::vector<BoundaryEdgeSpec>& tags) {
    TriMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);

    const int nv = mesh.num_vertices();
    for (size_t c = 0; c < mesh.triangles.size(); ++c) {
        for (int v : mesh.triangles[c])
            if (v < 0 || v >= nv)
                throw SolverError("mesh", "triangle references vertex out of range", -1,
                                  static_cast<long>(c));
        const Vec2 a = mesh.vertices[mesh.triangles[c][1]] - mesh.vertices[mesh.triangles[c][0]];
        const Vec2 b = mesh.vertices[mesh.triangles[c][2]] - mesh.vertices[mesh.triangles[c][0]];
        if (a[0] * b[1] - a[1] * b[0] <= 0.0)
            throw SolverError("mesh", "triangle has non-positive area", -1, static_cast<long>(c));
    }

    std::map<std::pair<int, int>, int> edge_of; // (min,max) vertex pair -> edge id
    mesh.cell_edges.assign(mesh.triangles.size(), {-1, -1, -1});
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& t = mesh.triangles[c];
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3];
            const auto key = std::minmax(a, b);
            auto it = edge_of.find(key);
            if (it == edge_of.end()) {
                Edge e;
                e.v = {a, b}; // left cell sees (a, b) CCW
                e.left = c;
                edge_of.emplace(key, mesh.num_edges());
                mesh.cell_edges[c][k] = mesh.num_edges();
                mesh.edges.push_back(e);
            } else {
                Edge& e = mesh.edges[it->second];
                if (e.right >= 0)
                    throw SolverError("mesh", "edge shared by more than two triangles", -1,
                                      it->second);
                if (e.v[0] != b || e.v[1] != a)
                    throw SolverError("mesh", "inconsistent edge orientation (not conforming)",
                                      -1, it->second);
                e.right = c;
                mesh.cell_edges[c][k] = it->second;
            }
        }
    }

    auto intern_tag = [&mesh](const std::string& name) {
        const int id = mesh.tag_id(name);
        if (id >= 0) return id;
        mesh.tag_names.push_back(name);
        return static_cast<int>(mesh.tag_names.size()) - 1;
    };

    for (const auto& spec : tags) {
        const auto key = std::minmax(spec.v1, spec.v2);
        auto it = edge_of.find(key);
        if (it == edge_of.end())
            throw SolverError("mesh", "boundary tag names a non-existent edge");
        Edge& e = mesh.edges[it->second];
        if (e.right >= 0)
            throw SolverError("mesh", "boundary tag names an interior edge", -1, it->second);
        e.tag = intern_tag(spec.tag);
    }
    for (int i = 0; i < mesh.num_edges(); ++i) {
        Edge& e = mesh.edges[i];
        if (e.right < 0 && e.tag < 0) e.tag = intern_tag("boundary");
    }

    mesh.vertex_on_boundary.assign(nv, 0);
    for (const Edge& e : mesh.edges)
        if (e.right < 0) {
            mesh.vertex_on_boundary[e.v[0]] = 1;
            mesh.vertex_on_boundary[e.v[1]] = 1;
        }
    return mesh;
}

double cell_average(const ReferenceMap& map, const std::function<double(Vec2)>& field,
                    int degree) {
    // The Jacobian is constant, so the average over the physical cell is
    // 2 * integral over the reference triangle.
    double sum = 0.0;
    for (const auto& qp : triangle_rule(degree))
        sum += qp.w * field(map.to_physical(Vec2(qp.xi, qp.eta)));
    return 2.0 * sum;
}

TriMesh generate_annulus(double r_inner, double r_outer, int n_r, int n_theta,
                         const Vec2& center) {
    if (!(r_inner > 0.0) || !(r_outer > r_inner))
        throw SolverError("mesh", "generate_annulus: invalid radii");
    if (n_r < 1 || n_theta < 3)
        throw SolverError("mesh", "generate_annulus: need n_r >= 1 and n_theta >= 3");

    std::vector<Vec2> verts;
    verts.reserve(static_cast<size_t>(n_r + 1) * n_theta);
    for (int k = 0; k <= n_r; ++k) {
        const double r = r_inner + (r_outer - r_inner) * k / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n_theta;
            verts.push_back(center + r * Vec2(std::cos(th), std::sin(th)));
        }
    }
    auto vid = [n_theta](int k, int j) { return k * n_theta + ((j % n_theta + n_theta) % n_theta); };

    std::vector<std::array<int, 3>> tris;
    for (int k = 0; k < n_r; ++k) {
        for (int j = 0; j < n_theta; ++j) {
            const int a = vid(k, j), b = vid(k, j + 1), c = vid(k + 1, j + 1), d = vid(k + 1, j);
            if ((k + j) % 2 == 0) {
                tris.push_back({a, b, c});
                tris.push_back({a, c, d});
            } else {
                tris.push_back({a, b, d});
                tris.push_back({b, c, d});
            }
        }
    }

    std::vector<BoundaryEdgeSpec> tags;
    for (int j = 0; j < n_theta; ++j) {
        tags.push_back({vid(0, j), vid(0, j + 1), "inner"});
        tags.push_back({vid(n_r, j), vid(n_r, j + 1), "outer"});
    }
    return build_connectivity(std::move(verts), std::move(tris), tags);
}

namespace {

// Connects two concentric vertex rings (inner may be a single point) with
// a CCW triangle strip; rings are listed by increasing angle.
void stitch_rings(std::vector<std::array<int, 3>>& tris, const std::vector<int>& inner,
                  const std::vector<int>& outer, const std::vector<double>& inner_angle,
                  const std::vector<double>& outer_angle) {
    const int ni = static_cast<int>(inner.size());
    const int no = static_cast<int>(outer.size());
    if (ni == 1) {
        for (int j = 0; j < no; ++j) tris.push_back({inner[0], outer[j], outer[(j + 1) % no]});
        return;
    }
    const double two_pi = 2.0 * std::numbers::pi;
    int i = 0, j = 0;
    auto next_inner = [&](int s) { return s + 1 < ni ? inner_angle[s + 1] : inner_angle[0] + two_pi; };
    auto next_outer = [&](int s) { return s + 1 < no ? outer_angle[s + 1] : outer_angle[0] + two_pi; };
    while (i < ni || j < no) {
        const bool advance_outer =
            (j < no) && (i >= ni || next_outer(j) <= next_inner(i) + 1e-13);
        if (advance_outer) {
            tris.push_back({inner[i % ni], outer[j], outer[(j + 1) % no]});
            ++j;
        } else {
            tris.push_back({inner[i % ni], outer[j % no], inner[(i + 1) % ni]});
            ++i;
        }
    }
}

} // namespace

TriMesh generate_disk(double r, int n, const Vec2& center) {
    if (!(r > 0.0)) throw SolverError("mesh", "generate_disk: invalid radius");
    if (n < 1) throw SolverError("mesh", "generate_disk: need n >= 1");

    std::vector<Vec2> verts{center};
    std::vector<std::vector<int>> ring_ids(n + 1);
    std::vector<std::vector<double>> ring_angles(n + 1);
    ring_ids[0] = {0};
    ring_angles[0] = {0.0};
    for (int k = 1; k <= n; ++k) {
        const int m = 6 * k;
        for (int j = 0; j < m; ++j) {
            const double th = 2.0 * std::numbers::pi * j / m;
            ring_ids[k].push_back(static_cast<int>(verts.size()));
            ring_angles[k].push_back(th);
            verts.push_back(center + (r * k / n) * Vec2(std::cos(th), std::sin(th)));
        }
    }

    std::vector<std::array<int, 3>> tris;
    for (int k = 1; k <= n; ++k)
        stitch_rings(tris, ring_ids[k - 1], ring_ids[k], ring_angles[k - 1], ring_angles[k]);

    std::vector<BoundaryEdgeSpec> tags;
    const auto& rim = ring_ids[n];
    for (size_t j = 0; j < rim.size(); ++j)
        tags.push_back({rim[j], rim[(j + 1) % rim.size()], "outer"});
    return build_connectivity(std::move(verts), std::move(tris), tags);
}

TriMesh generate_rect(double x0, double y0, double x1, double y1, int nx, int ny) {
    if (!(x1 > x0) || !(y1 > y0) || nx < 1 || ny < 1)
        throw SolverError("mesh", "generate_rect: invalid extents");
    std::vector<Vec2> verts;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            verts.push_back(Vec2(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny));
    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            if ((i + j) % 2 == 0) {
                tris.push_back({a, b, c});
                tris.push_back({a, c, d});
            } else {
                tris.push_back({a, b, d});
                tris.push_back({b, c, d});
            }
        }

    std::vector<BoundaryEdgeSpec> tags;
    for (int i = 0; i < nx; ++i) {
        tags.push_back({vid(i, 0), vid(i + 1, 0), "outer"});
        tags.push_back({vid(i, ny), vid(i + 1, ny), "outer"});
    }
    for (int j = 0; j < ny; ++j) {
        tags.push_back({vid(0, j), vid(0, j + 1), "outer"});
        tags.push_back({vid(nx, j), vid(nx, j + 1), "outer"});
    }
    return build_connectivity(std::move(verts), std::move(tris), tags);
}

TriMesh generate_cylinder_box(double r, double half_width, int n_theta, int n_r,
                              const Vec2& center) {
    if (!(r > 0.0) || !(half_width > r))
        throw SolverError("mesh", "generate_cylinder_box: invalid radii");
    if (n_theta % 8 != 0 || n_theta < 8 || n_r < 2)
        throw SolverError("mesh", "generate_cylinder_box: n_theta must be a multiple of 8");

    // Geometric grading in the wall-normal direction: first layer thickness
    // matched to the wall arc length.
    const double target0 = r * 2.0 * std::numbers::pi / n_theta;
    double g = 1.2;
    for (int it = 0; it < 100; ++it) {
        // Solve (g-1)/(g^n_r - 1) = target0 / (mean outer distance).
        const double mean_dist = half_width * 1.12 - r; // ~angular average of square radius
        const double f = (g - 1.0) / (std::pow(g, n_r) - 1.0) - target0 / mean_dist;
        const double eps = 1e-7;
        const double f2 = (g + eps - 1.0) / (std::pow(g + eps, n_r) - 1.0) - target0 / mean_dist;
        const double step = f / ((f2 - f) / eps);
        g -= step;
        if (!(g > 1.0 + 1e-12)) g = 1.0 + 1e-12;
        if (std::abs(step) < 1e-12) break;
    }
    std::vector<double> s(n_r + 1, 0.0);
    for (int k = 1; k <= n_r; ++k) s[k] = (std::pow(g, k) - 1.0) / (std::pow(g, n_r) - 1.0);

    std::vector<Vec2> verts;
    for (int k = 0; k <= n_r; ++k) {
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n_theta;
            const Vec2 dir(std::cos(th), std::sin(th));
            const double rsq = half_width / std::max(std::abs(dir[0]), std::abs(dir[1]));
            const double rad = r + s[k] * (rsq - r);
            verts.push_back(center + rad * dir);
        }
    }
    auto vid = [n_theta](int k, int j) { return k * n_theta + ((j % n_theta + n_theta) % n_theta); };

    std::vector<std::array<int, 3>> tris;
    for (int k = 0; k < n_r; ++k)
        for (int j = 0; j < n_theta; ++j) {
            const int a = vid(k, j), b = vid(k, j + 1), c = vid(k + 1, j + 1), d = vid(k + 1, j);
            if ((k + j) % 2 == 0) {
                tris.push_back({a, b, c});
                tris.push_back({a, c, d});
            } else {
                tris.push_back({a, b, d});
                tris.push_back({b, c, d});
            }
        }

    std::vector<BoundaryEdgeSpec> tags;
    for (int j = 0; j < n_theta; ++j) {
        tags.push_back({vid(0, j), vid(0, j + 1), "wall"});
        tags.push_back({vid(n_r, j), vid(n_r, j + 1), "farfield"});
    }
    return build_connectivity(std::move(verts), std::move(tris), tags);
}

TriMesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError("mesh", "cannot open mesh file: " + path);

    std::vector<std::string> lines;
    {
        std::string raw;
        while (std::getline(in, raw)) {
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            lines.push_back(raw);
        }
    }
    size_t lineno = 0;
    auto next_tokens = [&lines, &lineno](int expected, const char* what) {
        while (lineno < lines.size()) {
            std::istringstream ss(lines[lineno]);
            ++lineno;
            std::vector<std::string> toks;
            std::string t;
            while (ss >> t) toks.push_back(t);
            if (toks.empty()) continue;
            if (static_cast<int>(toks.size()) < expected)
                throw SolverError("mesh", std::string("mesh file line ") +
                                              std::to_string(lineno) + ": expected " + what);
            return toks;
        }
        throw SolverError("mesh", std::string("mesh file truncated: expected ") + what +
                                      " at line " + std::to_string(lineno + 1));
    };

    const auto header = next_tokens(3, "NV NT NB header");
    int nv = 0, nt = 0, nb = 0;
    try {
        nv = std::stoi(header[0]);
        nt = std::stoi(header[1]);
        nb = std::stoi(header[2]);
    } catch (const std::exception&) {
        throw SolverError("mesh", "mesh file line 1: malformed NV NT NB header");
    }
    if (nv < 3 || nt < 1 || nb < 0) throw SolverError("mesh", "mesh file: implausible header counts");

    std::vector<Vec2> verts;
    verts.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        const auto t = next_tokens(2, "vertex `x y`");
        try {
            verts.push_back(Vec2(std::stod(t[0]), std::stod(t[1])));
        } catch (const std::exception&) {
            throw SolverError("mesh", "mesh file line " + std::to_string(lineno) +
                                          ": malformed vertex coordinates");
        }
    }
    std::vector<std::array<int, 3>> tris;
    tris.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        const auto t = next_tokens(3, "triangle `v1 v2 v3`");
        try {
            tris.push_back({std::stoi(t[0]) - 1, std::stoi(t[1]) - 1, std::stoi(t[2]) - 1});
        } catch (const std::exception&) {
            throw SolverError("mesh", "mesh file line " + std::to_string(lineno) +
                                          ": malformed triangle");
        }
    }
    std::vector<BoundaryEdgeSpec> tags;
    tags.reserve(nb);
    for (int i = 0; i < nb; ++i) {
        const auto t = next_tokens(3, "boundary `v1 v2 tag`");
        try {
            tags.push_back({std::stoi(t[0]) - 1, std::stoi(t[1]) - 1, t[2]});
        } catch (const std::exception&) {
            throw SolverError("mesh", "mesh file line " + std::to_string(lineno) +
                                          ": malformed boundary edge");
        }
    }
    return build_connectivity(std::move(verts), std::move(tris), tags);
}

void write_mesh(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SolverError("mesh", "cannot write mesh file: " + path);
    out.precision(17);
    int nb = 0;
    for (const Edge& e : mesh.edges)
        if (e.right < 0) ++nb;
    out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << nb << '\n';
    for (const Vec2& v : mesh.vertices) out << v[0] << ' ' << v[1] << '\n';
    for (const auto& t : mesh.triangles)
        out << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    for (const Edge& e : mesh.edges)
        if (e.right < 0)
            out << e.v[0] + 1 << ' ' << e.v[1] + 1 << ' ' << mesh.tag_names[e.tag] << '\n';
}

void move_vertices(TriMesh& mesh, const std::vector<Vec2>& displacement) {
    if (displacement.size() != mesh.vertices.size())
        throw SolverError("mesh", "move_vertices: displacement size mismatch");
    for (const Vec2& d : displacement)
        if (!d.allFinite()) throw SolverError("mesh", "move_vertices: non-finite displacement");
    std::vector<Vec2> backup = mesh.vertices;
    for (int v = 0; v < mesh.num_vertices(); ++v) mesh.vertices[v] += displacement[v];
    for (int c = 0; c < mesh.num_cells(); ++c) {
        if (mesh.area(c) <= 0.0) {
            mesh.vertices = std::move(backup);
            throw SolverError("mesh", "tangled mesh: triangle inverted", -1, c);
        }
    }
}

} // namespace alesbm
