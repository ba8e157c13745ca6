#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "alesbm/errors.hpp"
#include "alesbm/mesh.hpp"

using namespace alesbm;

namespace {

TriMesh unit_square_mesh() {
    return build_connectivity({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)},
                              {{0, 1, 2}, {0, 2, 3}});
}

// Shoelace area of the boundary polygon, oriented by the left cells.
double boundary_polygon_area(const TriMesh& mesh) {
    double s = 0.0;
    for (const Edge& e : mesh.edges) {
        if (e.right >= 0) continue;
        const Vec2 a = mesh.vertices[e.v[0]], b = mesh.vertices[e.v[1]];
        s += 0.5 * (a[0] * b[1] - a[1] * b[0]);
    }
    return s;
}

} // namespace

TEST_CASE("connectivity construction") {
    SUBCASE("single triangle") {
        const TriMesh m = build_connectivity({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 1, 2}});
        CHECK(m.num_edges() == 3);
        int nb = 0;
        for (const Edge& e : m.edges)
            if (e.right < 0) ++nb;
        CHECK(nb == 3);
    }
    SUBCASE("two triangles sharing an edge") {
        const TriMesh m = unit_square_mesh();
        int nb = 0, ni = 0;
        for (const Edge& e : m.edges) (e.right < 0 ? nb : ni) += 1;
        CHECK(ni == 1);
        CHECK(nb == 4);
        CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("inverted triangle rejected") {
        CHECK_THROWS_AS(build_connectivity({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 2, 1}}),
                        SolverError);
    }
    SUBCASE("neighbors") {
        const TriMesh m = unit_square_mesh();
        bool found = false;
        for (int k = 0; k < 3; ++k)
            if (m.neighbor(0, k) == 1) found = true;
        CHECK(found);
    }
}

TEST_CASE("reference map") {
    const ReferenceMap map{Vec2(1, 1), Vec2(3, 1.5), Vec2(1.2, 2.5)};
    CHECK((map.to_physical(Vec2(0, 0)) - map.x1).norm() == 0.0);
    CHECK((map.to_physical(Vec2(1, 0)) - map.x2).norm() == 0.0);
    CHECK((map.to_physical(Vec2(0, 1)) - map.x3).norm() == 0.0);
    const Vec2 centroid = map.to_physical(Vec2(1.0 / 3, 1.0 / 3));
    CHECK((centroid - (map.x1 + map.x2 + map.x3) / 3.0).norm() <= 1e-14);
    for (const Vec2 p : {Vec2(0.3, 0.2), Vec2(-1.0, 2.0), Vec2(0.9, 0.05)}) {
        const Vec2 back = map.to_reference(map.to_physical(p));
        CHECK((back - p).norm() <= 1e-13);
    }
}

TEST_CASE("cell averages by quadrature") {
    const ReferenceMap unit{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    CHECK(cell_average(unit, [](Vec2) { return 3.7; }, 3) == doctest::Approx(3.7));
    CHECK(cell_average(unit, [](Vec2 x) { return x[0]; }, 3) == doctest::Approx(1.0 / 3.0));
    // int x^2 over the unit triangle = 1/12; average = 1/6.
    CHECK(cell_average(unit, [](Vec2 x) { return x[0] * x[0]; }, 4) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("annulus generator") {
    const TriMesh m = generate_annulus(0.9, 1.0, 2, 8);
    CHECK(m.num_cells() == 2 * 2 * 8);
    for (const Edge& e : m.edges) {
        if (e.right >= 0) continue;
        const double target = m.tag_names[e.tag] == "inner" ? 0.9 : 1.0;
        CHECK(std::abs(m.vertices[e.v[0]].norm() - target) <= 1e-14);
        CHECK(std::abs(m.vertices[e.v[1]].norm() - target) <= 1e-14);
    }

    // Polygon-vs-circle defect: relative area error <= (dtheta)^2 / 6.
    for (int ntheta : {16, 32, 64}) {
        const TriMesh a = generate_annulus(0.9, 1.0, 2, ntheta);
        const double exact = std::numbers::pi * (1.0 - 0.81);
        const double dth = 2.0 * std::numbers::pi / ntheta;
        CHECK(std::abs(a.total_area() - exact) / exact <= dth * dth / 6.0);
    }

    CHECK_THROWS_AS(generate_annulus(1.0, 0.9, 2, 8), SolverError);
}

TEST_CASE("disk generator") {
    const TriMesh m = generate_disk(1.0, 3);
    CHECK(m.num_cells() == 6 * 3 * 3);
    for (const Edge& e : m.edges) {
        if (e.right >= 0) continue;
        CHECK(m.tag_names[e.tag] == "outer");
        CHECK(std::abs(m.vertices[e.v[0]].norm() - 1.0) <= 1e-14);
    }
    for (int c = 0; c < m.num_cells(); ++c) CHECK(m.area(c) > 0.0);
    CHECK(boundary_polygon_area(m) == doctest::Approx(m.total_area()).epsilon(1e-12));
}

TEST_CASE("cylinder-box generator") {
    const TriMesh m = generate_cylinder_box(1.0, 10.0, 48, 18);
    CHECK(m.num_cells() == 2 * 48 * 18);
    for (const Edge& e : m.edges) {
        if (e.right >= 0) continue;
        if (m.tag_names[e.tag] == "wall") {
            CHECK(std::abs(m.vertices[e.v[0]].norm() - 1.0) <= 1e-13);
        } else {
            CHECK(m.tag_names[e.tag] == "farfield");
            const Vec2 v = m.vertices[e.v[0]];
            CHECK(std::abs(std::max(std::abs(v[0]), std::abs(v[1])) - 10.0) <= 1e-12);
        }
    }
    for (int c = 0; c < m.num_cells(); ++c) CHECK(m.area(c) > 0.0);
    CHECK(boundary_polygon_area(m) == doctest::Approx(m.total_area()).epsilon(1e-12));
}

TEST_CASE("mesh file io") {
    SUBCASE("shipped unit-square fixture") {
        const TriMesh m = read_mesh(std::string(ALESBM_DATA_DIR) + "/unitsquare.mesh");
        CHECK(m.num_vertices() == 4);
        CHECK(m.num_cells() == 2);
        CHECK(m.total_area() == doctest::Approx(1.0));
        CHECK(m.tag_id("outer") >= 0);
    }
    SUBCASE("write/read round trip is bit exact") {
        const TriMesh m = generate_annulus(0.9, 1.0, 2, 12);
        const std::string path = (std::filesystem::temp_directory_path() / "rt.mesh").string();
        write_mesh(m, path);
        const TriMesh back = read_mesh(path);
        REQUIRE(back.num_vertices() == m.num_vertices());
        for (int v = 0; v < m.num_vertices(); ++v)
            CHECK((back.vertices[v] - m.vertices[v]).cwiseAbs().maxCoeff() == 0.0);
        CHECK(back.connectivity_checksum() == m.connectivity_checksum());
        std::remove(path.c_str());
    }
    SUBCASE("malformed header") {
        const std::string path = (std::filesystem::temp_directory_path() / "bad.mesh").string();
        {
            std::ofstream out(path);
            out << "# missing counts\n0.0 0.0\n";
        }
        CHECK_THROWS_AS(read_mesh(path), SolverError);
        std::remove(path.c_str());
    }
}

TEST_CASE("vertex motion") {
    TriMesh m = unit_square_mesh();
    const auto checksum = m.connectivity_checksum();

    SUBCASE("zero displacement") {
        move_vertices(m, std::vector<Vec2>(4, Vec2::Zero()));
        CHECK(m.vertices[2] == Vec2(1, 1));
    }
    SUBCASE("rigid translation keeps areas") {
        const double a0 = m.area(0), a1 = m.area(1);
        move_vertices(m, std::vector<Vec2>(4, Vec2(0.3, -0.2)));
        CHECK(m.area(0) == doctest::Approx(a0).epsilon(1e-14));
        CHECK(m.area(1) == doctest::Approx(a1).epsilon(1e-14));
    }
    SUBCASE("collapsing displacement is rejected and rolled back") {
        std::vector<Vec2> d(4, Vec2::Zero());
        d[2] = Vec2(-1.0, -1.0); // vertex (1,1) onto (0,0)
        CHECK_THROWS_AS(move_vertices(m, d), SolverError);
        CHECK(m.vertices[2] == Vec2(1, 1));
    }
    CHECK(m.connectivity_checksum() == checksum);
}

TEST_CASE("grid size is the max circumcircle diameter") {
    // Equilateral triangle with side s has circumdiameter 2s/sqrt(3).
    const double s = 0.4;
    const TriMesh m = build_connectivity(
        {Vec2(0, 0), Vec2(s, 0), Vec2(0.5 * s, 0.5 * std::sqrt(3.0) * s)}, {{0, 1, 2}});
    CHECK(m.grid_size() == doctest::Approx(2.0 * s / std::sqrt(3.0)).epsilon(1e-13));
}
