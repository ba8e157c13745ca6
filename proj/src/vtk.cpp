#include "alesbm/vtk.hpp"

#include <fstream>

#include "alesbm/errors.hpp"

namespace alesbm {

void write_vtk(const TriMesh& mesh, const std::vector<State>& averages, const GasModel& gas,
               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SolverError("io", "cannot write VTK file: " + path);
    out.precision(15);

    out << "# vtk DataFile Version 3.0\n";
    out << "alesbm snapshot\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_vertices() << " double\n";
    for (const Vec2& v : mesh.vertices) out << v[0] << ' ' << v[1] << " 0\n";
    out << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << mesh.num_cells() << '\n';
    for (int i = 0; i < mesh.num_cells(); ++i) out << "5\n";

    out << "CELL_DATA " << mesh.num_cells() << '\n';
    auto scalar = [&](const char* name, auto&& get) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int i = 0; i < mesh.num_cells(); ++i) out << get(i) << '\n';
    };
    scalar("rho", [&](int i) { return averages[i][0]; });
    scalar("u", [&](int i) { return averages[i][1] / averages[i][0]; });
    scalar("v", [&](int i) { return averages[i][2] / averages[i][0]; });
    scalar("p", [&](int i) { return pressure(averages[i], gas); });
    scalar("S", [&](int i) { return entropy(averages[i], gas); });

    if (!out) throw SolverError("io", "write failure on VTK file: " + path);
}

} // namespace alesbm
