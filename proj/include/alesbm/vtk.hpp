#pragma once

#include <string>
#include <vector>

#include "alesbm/mesh.hpp"

namespace alesbm {

/// Legacy ASCII VTK unstructured grid with cell-centered scalars
/// rho, u, v, p, S derived from the cell averages.
void write_vtk(const TriMesh& mesh, const std::vector<State>& averages, const GasModel& gas,
               const std::string& path);

} // namespace alesbm
