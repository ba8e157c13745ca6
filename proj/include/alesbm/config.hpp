#pragma once

#include <map>
#include <string>
#include <vector>

namespace alesbm {

/// Flat key-value run configuration (`key = value`, `[section]` headers,
/// `#` comments). See the README for the schema.
struct RunConfig {
    std::string case_name = "manufactured2d";
    int M = 2;
    double cfl = 0.5;
    bool correction = true;
    std::map<std::string, bool> tag_correction; ///< per-tag overrides
    double final_time = -1.0;                   ///< < 0: case default
    long max_steps = 0;                         ///< 0: unlimited
    int resolution = 6;
    std::string mesh_file; ///< overrides the case mesh recipe when set
    std::string output_dir;
    double snapshot_every = 0.0;
    int threads = 0;
    int path_quadrature = 3;
    std::vector<int> sweep_resolutions;
};

RunConfig parse_config_string(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace alesbm
