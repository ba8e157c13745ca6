#include "alesbm/config.hpp"

#include <fstream>
#include <sstream>

#include "alesbm/errors.hpp"

namespace alesbm {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, int lineno) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw SolverError("config", "line " + std::to_string(lineno) + ": expected on/off, got '" +
                                    v + "'");
}

} // namespace

RunConfig parse_config_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section = "run";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SolverError("config", "line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SolverError("config", "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (section == "run") {
                if (key == "case") cfg.case_name = val;
                else if (key == "M") cfg.M = std::stoi(val);
                else if (key == "cfl") cfg.cfl = std::stod(val);
                else if (key == "correction") cfg.correction = parse_bool(val, lineno);
                else if (key == "final_time") cfg.final_time = std::stod(val);
                else if (key == "max_steps") cfg.max_steps = std::stol(val);
                else if (key == "resolution") cfg.resolution = std::stoi(val);
                else if (key == "output_dir") cfg.output_dir = val;
                else if (key == "snapshot_every") cfg.snapshot_every = std::stod(val);
                else if (key == "threads") cfg.threads = std::stoi(val);
                else if (key == "path_quadrature") cfg.path_quadrature = std::stoi(val);
                else throw SolverError("config", "line " + std::to_string(lineno) +
                                                     ": unknown key '" + key + "' in [run]");
            } else if (section == "mesh") {
                if (key == "file") cfg.mesh_file = val;
                else if (key == "resolution") cfg.resolution = std::stoi(val);
                else throw SolverError("config", "line " + std::to_string(lineno) +
                                                     ": unknown key '" + key + "' in [mesh]");
            } else if (section.rfind("boundary.", 0) == 0) {
                const std::string tag = section.substr(9);
                if (key == "correction") cfg.tag_correction[tag] = parse_bool(val, lineno);
                else throw SolverError("config", "line " + std::to_string(lineno) +
                                                     ": unknown key '" + key + "' in [" +
                                                     section + "]");
            } else if (section == "sweep") {
                if (key == "resolutions") {
                    std::istringstream vs(val);
                    int r;
                    cfg.sweep_resolutions.clear();
                    while (vs >> r) cfg.sweep_resolutions.push_back(r);
                } else {
                    throw SolverError("config", "line " + std::to_string(lineno) +
                                                    ": unknown key '" + key + "' in [sweep]");
                }
            } else {
                throw SolverError("config", "line " + std::to_string(lineno) +
                                                ": unknown section [" + section + "]");
            }
        } catch (const SolverError&) {
            throw;
        } catch (const std::exception&) {
            throw SolverError("config", "line " + std::to_string(lineno) +
                                            ": cannot parse value '" + val + "' for key '" +
                                            key + "'");
        }
    }
    if (cfg.M < 1 || cfg.M > 3) throw SolverError("config", "M must be 1, 2 or 3");
    if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) throw SolverError("config", "cfl must be in (0, 1]");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError("config", "cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

} // namespace alesbm
