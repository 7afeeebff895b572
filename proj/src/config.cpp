#include "tndp/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace tndp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& path, int line) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == nullptr || *end != '\0') throw ParseError(path, line, "expected a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& v, const std::string& path, int line) {
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == nullptr || *end != '\0')
        throw ParseError(path, line, "expected an integer, got '" + v + "'");
    return x;
}

}  // namespace

Network Config::load_net() const {
    if (network_path.empty() || trips_path.empty())
        throw ValidationError("network and trips paths must be set");
    if (!std::filesystem::exists(network_path))
        throw ValidationError("network file does not exist: " + network_path);
    if (!std::filesystem::exists(trips_path))
        throw ValidationError("trips file does not exist: " + trips_path);
    if (network_format == "plain") return load_network(network_path, trips_path);
    if (network_format == "bpr") return load_network_bpr(network_path, trips_path);
    throw ValidationError("network_format must be 'plain' or 'bpr', got '" + network_format + "'");
}

ProjectSet Config::load_project_set(const Network& base) const {
    if (projects_path.empty()) return ProjectSet{{}, budget};
    if (!std::filesystem::exists(projects_path))
        throw ValidationError("projects file does not exist: " + projects_path);
    return load_projects(projects_path, budget, base);
}

void apply_config_file(Config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == '~') continue;
        const size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(path, line_no, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        // Strip a trailing comment from the value.
        const size_t hash = value.find('#');
        if (hash != std::string::npos) value = trim(value.substr(0, hash));

        if (key == "network") cfg.network_path = value;
        else if (key == "trips") cfg.trips_path = value;
        else if (key == "projects") cfg.projects_path = value;
        else if (key == "network_format") cfg.network_format = value;
        else if (key == "budget") cfg.budget = to_double(value, path, line_no);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(value, path, line_no));
        else if (key == "threads") cfg.threads = static_cast<int>(to_int(value, path, line_no));
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "assignment_max_iterations")
            cfg.assignment.max_iterations = static_cast<int>(to_int(value, path, line_no));
        else if (key == "assignment_relative_gap")
            cfg.assignment.relative_gap_tolerance = to_double(value, path, line_no);
        else if (key == "assignment_line_search_tol")
            cfg.assignment.line_search_tolerance = to_double(value, path, line_no);
        else if (key == "swarm_size")
            cfg.pso.swarm_size = static_cast<int>(to_int(value, path, line_no));
        else if (key == "c1") cfg.pso.c1 = to_double(value, path, line_no);
        else if (key == "c2") cfg.pso.c2 = to_double(value, path, line_no);
        else if (key == "c") { cfg.pso.c1 = cfg.pso.c2 = to_double(value, path, line_no); }
        else if (key == "w") cfg.pso.inertia = WeightSchedule::constant(to_double(value, path, line_no));
        else if (key == "w_schedule") {
            if (value == "constant")
                cfg.pso.inertia.kind = WeightSchedule::Kind::Constant;
            else if (value == "decreasing")
                cfg.pso.inertia.kind = WeightSchedule::Kind::LinearDecreasing;
            else
                throw ParseError(path, line_no, "w_schedule must be 'constant' or 'decreasing'");
        } else if (key == "w_start") cfg.pso.inertia.w_start = to_double(value, path, line_no);
        else if (key == "w_end") cfg.pso.inertia.w_end = to_double(value, path, line_no);
        else if (key == "v_max") cfg.pso.v_max = to_double(value, path, line_no);
        else if (key == "iterations")
            cfg.pso.max_iterations = static_cast<int>(to_int(value, path, line_no));
        else if (key == "penalty") cfg.pso.penalty = to_double(value, path, line_no);
        else if (key == "sweep_mode") cfg.sweep.mode = sweep_mode_from_string(value);
        else if (key == "sweep_runs")
            cfg.sweep.runs_per_cell = static_cast<int>(to_int(value, path, line_no));
        else if (key == "sweep_iterations")
            cfg.sweep.iterations = static_cast<int>(to_int(value, path, line_no));
        else if (key == "sweep_w_fixed") cfg.sweep.w_fixed = to_double(value, path, line_no);
        else if (key == "sweep_c_fixed") cfg.sweep.c_fixed = to_double(value, path, line_no);
        else if (key == "c1_min") cfg.sweep.c1_axis.min = to_double(value, path, line_no);
        else if (key == "c1_max") cfg.sweep.c1_axis.max = to_double(value, path, line_no);
        else if (key == "c1_step") cfg.sweep.c1_axis.step = to_double(value, path, line_no);
        else if (key == "c2_min") cfg.sweep.c2_axis.min = to_double(value, path, line_no);
        else if (key == "c2_max") cfg.sweep.c2_axis.max = to_double(value, path, line_no);
        else if (key == "c2_step") cfg.sweep.c2_axis.step = to_double(value, path, line_no);
        else if (key == "c_min") cfg.sweep.c_axis.min = to_double(value, path, line_no);
        else if (key == "c_max") cfg.sweep.c_axis.max = to_double(value, path, line_no);
        else if (key == "c_step") cfg.sweep.c_axis.step = to_double(value, path, line_no);
        else if (key == "w_min") cfg.sweep.w_axis.min = to_double(value, path, line_no);
        else if (key == "w_max") cfg.sweep.w_axis.max = to_double(value, path, line_no);
        else if (key == "w_step") cfg.sweep.w_axis.step = to_double(value, path, line_no);
        else if (key == "sweep_w_constant") cfg.sweep.w_constant = to_double(value, path, line_no);
        else if (key == "sweep_w_dec_start") cfg.sweep.w_dec_start = to_double(value, path, line_no);
        else if (key == "sweep_w_dec_end") cfg.sweep.w_dec_end = to_double(value, path, line_no);
        else throw ParseError(path, line_no, "unknown configuration key '" + key + "'");
    }
}

}  // namespace tndp
