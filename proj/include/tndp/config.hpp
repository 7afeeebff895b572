#pragma once

#include <string>

#include "tndp/assignment.hpp"
#include "tndp/lab.hpp"
#include "tndp/pso.hpp"

namespace tndp {

/// Runtime configuration shared by every CLI workflow. Values come from
/// defaults, then an optional key-value config file, then CLI flags, in that
/// precedence order.
struct Config {
    std::string network_path;
    std::string trips_path;
    std::string projects_path;
    std::string network_format = "plain";  ///< "plain" or "bpr"
    double budget = 5000.0;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string output_dir = ".";

    AssignmentSettings assignment;
    PsoSettings pso;
    SweepSpec sweep;

    /// Loads the instance named by the paths; validates they exist.
    Network load_net() const;
    ProjectSet load_project_set(const Network& base) const;
};

/// Parses a "key = value" configuration file ('#'/'~' comments). Unknown keys
/// are an error so typos fail loudly. See data/example.conf for the schema.
void apply_config_file(Config& cfg, const std::string& path);

}  // namespace tndp
