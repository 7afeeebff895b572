// Command-line entry point: assign | solve | enumerate | sweep.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tndp/config.hpp"
#include "tndp/lab.hpp"
#include "tndp/oracle.hpp"
#include "tndp/pso.hpp"
#include "tndp/version.hpp"

namespace {

using namespace tndp;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write output file: " + path);
    return out;
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    localtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
    return buf;
}

int cmd_assign(const Config& cfg, const std::string& decision_str, std::string out_path) {
    const Network base = cfg.load_net();
    const ProjectSet ps = cfg.load_project_set(base);

    DecisionVector y;
    if (decision_str.empty()) {
        y.bits.assign(ps.size(), 0);
    } else {
        y = DecisionVector::from_string(decision_str);
        if (y.size() != ps.size())
            throw ValidationError("decision has " + std::to_string(y.size()) + " bits but " +
                                  std::to_string(ps.size()) + " projects are defined");
    }

    const Network net = apply_decision(base, ps, y);
    const EquilibriumResult eq = solve_ue(net, cfg.assignment);

    if (out_path.empty()) out_path = cfg.output_dir + "/flows.csv";
    auto out = open_output(out_path);
    out << "arc_id,tail,head,flow,time\n";
    for (size_t i = 0; i < net.arcs().size(); ++i) {
        const Arc& a = net.arcs()[i];
        out << a.id << ',' << a.tail << ',' << a.head << ',' << fmt(eq.flows[i]) << ','
            << fmt(arc_travel_time(a, eq.flows[i])) << '\n';
    }

    std::cout << "decision " << (y.size() ? y.to_string() : std::string("(none)")) << '\n';
    std::cout << "total_travel_time " << fmt(eq.total_time) << '\n';
    std::cout << "relative_gap " << fmt(eq.relative_gap) << '\n';
    std::cout << "iterations " << eq.iterations << '\n';
    std::cout << "converged " << (eq.converged ? "yes" : "no") << '\n';
    std::cerr << "flows written to " << out_path << '\n';
    if (!eq.converged) {
        std::cerr << "warning: assignment did not reach the gap tolerance\n";
        return 2;
    }
    return 0;
}

int cmd_solve(const Config& cfg, std::string trace_path) {
    const Network base = cfg.load_net();
    const ProjectSet ps = cfg.load_project_set(base);

    PsoSettings pso = cfg.pso;
    pso.rng_seed = cfg.seed;
    const RunResult run = run_pso(base, ps, pso, cfg.assignment);

    if (trace_path.empty()) trace_path = cfg.output_dir + "/trace.csv";
    auto out = open_output(trace_path);
    out << "iteration,avg_ofv,best_ofv\n";
    for (size_t i = 0; i < run.avg_ofv_trace.size(); ++i)
        out << i << ',' << fmt(run.avg_ofv_trace[i]) << ',' << fmt(run.best_ofv_trace[i]) << '\n';

    std::cout << "best_decision " << run.best_decision.to_string() << '\n';
    std::cout << "accepted_projects";
    for (int j = 0; j < run.best_decision.size(); ++j)
        if (run.best_decision.bits[j]) std::cout << ' ' << ps.projects[j].id;
    std::cout << '\n';
    std::cout << "best_ofv " << fmt(run.best_fitness) << '\n';
    std::cout << "cost " << fmt(decision_cost(ps, run.best_decision)) << '\n';
    std::cout << "ntaps " << run.ntaps << '\n';
    std::cout << "found_at_iteration " << run.found_at_iteration << '\n';
    std::cerr << "trace written to " << trace_path << " (swarm_size=" << pso.swarm_size
              << " iterations=" << pso.max_iterations << " seed=" << pso.rng_seed << ")\n";
    return 0;
}

std::atomic<bool> g_progress_enabled{true};

void report_progress(std::uint64_t done, std::uint64_t total) {
    if (g_progress_enabled.load(std::memory_order_relaxed))
        std::fprintf(stderr, "\r%llu/%llu decisions", static_cast<unsigned long long>(done),
                     static_cast<unsigned long long>(total));
}

int cmd_enumerate(const Config& cfg, std::string out_path, bool force, bool quiet) {
    const Network base = cfg.load_net();
    const ProjectSet ps = cfg.load_project_set(base);

    g_progress_enabled.store(!quiet);
    const EnumerationTable table =
        enumerate_decisions(base, ps, cfg.assignment, cfg.budget, cfg.threads,
                            /*max_projects_guard=*/24, force, &report_progress);
    if (!quiet) std::fprintf(stderr, "\n");

    if (out_path.empty()) out_path = cfg.output_dir + "/enumeration.csv";
    auto out = open_output(out_path);
    write_enumeration_csv(table, out);

    if (table.has_optimum) {
        std::cout << "optimum index=" << table.optimum_index << " bits="
                  << index_to_decision(table.optimum_index, table.n_projects).to_string()
                  << " cost=" << fmt(table.rows[table.optimum_index].cost)
                  << " ofv=" << fmt(table.optimum_ofv) << '\n';
    } else {
        std::cout << "optimum none (no feasible decision)\n";
    }
    std::cerr << "table written to " << out_path << '\n';
    return 0;
}

int cmd_sweep(const Config& cfg, std::string out_prefix, const std::string& oracle_path) {
    const Network base = cfg.load_net();
    const ProjectSet ps = cfg.load_project_set(base);

    std::uint64_t oracle_index = 0;
    if (!oracle_path.empty()) {
        std::ifstream in(oracle_path);
        if (!in) throw ValidationError("cannot open oracle table: " + oracle_path);
        const EnumerationTable table = read_enumeration_csv(in);
        if (!table.has_optimum) throw ValidationError("oracle table has no feasible optimum");
        oracle_index = table.optimum_index;
        std::cerr << "oracle optimum index " << oracle_index << " from " << oracle_path << '\n';
    } else {
        std::cerr << "no --oracle table given; enumerating for the optimum first\n";
        const EnumerationTable table =
            enumerate_decisions(base, ps, cfg.assignment, cfg.budget, cfg.threads);
        if (!table.has_optimum) throw ValidationError("no feasible decision under the budget");
        oracle_index = table.optimum_index;
        std::cerr << "oracle optimum index " << oracle_index << '\n';
    }

    SweepSpec spec = cfg.sweep;
    spec.base_seed = cfg.seed;
    spec.base_pso = cfg.pso;

    const SweepResult result = sweep(spec, base, ps, cfg.assignment, oracle_index, cfg.threads);

    if (out_prefix.empty())
        out_prefix = cfg.output_dir + "/sweep_" + to_string(spec.mode) + "_" + timestamp();
    {
        auto out = open_output(out_prefix + ".csv");
        write_sweep_csv(result, out);
    }
    {
        auto meta = open_output(out_prefix + ".meta");
        write_sweep_meta(spec, result, meta);
        meta << "oracle_optimum_index = " << oracle_index << '\n';
    }
    std::cout << "cells " << result.cells.size() << '\n';
    std::cerr << "dataset written to " << out_prefix << ".csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete transportation network design: equilibrium assignment, "
                 "swarm search, enumeration and parameter sweeps"};
    app.set_version_flag("--version", std::string(tndp::kVersion));
    app.require_subcommand(1);

    std::string config_path, network, trips, projects, network_format, output_dir;
    double budget = -1.0;
    std::int64_t seed = -1;
    int threads = -1;
    app.add_option("--config", config_path, "configuration file (key = value)");
    app.add_option("--network", network, "network file");
    app.add_option("--trips", trips, "trips file");
    app.add_option("--projects", projects, "candidate project file");
    app.add_option("--network-format", network_format, "'plain' (alpha/beta) or 'bpr'");
    app.add_option("--budget", budget, "construction budget");
    app.add_option("--seed", seed, "master random seed");
    app.add_option("--threads", threads, "worker thread cap");
    app.add_option("--output-dir", output_dir, "directory for output files");

    // assign
    auto* assign = app.add_subcommand("assign", "solve one user-equilibrium assignment");
    std::string decision_str, assign_out;
    int assign_max_iter = -1;
    double assign_tol = -1.0;
    assign->add_option("--decision", decision_str, "decision bit string (default all zeros)");
    assign->add_option("--out", assign_out, "flow CSV path");
    assign->add_option("--max-iterations", assign_max_iter, "equilibrium iteration cap");
    assign->add_option("--tolerance", assign_tol, "relative gap tolerance");

    // solve
    auto* solve = app.add_subcommand("solve", "run the particle-swarm project search");
    std::string trace_out, w_dec;
    int iterations = -1, particles = -1;
    double c1 = -1.0, c2 = -1.0, c_both = -1.0, w_const = -1.0, vmax = -1.0, penalty = -1.0;
    solve->add_option("--iterations", iterations, "swarm iterations");
    solve->add_option("--particles", particles, "swarm size");
    solve->add_option("--c1", c1, "cognitive acceleration constant");
    solve->add_option("--c2", c2, "social acceleration constant");
    solve->add_option("--c", c_both, "sets c1 = c2");
    solve->add_option("--w", w_const, "constant inertia weight");
    solve->add_option("--w-decreasing", w_dec, "linearly decreasing inertia 'start:end'");
    solve->add_option("--vmax", vmax, "velocity bound (default: position range)");
    solve->add_option("--penalty", penalty, "infeasible-decision fitness");
    solve->add_option("--trace-out", trace_out, "iteration trace CSV path");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "evaluate every decision vector");
    std::string enum_out;
    bool force = false, quiet = false;
    enumerate->add_option("--out", enum_out, "table CSV path");
    enumerate->add_flag("--force", force, "override the 24-project guard");
    enumerate->add_flag("--quiet", quiet, "suppress progress output");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep over seeded batches");
    std::string sweep_mode, sweep_out, oracle_path;
    int sweep_runs = -1, sweep_iterations = -1;
    double w_fixed = -1.0, c_fixed = -1.0;
    std::string c_axis, w_axis, c1_axis, c2_axis;
    sweep_cmd->add_option("--mode", sweep_mode, "c1c2 | cw | wline | schedule-compare");
    sweep_cmd->add_option("--runs", sweep_runs, "runs per cell");
    sweep_cmd->add_option("--iterations", sweep_iterations, "iterations per run");
    sweep_cmd->add_option("--w-fixed", w_fixed, "fixed w for the c1c2 grid");
    sweep_cmd->add_option("--c-fixed", c_fixed, "fixed c for wline / schedule-compare");
    sweep_cmd->add_option("--c-axis", c_axis, "c axis 'min:max:step'");
    sweep_cmd->add_option("--w-axis", w_axis, "w axis 'min:max:step'");
    sweep_cmd->add_option("--c1-axis", c1_axis, "c1 axis 'min:max:step'");
    sweep_cmd->add_option("--c2-axis", c2_axis, "c2 axis 'min:max:step'");
    sweep_cmd->add_option("--oracle", oracle_path, "enumeration CSV with the optimum");
    sweep_cmd->add_option("--out-prefix", sweep_out, "output prefix (.csv/.meta appended)");

    CLI11_PARSE(app, argc, argv);

    try {
        tndp::Config cfg;
        if (!config_path.empty()) tndp::apply_config_file(cfg, config_path);
        if (!network.empty()) cfg.network_path = network;
        if (!trips.empty()) cfg.trips_path = trips;
        if (!projects.empty()) cfg.projects_path = projects;
        if (!network_format.empty()) cfg.network_format = network_format;
        if (budget >= 0.0) cfg.budget = budget;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (threads > 0) cfg.threads = threads;
        if (!output_dir.empty()) cfg.output_dir = output_dir;

        auto parse_axis = [](const std::string& s, tndp::AxisSpec& axis) {
            if (s.empty()) return;
            double mn, mx, st;
            if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &mn, &mx, &st) != 3)
                throw tndp::ParseError("axis must be 'min:max:step', got '" + s + "'");
            axis = {mn, mx, st};
        };

        if (app.got_subcommand(assign)) {
            if (assign_max_iter > 0) cfg.assignment.max_iterations = assign_max_iter;
            if (assign_tol > 0.0) cfg.assignment.relative_gap_tolerance = assign_tol;
            return cmd_assign(cfg, decision_str, assign_out);
        }
        if (app.got_subcommand(solve)) {
            if (iterations >= 0) cfg.pso.max_iterations = iterations;
            if (particles > 0) cfg.pso.swarm_size = particles;
            if (c_both >= 0.0) cfg.pso.c1 = cfg.pso.c2 = c_both;
            if (c1 >= 0.0) cfg.pso.c1 = c1;
            if (c2 >= 0.0) cfg.pso.c2 = c2;
            if (w_const >= 0.0) cfg.pso.inertia = tndp::WeightSchedule::constant(w_const);
            if (!w_dec.empty()) {
                double ws, we;
                if (std::sscanf(w_dec.c_str(), "%lf:%lf", &ws, &we) != 2)
                    throw tndp::ParseError("--w-decreasing expects 'start:end'");
                cfg.pso.inertia = tndp::WeightSchedule::linear_decreasing(ws, we);
            }
            if (vmax > 0.0) cfg.pso.v_max = vmax;
            if (penalty > 0.0) cfg.pso.penalty = penalty;
            return cmd_solve(cfg, trace_out);
        }
        if (app.got_subcommand(enumerate)) return cmd_enumerate(cfg, enum_out, force, quiet);
        if (app.got_subcommand(sweep_cmd)) {
            if (!sweep_mode.empty()) cfg.sweep.mode = tndp::sweep_mode_from_string(sweep_mode);
            if (sweep_runs > 0) cfg.sweep.runs_per_cell = sweep_runs;
            if (sweep_iterations >= 0) cfg.sweep.iterations = sweep_iterations;
            if (w_fixed >= 0.0) cfg.sweep.w_fixed = w_fixed;
            if (c_fixed >= 0.0) cfg.sweep.c_fixed = c_fixed;
            parse_axis(c_axis, cfg.sweep.c_axis);
            parse_axis(w_axis, cfg.sweep.w_axis);
            parse_axis(c1_axis, cfg.sweep.c1_axis);
            parse_axis(c2_axis, cfg.sweep.c2_axis);
            return cmd_sweep(cfg, sweep_out, oracle_path);
        }
    } catch (const tndp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
