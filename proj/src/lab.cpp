#include "tndp/lab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "tndp/parallel.hpp"
#include "tndp/version.hpp"

namespace tndp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Cell seed for grid indices (i, j): mixes the indices into the base seed so
/// every cell is an independent, reproducible stream.
std::uint64_t cell_seed(std::uint64_t base_seed, int i, int j) {
    return base_seed ^ splitmix64((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j));
}

BatchStats aggregate(const std::vector<RunRecord>& runs) {
    BatchStats s;
    s.runs = static_cast<int>(runs.size());
    double sum_ntaps = 0.0, sum_final = 0.0, sum_diff = 0.0, sum_found = 0.0;
    int hits = 0;
    for (const RunRecord& r : runs) {
        sum_ntaps += static_cast<double>(r.ntaps);
        sum_final += r.last_iter_avg_ofv;
        sum_diff += r.first_iter_avg_ofv - r.last_iter_avg_ofv;
        if (r.hit_optimum) {
            ++hits;
            sum_found += r.found_at_iteration;
        }
    }
    s.avg_ntaps = sum_ntaps / s.runs;
    s.avg_final_ofv = sum_final / s.runs;
    s.avg_first_last_ofv_diff = sum_diff / s.runs;
    s.prob_optimum = static_cast<double>(hits) / s.runs;
    s.avg_found_iteration = hits > 0 ? sum_found / hits : kNaN;
    return s;
}

}  // namespace

BatchResult run_batch(const Network& net, const ProjectSet& ps, PsoSettings pso,
                      const AssignmentSettings& assignment, int runs, std::uint64_t base_seed,
                      std::uint64_t oracle_optimum_index, int threads, bool keep_traces) {
    if (runs < 1) throw ValidationError("batch needs at least one run");

    std::vector<RunRecord> records(runs);
    std::vector<std::vector<double>> traces(keep_traces ? runs : 0);
    parallel_for(runs, threads, [&](std::int64_t r) {
        PsoSettings local = pso;
        local.rng_seed = base_seed + static_cast<std::uint64_t>(r);
        const RunResult run = run_pso(net, ps, local, assignment);
        RunRecord& rec = records[r];
        rec.seed = local.rng_seed;
        rec.best_index = decision_to_index(run.best_decision);
        rec.best_fitness = run.best_fitness;
        rec.ntaps = run.ntaps;
        rec.found_at_iteration = run.found_at_iteration;
        rec.hit_optimum = rec.best_index == oracle_optimum_index;
        rec.first_iter_avg_ofv = run.first_iter_avg_ofv;
        rec.last_iter_avg_ofv = run.last_iter_avg_ofv;
        if (keep_traces) traces[r] = run.avg_ofv_trace;
    });

    BatchResult result;
    result.stats = aggregate(records);
    result.runs = std::move(records);
    if (keep_traces && !traces.empty()) {
        const size_t len = traces.front().size();
        result.mean_avg_ofv_trace.assign(len, 0.0);
        for (const auto& tr : traces)
            for (size_t i = 0; i < len; ++i) result.mean_avg_ofv_trace[i] += tr[i];
        for (double& v : result.mean_avg_ofv_trace) v /= static_cast<double>(runs);
    }
    return result;
}

std::string to_string(SweepMode mode) {
    switch (mode) {
        case SweepMode::C1C2Grid: return "c1c2";
        case SweepMode::CWGrid: return "cw";
        case SweepMode::WLine: return "wline";
        case SweepMode::ScheduleCompare: return "schedule-compare";
    }
    return "unknown";
}

SweepMode sweep_mode_from_string(const std::string& s) {
    if (s == "c1c2") return SweepMode::C1C2Grid;
    if (s == "cw") return SweepMode::CWGrid;
    if (s == "wline") return SweepMode::WLine;
    if (s == "schedule-compare") return SweepMode::ScheduleCompare;
    throw ParseError("unknown sweep mode '" + s +
                     "' (expected c1c2, cw, wline or schedule-compare)");
}

std::vector<double> AxisSpec::values() const {
    if (!(step > 0.0)) throw ValidationError("axis step must be positive");
    if (max < min) throw ValidationError("axis range is empty");
    std::vector<double> vals;
    // Index-based expansion avoids accumulating rounding error.
    const int count = static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
    vals.reserve(count);
    for (int i = 0; i < count; ++i) vals.push_back(min + step * i);
    return vals;
}

SweepResult sweep(const SweepSpec& spec, const Network& net, const ProjectSet& ps,
                  const AssignmentSettings& assignment, std::uint64_t oracle_optimum_index,
                  int threads) {
    SweepResult result;
    result.mode = spec.mode;

    // Materialize the cell list first; each cell then runs one batch.
    struct PendingCell {
        SweepCell cell;
        PsoSettings pso;
    };
    std::vector<PendingCell> pending;

    PsoSettings base = spec.base_pso;
    base.max_iterations = spec.iterations;

    auto push_cell = [&](int i, int j, double c1, double c2, double w,
                         const WeightSchedule& schedule, const std::string& label) {
        PendingCell pc;
        pc.cell.c1 = c1;
        pc.cell.c2 = c2;
        pc.cell.w = w;
        pc.cell.schedule = label;
        pc.cell.cell_seed = cell_seed(spec.base_seed, i, j);
        pc.pso = base;
        pc.pso.c1 = c1;
        pc.pso.c2 = c2;
        pc.pso.inertia = schedule;
        pending.push_back(std::move(pc));
    };

    switch (spec.mode) {
        case SweepMode::C1C2Grid: {
            const auto c1s = spec.c1_axis.values();
            const auto c2s = spec.c2_axis.values();
            for (size_t i = 0; i < c1s.size(); ++i)
                for (size_t j = 0; j < c2s.size(); ++j)
                    push_cell(static_cast<int>(i), static_cast<int>(j), c1s[i], c2s[j],
                              spec.w_fixed, WeightSchedule::constant(spec.w_fixed), "");
            break;
        }
        case SweepMode::CWGrid: {
            const auto cs = spec.c_axis.values();
            const auto ws = spec.w_axis.values();
            for (size_t i = 0; i < cs.size(); ++i)
                for (size_t j = 0; j < ws.size(); ++j)
                    push_cell(static_cast<int>(i), static_cast<int>(j), cs[i], cs[i], ws[j],
                              WeightSchedule::constant(ws[j]), "");
            break;
        }
        case SweepMode::WLine: {
            const auto ws = spec.w_axis.values();
            for (size_t j = 0; j < ws.size(); ++j)
                push_cell(0, static_cast<int>(j), spec.c_fixed, spec.c_fixed, ws[j],
                          WeightSchedule::constant(ws[j]), "");
            break;
        }
        case SweepMode::ScheduleCompare: {
            push_cell(0, 0, spec.c_fixed, spec.c_fixed, spec.w_constant,
                      WeightSchedule::constant(spec.w_constant), "constant");
            push_cell(0, 1, spec.c_fixed, spec.c_fixed, spec.w_dec_start,
                      WeightSchedule::linear_decreasing(spec.w_dec_start, spec.w_dec_end),
                      "decreasing");
            break;
        }
    }

    const bool keep_traces = spec.mode == SweepMode::ScheduleCompare;
    // Parallelism lives inside run_batch (across a cell's runs); cells run in
    // order so per-cell memory stays bounded and output order is fixed.
    result.cells.reserve(pending.size());
    std::vector<BatchResult> batches;
    batches.reserve(pending.size());
    for (PendingCell& pc : pending) {
        BatchResult batch = run_batch(net, ps, pc.pso, assignment, spec.runs_per_cell,
                                      pc.cell.cell_seed, oracle_optimum_index, threads,
                                      keep_traces);
        pc.cell.stats = batch.stats;
        result.cells.push_back(pc.cell);
        batches.push_back(std::move(batch));
    }

    if (spec.mode == SweepMode::ScheduleCompare) {
        result.trace_constant = std::move(batches[0].mean_avg_ofv_trace);
        result.trace_decreasing = std::move(batches[1].mean_avg_ofv_trace);
    }
    return result;
}

RegionReport reliable_region_check(const std::vector<SweepCell>& cw_cells) {
    RegionReport report;
    double inside_sum = 0.0, outside_sum = 0.0;
    for (const SweepCell& cell : cw_cells) {
        if (cell.w <= 0.5 * cell.c1 + 1.0) {
            ++report.inside_count;
            inside_sum += cell.stats.prob_optimum;
        } else {
            ++report.outside_count;
            outside_sum += cell.stats.prob_optimum;
        }
    }
    if (report.inside_count == 0 || report.outside_count == 0)
        throw EmptyRegion("the w <= 0.5c + 1 partition left " +
                          std::string(report.inside_count == 0 ? "the inside" : "the outside") +
                          " region empty");
    report.inside_mean_prob = inside_sum / report.inside_count;
    report.outside_mean_prob = outside_sum / report.outside_count;
    if (report.outside_mean_prob == 0.0) {
        report.ratio_infinite = true;
        report.ratio = std::numeric_limits<double>::infinity();
    } else {
        report.ratio = report.inside_mean_prob / report.outside_mean_prob;
    }
    return report;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    if (result.mode == SweepMode::ScheduleCompare) {
        out << "iteration,constant_avg_ofv,decreasing_avg_ofv\n";
        for (size_t i = 0; i < result.trace_constant.size(); ++i)
            out << i << ',' << format_double(result.trace_constant[i]) << ','
                << format_double(result.trace_decreasing[i]) << '\n';
        return;
    }
    out << "c1,c2,w,runs,avg_ntaps,avg_final_ofv,prob_optimum,avg_found_iteration,"
           "avg_first_last_ofv_diff,cell_seed\n";
    for (const SweepCell& cell : result.cells) {
        out << format_double(cell.c1) << ',' << format_double(cell.c2) << ','
            << format_double(cell.w) << ',' << cell.stats.runs << ','
            << format_double(cell.stats.avg_ntaps) << ','
            << format_double(cell.stats.avg_final_ofv) << ','
            << format_double(cell.stats.prob_optimum) << ','
            << format_double(cell.stats.avg_found_iteration) << ','
            << format_double(cell.stats.avg_first_last_ofv_diff) << ',' << cell.cell_seed
            << '\n';
    }
}

void write_sweep_meta(const SweepSpec& spec, const SweepResult& result, std::ostream& out) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    out << "version = " << kVersion << '\n';
    out << "generated_unix_ms = "
        << std::chrono::duration_cast<std::chrono::milliseconds>(now).count() << '\n';
    out << "mode = " << to_string(spec.mode) << '\n';
    out << "runs_per_cell = " << spec.runs_per_cell << '\n';
    out << "iterations = " << spec.iterations << '\n';
    out << "base_seed = " << spec.base_seed << '\n';
    out << "swarm_size = " << spec.base_pso.swarm_size << '\n';
    out << "penalty = " << format_double(spec.base_pso.penalty) << '\n';
    out << "v_max = " << format_double(spec.base_pso.v_max)
        << "  # <= 0 means the position range bound\n";
    switch (spec.mode) {
        case SweepMode::C1C2Grid:
            out << "w_fixed = " << format_double(spec.w_fixed) << '\n';
            out << "c1_axis = " << format_double(spec.c1_axis.min) << ":"
                << format_double(spec.c1_axis.max) << ":" << format_double(spec.c1_axis.step)
                << '\n';
            out << "c2_axis = " << format_double(spec.c2_axis.min) << ":"
                << format_double(spec.c2_axis.max) << ":" << format_double(spec.c2_axis.step)
                << '\n';
            break;
        case SweepMode::CWGrid:
            out << "c_axis = " << format_double(spec.c_axis.min) << ":"
                << format_double(spec.c_axis.max) << ":" << format_double(spec.c_axis.step)
                << '\n';
            out << "w_axis = " << format_double(spec.w_axis.min) << ":"
                << format_double(spec.w_axis.max) << ":" << format_double(spec.w_axis.step)
                << '\n';
            break;
        case SweepMode::WLine:
            out << "c_fixed = " << format_double(spec.c_fixed) << '\n';
            out << "w_axis = " << format_double(spec.w_axis.min) << ":"
                << format_double(spec.w_axis.max) << ":" << format_double(spec.w_axis.step)
                << '\n';
            break;
        case SweepMode::ScheduleCompare:
            out << "c_fixed = " << format_double(spec.c_fixed) << '\n';
            out << "w_constant = " << format_double(spec.w_constant) << '\n';
            out << "w_decreasing = " << format_double(spec.w_dec_start) << " -> "
                << format_double(spec.w_dec_end) << '\n';
            for (const SweepCell& cell : result.cells) {
                out << "stats." << cell.schedule << ".prob_optimum = "
                    << format_double(cell.stats.prob_optimum) << '\n';
                out << "stats." << cell.schedule << ".avg_found_iteration = "
                    << format_double(cell.stats.avg_found_iteration) << '\n';
                out << "stats." << cell.schedule << ".avg_final_ofv = "
                    << format_double(cell.stats.avg_final_ofv) << '\n';
            }
            break;
    }
    out << "cells = " << result.cells.size() << '\n';
    out << "avg_ofv_definition = per iteration, mean fitness over feasible particles; "
           "per run, final iteration; per cell, mean over runs\n";
}

}  // namespace tndp
