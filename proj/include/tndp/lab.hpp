#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tndp/oracle.hpp"
#include "tndp/pso.hpp"

namespace tndp {

/// Aggregates over a batch of independent runs.
///
/// Average OFV convention: per iteration, the mean fitness over feasible
/// particles (penalized particles are excluded so the penalty magnitude
/// cannot distort figures); per run, the final-iteration value; per batch,
/// the mean over runs. avg_found_iteration averages over the runs that hit
/// the oracle optimum and is NaN when none did. avg_first_last_ofv_diff may
/// be negative: the swarm average is not monotone, only the global best is.
struct BatchStats {
    int runs = 0;
    double avg_ntaps = 0.0;
    double avg_final_ofv = 0.0;
    double prob_optimum = 0.0;  ///< fraction of runs whose best index equals the oracle's
    double avg_found_iteration = 0.0;
    double avg_first_last_ofv_diff = 0.0;
};

/// Per-run record kept for dispersion reporting and reproducibility.
struct RunRecord {
    std::uint64_t seed = 0;
    std::uint64_t best_index = 0;
    double best_fitness = 0.0;
    long ntaps = 0;
    int found_at_iteration = 0;
    bool hit_optimum = false;
    double first_iter_avg_ofv = 0.0;
    double last_iter_avg_ofv = 0.0;
};

struct BatchResult {
    BatchStats stats;
    std::vector<RunRecord> runs;
    /// Per-iteration mean (over runs) of the swarm-average OFV; filled only
    /// when requested (schedule traces).
    std::vector<double> mean_avg_ofv_trace;
};

/// Executes `runs` independent PSO runs seeded base_seed + run_index and
/// aggregates them. Runs may execute concurrently; aggregation order is
/// fixed, so results are identical for any thread count.
BatchResult run_batch(const Network& net, const ProjectSet& ps, PsoSettings pso,
                      const AssignmentSettings& assignment, int runs, std::uint64_t base_seed,
                      std::uint64_t oracle_optimum_index, int threads = 1,
                      bool keep_traces = false);

enum class SweepMode { C1C2Grid, CWGrid, WLine, ScheduleCompare };

std::string to_string(SweepMode mode);
SweepMode sweep_mode_from_string(const std::string& s);

/// Axis as an inclusive range with positive step.
struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

/// Parameter-sweep specification. Defaults follow the experiment suite:
/// c1/c2 in [0,4] step 0.5 at w = 1.1; c in [0,4] step 0.5 x w in [0,2]
/// step 0.2; w in [0,2] step 0.1 at c = 2; constant w = 0.7 vs linearly
/// decreasing 1.2 -> 0.4 at c = 2. Desk scale is 200 iterations x 20 runs.
struct SweepSpec {
    SweepMode mode = SweepMode::CWGrid;
    AxisSpec c1_axis{0.0, 4.0, 0.5};
    AxisSpec c2_axis{0.0, 4.0, 0.5};
    AxisSpec c_axis{0.0, 4.0, 0.5};
    AxisSpec w_axis{0.0, 2.0, 0.2};
    double w_fixed = 1.1;      ///< C1C2Grid
    double c_fixed = 2.0;      ///< WLine, ScheduleCompare
    double w_constant = 0.7;   ///< ScheduleCompare
    double w_dec_start = 1.2;  ///< ScheduleCompare
    double w_dec_end = 0.4;    ///< ScheduleCompare
    int runs_per_cell = 20;
    int iterations = 200;
    std::uint64_t base_seed = 0;
    PsoSettings base_pso;  ///< swarm size, penalty, v_max policy
};

/// One grid cell: coordinates, derived seed, aggregated stats.
struct SweepCell {
    double c1 = 0.0;
    double c2 = 0.0;
    double w = 0.0;
    std::string schedule;  ///< ScheduleCompare only: "constant" / "decreasing"
    std::uint64_t cell_seed = 0;
    BatchStats stats;
};

struct SweepResult {
    SweepMode mode = SweepMode::CWGrid;
    std::vector<SweepCell> cells;  ///< deterministic grid order
    /// ScheduleCompare: per-iteration mean swarm-average OFV per schedule.
    std::vector<double> trace_constant;
    std::vector<double> trace_decreasing;
};

/// Runs the sweep; cell seeds derive from (base_seed, cell grid indices), so
/// cells are independent and individually reproducible.
SweepResult sweep(const SweepSpec& spec, const Network& net, const ProjectSet& ps,
                  const AssignmentSettings& assignment, std::uint64_t oracle_optimum_index,
                  int threads = 1);

/// Partition of a c-w dataset by the predicate w <= 0.5 c + 1.
struct RegionReport {
    double inside_mean_prob = 0.0;
    double outside_mean_prob = 0.0;
    double ratio = 0.0;  ///< inside / outside; +inf flagged below
    bool ratio_infinite = false;
    int inside_count = 0;
    int outside_count = 0;
};

/// Compares mean prob_optimum inside vs outside the w <= 0.5c + 1 region.
/// Throws EmptyRegion when every cell falls on one side.
RegionReport reliable_region_check(const std::vector<SweepCell>& cw_cells);

/// CSV emission. Grid modes: one row per cell with coordinates, stats and
/// seed. ScheduleCompare: "iteration,constant_avg_ofv,decreasing_avg_ofv".
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// Key-value sidecar with every setting, seed and the code version.
void write_sweep_meta(const SweepSpec& spec, const SweepResult& result, std::ostream& out);

}  // namespace tndp
