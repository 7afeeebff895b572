#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tndp/lab.hpp"

using namespace tndp;

namespace {

const std::string kData = TNDP_DATA_DIR;

Network toy6() { return load_network(kData + "/toy6_net.txt", kData + "/toy6_trips.txt"); }

std::uint64_t toy6_optimum(const Network& net, const ProjectSet& ps) {
    return enumerate_decisions(net, ps, {}, ps.budget).optimum_index;
}

PsoSettings small_pso() {
    PsoSettings pso;
    pso.swarm_size = 8;
    pso.max_iterations = 25;
    return pso;
}

}  // namespace

TEST_CASE("run_batch: a single run degenerates to that run's metrics") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    const auto batch = run_batch(net, ps, small_pso(), {}, 1, 77, opt);
    REQUIRE(batch.runs.size() == 1);
    const RunRecord& r = batch.runs[0];
    CHECK(batch.stats.avg_ntaps == static_cast<double>(r.ntaps));
    CHECK(batch.stats.avg_final_ofv == r.last_iter_avg_ofv);
    CHECK(batch.stats.prob_optimum == (r.hit_optimum ? 1.0 : 0.0));
    CHECK(batch.stats.avg_first_last_ofv_diff ==
          doctest::Approx(r.first_iter_avg_ofv - r.last_iter_avg_ofv));
    CHECK(r.seed == 77);
}

TEST_CASE("run_batch: identical base seeds reproduce identical stats") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    const auto a = run_batch(net, ps, small_pso(), {}, 6, 1234, opt);
    const auto b = run_batch(net, ps, small_pso(), {}, 6, 1234, opt);
    CHECK(a.stats.avg_ntaps == b.stats.avg_ntaps);
    CHECK(a.stats.avg_final_ofv == b.stats.avg_final_ofv);
    CHECK(a.stats.prob_optimum == b.stats.prob_optimum);
    for (size_t i = 0; i < a.runs.size(); ++i) {
        CHECK(a.runs[i].best_index == b.runs[i].best_index);
        CHECK(a.runs[i].best_fitness == b.runs[i].best_fitness);
    }
}

TEST_CASE("run_batch: thread counts do not change the aggregate") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    const auto serial = run_batch(net, ps, small_pso(), {}, 6, 5, opt, /*threads=*/1);
    const auto parallel = run_batch(net, ps, small_pso(), {}, 6, 5, opt, /*threads=*/4);
    CHECK(serial.stats.avg_ntaps == parallel.stats.avg_ntaps);
    CHECK(serial.stats.avg_final_ofv == parallel.stats.avg_final_ofv);
    CHECK(serial.stats.prob_optimum == parallel.stats.prob_optimum);
    CHECK(serial.stats.avg_found_iteration == parallel.stats.avg_found_iteration);
}

TEST_CASE("run_batch: single-project instance is always solved") {
    const Network net = load_network(kData + "/toy2_net.txt", kData + "/toy2_trips.txt");
    const ProjectSet ps = load_projects(kData + "/toy2_projects.txt", 100.0, net);
    const std::uint64_t opt = enumerate_decisions(net, ps, {}, 100.0).optimum_index;

    PsoSettings pso;
    pso.swarm_size = 5;
    pso.max_iterations = 30;
    const auto batch = run_batch(net, ps, pso, {}, 10, 9, opt);
    CHECK(batch.stats.prob_optimum == 1.0);
    CHECK(batch.stats.avg_found_iteration < 30.0);
}

TEST_CASE("run_batch: per-run seeds reproduce individual runs") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    const auto batch = run_batch(net, ps, small_pso(), {}, 5, 900, opt);
    for (const RunRecord& rec : batch.runs) {
        PsoSettings pso = small_pso();
        pso.rng_seed = rec.seed;
        const RunResult replay = run_pso(net, ps, pso, {});
        CHECK(decision_to_index(replay.best_decision) == rec.best_index);
        CHECK(replay.best_fitness == rec.best_fitness);
        CHECK(replay.ntaps == rec.ntaps);
    }
}

TEST_CASE("run_batch: ntaps never exceeds the per-run evaluation bound") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);
    const PsoSettings pso = small_pso();
    const auto batch = run_batch(net, ps, pso, {}, 8, 3, opt);
    CHECK(batch.stats.avg_ntaps <=
          static_cast<double>(pso.swarm_size) * (pso.max_iterations + 1));
}

TEST_CASE("sweep: a 1x1 grid equals one batch") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    SweepSpec spec;
    spec.mode = SweepMode::CWGrid;
    spec.c_axis = {2.0, 2.0, 1.0};
    spec.w_axis = {0.7, 0.7, 1.0};
    spec.runs_per_cell = 4;
    spec.iterations = 20;
    spec.base_seed = 11;
    spec.base_pso = small_pso();

    const auto result = sweep(spec, net, ps, {}, opt);
    REQUIRE(result.cells.size() == 1);

    PsoSettings pso = spec.base_pso;
    pso.c1 = pso.c2 = 2.0;
    pso.inertia = WeightSchedule::constant(0.7);
    pso.max_iterations = 20;
    const auto direct = run_batch(net, ps, pso, {}, 4, result.cells[0].cell_seed, opt);
    CHECK(result.cells[0].stats.avg_final_ofv == direct.stats.avg_final_ofv);
    CHECK(result.cells[0].stats.avg_ntaps == direct.stats.avg_ntaps);
}

TEST_CASE("sweep: row count is the grid size and cell seeds are recorded") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    SweepSpec spec;
    spec.mode = SweepMode::CWGrid;
    spec.c_axis = {1.0, 3.0, 1.0};
    spec.w_axis = {0.4, 1.0, 0.3};
    spec.runs_per_cell = 2;
    spec.iterations = 10;
    spec.base_seed = 4;
    spec.base_pso = small_pso();

    const auto result = sweep(spec, net, ps, {}, opt);
    CHECK(result.cells.size() == 3 * 3);

    // Any single cell reruns exactly from its recorded seed.
    const SweepCell& cell = result.cells[4];
    PsoSettings pso = spec.base_pso;
    pso.c1 = pso.c2 = cell.c1;
    pso.inertia = WeightSchedule::constant(cell.w);
    pso.max_iterations = spec.iterations;
    const auto replay = run_batch(net, ps, pso, {}, 2, cell.cell_seed, opt);
    CHECK(replay.stats.avg_final_ofv == cell.stats.avg_final_ofv);
    CHECK(replay.stats.prob_optimum == cell.stats.prob_optimum);
}

TEST_CASE("sweep: schedule comparison produces two aligned traces") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    SweepSpec spec;
    spec.mode = SweepMode::ScheduleCompare;
    spec.runs_per_cell = 3;
    spec.iterations = 15;
    spec.base_seed = 21;
    spec.base_pso = small_pso();

    const auto result = sweep(spec, net, ps, {}, opt);
    REQUIRE(result.cells.size() == 2);
    CHECK(result.cells[0].schedule == "constant");
    CHECK(result.cells[1].schedule == "decreasing");
    CHECK(result.trace_constant.size() == static_cast<size_t>(spec.iterations) + 1);
    CHECK(result.trace_decreasing.size() == result.trace_constant.size());

    std::stringstream csv;
    write_sweep_csv(result, csv);
    CHECK(csv.str().rfind("iteration,constant_avg_ofv,decreasing_avg_ofv", 0) == 0);
}

TEST_CASE("reliable_region_check: partitions, sentinel and empty region") {
    auto cell = [](double c, double w, double prob) {
        SweepCell sc;
        sc.c1 = sc.c2 = c;
        sc.w = w;
        sc.stats.prob_optimum = prob;
        return sc;
    };

    // Constructed: probability 1 inside the region, 0 outside.
    std::vector<SweepCell> cells{cell(2.0, 0.5, 1.0), cell(2.0, 1.0, 1.0),
                                 cell(0.5, 2.0, 0.0), cell(0.0, 1.5, 0.0)};
    const auto report = reliable_region_check(cells);
    CHECK(report.inside_count == 2);
    CHECK(report.outside_count == 2);
    CHECK(report.inside_mean_prob == 1.0);
    CHECK(report.outside_mean_prob == 0.0);
    CHECK(report.ratio_infinite);
    CHECK(std::isinf(report.ratio));

    // All cells on one side -> no comparison possible.
    std::vector<SweepCell> one_sided{cell(2.0, 0.5, 1.0), cell(3.0, 1.0, 0.9)};
    CHECK_THROWS_AS(reliable_region_check(one_sided), EmptyRegion);
}

TEST_CASE("sweep CSV: one row per cell with coordinates and stats") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const std::uint64_t opt = toy6_optimum(net, ps);

    SweepSpec spec;
    spec.mode = SweepMode::WLine;
    spec.w_axis = {0.5, 0.9, 0.2};
    spec.c_fixed = 2.0;
    spec.runs_per_cell = 2;
    spec.iterations = 8;
    spec.base_pso = small_pso();

    const auto result = sweep(spec, net, ps, {}, opt);
    CHECK(result.cells.size() == 3);

    std::stringstream csv;
    write_sweep_csv(result, csv);
    std::string line;
    int lines = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 4);  // header + 3 cells

    std::stringstream meta;
    write_sweep_meta(spec, result, meta);
    CHECK(meta.str().find("mode = wline") != std::string::npos);
    CHECK(meta.str().find("version = ") != std::string::npos);
}
