#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tndp/pso.hpp"

using namespace tndp;

namespace {

const std::string kData = TNDP_DATA_DIR;

Network sioux_falls() {
    return load_network(kData + "/siouxfalls_net.txt", kData + "/siouxfalls_trips.txt");
}

Network toy6() { return load_network(kData + "/toy6_net.txt", kData + "/toy6_trips.txt"); }

}  // namespace

TEST_CASE("real_to_index: rounding and clamping") {
    CHECK(real_to_index(0.4, 10) == 0);
    CHECK(real_to_index(1500.0, 10) == 1023);
    CHECK(real_to_index(512.5, 10) == 513);  // half away from zero
    CHECK(real_to_index(-3.2, 10) == 0);
    CHECK(real_to_index(1023.49, 10) == 1023);
}

TEST_CASE("index_to_decision: expansions and range check") {
    CHECK(index_to_decision(0, 10).to_string() == "0000000000");
    CHECK(index_to_decision(1023, 10).to_string() == "1111111111");
    CHECK(index_to_decision(5, 4).to_string() == "0101");
    CHECK_THROWS_AS(index_to_decision(16, 4), OutOfRange);
}

TEST_CASE("decision_to_index: inverse cases") {
    CHECK(decision_to_index(DecisionVector::from_string("0101")) == 5);
    CHECK(decision_to_index(DecisionVector::from_string("0000")) == 0);
    CHECK(decision_to_index(index_to_decision(1023, 10)) == 1023);
}

TEST_CASE("property: encoding round trip is exact for small n") {
    for (int n = 0; n <= 8; ++n)
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k)
            CHECK(decision_to_index(index_to_decision(k, n)) == k);
}

TEST_CASE("weight schedule endpoints") {
    const auto dec = WeightSchedule::linear_decreasing(1.2, 0.4);
    CHECK(dec.at(0, 100) == 1.2);
    CHECK(dec.at(100, 100) == doctest::Approx(0.4));
    CHECK(dec.at(50, 100) == doctest::Approx(0.8));
    const auto cst = WeightSchedule::constant(0.7);
    CHECK(cst.at(0, 100) == 0.7);
    CHECK(cst.at(77, 100) == 0.7);
}

TEST_CASE("evaluate_fitness: penalty path leaves ntaps untouched") {
    const Network net = sioux_falls();
    const ProjectSet ps = load_projects(kData + "/siouxfalls_projects.txt", 5000.0, net);
    long ntaps = 0;

    DecisionVector ones;
    ones.bits.assign(10, 1);  // cost 13325 > 5000
    CHECK(evaluate_fitness(ones, net, ps, {}, 1e9, ntaps) == 1e9);
    CHECK(ntaps == 0);

    DecisionVector zeros;
    zeros.bits.assign(10, 0);
    const double base_time = evaluate_fitness(zeros, net, ps, {}, 1e9, ntaps);
    CHECK(ntaps == 1);
    CHECK(base_time == solve_ue(net, {}).total_time);
}

TEST_CASE("evaluate_fitness: matches a standalone network + assignment composition") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    const DecisionVector y = DecisionVector::from_string("1000");
    long ntaps = 0;
    const double fit = evaluate_fitness(y, net, ps, {}, 1e9, ntaps);
    CHECK(ntaps == 1);
    const Network decided = apply_decision(net, ps, y);
    CHECK(fit == solve_ue(decided, {}).total_time);
}

TEST_CASE("pso_step: zero coefficients freeze the swarm") {
    Swarm swarm;
    swarm.particles.push_back({5.0, 2.0, 5.0, 1.0});
    swarm.global_best_position = 5.0;
    swarm.global_best_fitness = 1.0;
    std::vector<Rng> streams;
    streams.push_back(Rng::stream(1, 0));
    pso_step(swarm, 0.0, 0.0, 0.0, 100.0, 1023.0, streams);
    CHECK(swarm.particles[0].velocity == 0.0);
    CHECK(swarm.particles[0].position == 5.0);
}

TEST_CASE("pso_step: particle at both bests with zero velocity stays fixed") {
    Swarm swarm;
    swarm.particles.push_back({7.0, 0.0, 7.0, 3.0});
    swarm.global_best_position = 7.0;
    swarm.global_best_fitness = 3.0;
    std::vector<Rng> streams;
    streams.push_back(Rng::stream(9, 0));
    for (int step = 0; step < 5; ++step) {
        pso_step(swarm, 0.9, 2.0, 2.0, 100.0, 1023.0, streams);
        CHECK(swarm.particles[0].position == 7.0);
        CHECK(swarm.particles[0].velocity == 0.0);
    }
}

TEST_CASE("pso_step: velocity clamps to v_max exactly") {
    Swarm swarm;
    swarm.particles.push_back({0.0, 0.0, 0.0, 1.0});
    swarm.global_best_position = 1000.0;  // huge pull
    swarm.global_best_fitness = 0.5;
    std::vector<Rng> streams;
    streams.push_back(Rng::stream(4, 0));
    const double v_max = 10.0;
    pso_step(swarm, 1.0, 0.0, 5.0, v_max, 1023.0, streams);
    CHECK(swarm.particles[0].velocity == v_max);
}

TEST_CASE("pso_step: positions stay integers within [0, x_max]") {
    Swarm swarm;
    std::vector<Rng> streams;
    for (int i = 0; i < 8; ++i) {
        swarm.particles.push_back({static_cast<double>(40 * i), 0.0,
                                   static_cast<double>(40 * i), 1.0});
        streams.push_back(Rng::stream(77, i));
    }
    swarm.global_best_position = 120.0;
    swarm.global_best_fitness = 0.1;
    const double x_max = 255.0;
    for (int step = 0; step < 50; ++step) {
        pso_step(swarm, 0.8, 2.0, 2.0, x_max, x_max, streams);
        for (const Particle& p : swarm.particles) {
            CHECK(p.position >= 0.0);
            CHECK(p.position <= x_max);
            CHECK(p.position == std::round(p.position));
            CHECK(std::abs(p.velocity) <= x_max);
        }
    }
}

TEST_CASE("pso_step: velocities decay geometrically when c1 = c2 = 0") {
    Swarm swarm;
    swarm.particles.push_back({100.0, 3.7, 100.0, 1.0});
    swarm.global_best_position = 100.0;
    swarm.global_best_fitness = 1.0;
    std::vector<Rng> streams;
    streams.push_back(Rng::stream(0, 0));
    const double w = 0.5;  // binary-exact decay
    for (int t = 1; t <= 20; ++t) {
        pso_step(swarm, w, 0.0, 0.0, 1e6, 1023.0, streams);
        CHECK(std::abs(swarm.particles[0].velocity) == 3.7 * std::pow(w, t));
    }
}

TEST_CASE("initialize_swarm: zero budget pins every particle at index 0") {
    const Network net = toy6();
    ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 0.0, net);
    PsoSettings pso;
    pso.swarm_size = 6;
    std::vector<Rng> streams;
    for (int i = 0; i < pso.swarm_size; ++i) streams.push_back(Rng::stream(3, i));
    long ntaps = 0;
    const Swarm swarm = initialize_swarm(net, ps, pso, {}, streams, ntaps);
    for (const Particle& p : swarm.particles) {
        CHECK(real_to_index(p.position, ps.size()) == 0);
        CHECK(p.velocity == 0.0);
    }
    CHECK(ntaps == pso.swarm_size);
}

TEST_CASE("initialize_swarm: generous budget accepts the first draws") {
    const Network net = toy6();
    ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 1e9, net);
    PsoSettings pso;
    pso.swarm_size = 5;
    std::vector<Rng> streams, replay;
    for (int i = 0; i < pso.swarm_size; ++i) {
        streams.push_back(Rng::stream(11, i));
        replay.push_back(Rng::stream(11, i));
    }
    long ntaps = 0;
    const Swarm swarm = initialize_swarm(net, ps, pso, {}, streams, ntaps);
    const double x_max = std::ldexp(1.0, ps.size()) - 1.0;
    for (int i = 0; i < pso.swarm_size; ++i) {
        const double first_draw = std::round(replay[i].uniform(0.0, x_max));
        CHECK(swarm.particles[i].position == first_draw);
    }
}

TEST_CASE("initialize_swarm: deterministic across repeated construction") {
    const Network net = toy6();
    ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    PsoSettings pso;
    pso.swarm_size = 10;
    for (int rep = 0; rep < 2; ++rep) {
        std::vector<Rng> s1, s2;
        for (int i = 0; i < pso.swarm_size; ++i) {
            s1.push_back(Rng::stream(42, i));
            s2.push_back(Rng::stream(42, i));
        }
        long n1 = 0, n2 = 0;
        const Swarm a = initialize_swarm(net, ps, pso, {}, s1, n1);
        const Swarm b = initialize_swarm(net, ps, pso, {}, s2, n2);
        REQUIRE(a.particles.size() == b.particles.size());
        for (size_t i = 0; i < a.particles.size(); ++i) {
            CHECK(a.particles[i].position == b.particles[i].position);
            CHECK(a.particles[i].best_fitness == b.particles[i].best_fitness);
        }
        CHECK(a.global_best_position == b.global_best_position);
    }
}

TEST_CASE("run_pso: one-project instance finds the enumeration optimum") {
    const Network net = load_network(kData + "/toy2_net.txt", kData + "/toy2_trips.txt");
    const ProjectSet ps = load_projects(kData + "/toy2_projects.txt", 100.0, net);

    long ntaps = 0;
    const double t0 = evaluate_fitness(index_to_decision(0, 1), net, ps, {}, 1e9, ntaps);
    const double t1 = evaluate_fitness(index_to_decision(1, 1), net, ps, {}, 1e9, ntaps);
    const std::uint64_t best = t1 < t0 ? 1 : 0;

    PsoSettings pso;
    pso.swarm_size = 5;
    pso.max_iterations = 20;
    pso.rng_seed = 1;
    const RunResult run = run_pso(net, ps, pso, {});
    CHECK(decision_to_index(run.best_decision) == best);
    CHECK(run.best_fitness == doctest::Approx(std::min(t0, t1)));
}

TEST_CASE("run_pso: zero iterations reports the best of the initial swarm") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    PsoSettings pso;
    pso.swarm_size = 7;
    pso.max_iterations = 0;
    pso.rng_seed = 5;
    const RunResult run = run_pso(net, ps, pso, {});
    CHECK(run.avg_ofv_trace.size() == 1);
    CHECK(run.found_at_iteration == 0);
    CHECK(run.ntaps == 7);
    CHECK(run.best_fitness < 1e9);
}

TEST_CASE("run_pso: identical seeds give identical results field for field") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    PsoSettings pso;
    pso.swarm_size = 8;
    pso.max_iterations = 30;
    pso.rng_seed = 314159;
    const RunResult a = run_pso(net, ps, pso, {});
    const RunResult b = run_pso(net, ps, pso, {});
    CHECK(a.best_decision == b.best_decision);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.found_at_iteration == b.found_at_iteration);
    CHECK(a.ntaps == b.ntaps);
    CHECK(a.avg_ofv_trace == b.avg_ofv_trace);
    CHECK(a.best_ofv_trace == b.best_ofv_trace);
}

TEST_CASE("run_pso: global best trace is monotone and final best is feasible") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 2500.0, net);
    PsoSettings pso;
    pso.swarm_size = 10;
    pso.max_iterations = 40;
    pso.rng_seed = 99;
    const RunResult run = run_pso(net, ps, pso, {});
    for (size_t i = 1; i < run.best_ofv_trace.size(); ++i)
        CHECK(run.best_ofv_trace[i] <= run.best_ofv_trace[i - 1]);
    CHECK(run.best_fitness < pso.penalty);
    CHECK(decision_cost(ps, run.best_decision) <= ps.budget);
    CHECK(run.best_ofv_trace[run.found_at_iteration] == run.best_fitness);
    if (run.found_at_iteration > 0)
        CHECK(run.best_ofv_trace[run.found_at_iteration - 1] > run.best_fitness);
}

TEST_CASE("run_pso: ntaps equals solver invocations when every decision is affordable") {
    const Network net = toy6();
    const ProjectSet ps = load_projects(kData + "/toy6_projects.txt", 1e9, net);
    PsoSettings pso;
    pso.swarm_size = 6;
    pso.max_iterations = 15;
    pso.rng_seed = 2;
    const RunResult run = run_pso(net, ps, pso, {});
    CHECK(run.ntaps == static_cast<long>(pso.swarm_size) * (pso.max_iterations + 1));
}

TEST_CASE("run_pso: empty project set degenerates to a single assignment") {
    const Network net = toy6();
    ProjectSet ps;
    ps.budget = 0.0;
    PsoSettings pso;
    pso.swarm_size = 3;
    pso.max_iterations = 4;
    const RunResult run = run_pso(net, ps, pso, {});
    CHECK(run.best_decision.size() == 0);
    CHECK(run.best_fitness == doctest::Approx(solve_ue(net, {}).total_time));
}
