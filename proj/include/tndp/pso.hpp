#pragma once

#include <cstdint>
#include <vector>

#include "tndp/assignment.hpp"
#include "tndp/network.hpp"
#include "tndp/rng.hpp"

namespace tndp {

/// Inertia weight as a function of the iteration counter.
struct WeightSchedule {
    enum class Kind { Constant, LinearDecreasing };
    Kind kind = Kind::Constant;
    double w_start = 0.7;
    double w_end = 0.7;

    static WeightSchedule constant(double w) { return {Kind::Constant, w, w}; }
    static WeightSchedule linear_decreasing(double start, double end) {
        return {Kind::LinearDecreasing, start, end};
    }

    /// Constant -> w; LinearDecreasing -> w_start + (w_end - w_start) t/t_max.
    double at(int t, int t_max) const;
};

struct PsoSettings {
    int swarm_size = 10;
    double c1 = 2.0;  ///< cognitive acceleration constant
    double c2 = 2.0;  ///< social acceleration constant
    WeightSchedule inertia = WeightSchedule::constant(0.7);
    double v_max = 0.0;  ///< velocity bound; <= 0 means the position range 2^n - 1
    int max_iterations = 1000;
    double penalty = 1e9;  ///< fitness assigned to budget-infeasible decisions
    std::uint64_t rng_seed = 0;
    int init_draw_cap = 100000;  ///< rejection-sampling cap per particle
};

/// One candidate solution: a scalar position encoding the whole decision.
struct Particle {
    double position = 0.0;  ///< integer-valued, in [0, 2^n - 1]
    double velocity = 0.0;
    double best_position = 0.0;
    double best_fitness = 0.0;
};

struct Swarm {
    std::vector<Particle> particles;
    double global_best_position = 0.0;
    double global_best_fitness = 0.0;
};

/// Metrics of one particle-swarm run.
struct RunResult {
    DecisionVector best_decision;
    double best_fitness = 0.0;
    int found_at_iteration = 0;  ///< first iteration attaining best_fitness
    std::vector<double> avg_ofv_trace;   ///< per iteration, mean fitness of feasible particles
    std::vector<double> best_ofv_trace;  ///< per iteration, global best fitness
    long ntaps = 0;                      ///< number of traffic assignment problems solved
    double first_iter_avg_ofv = 0.0;
    double last_iter_avg_ofv = 0.0;
};

// ---------------------------------------------------------------------------
// Real <-> binary decision encoding
// ---------------------------------------------------------------------------

/// Nearest integer in [0, 2^n - 1]: round half away from zero, then clamp.
std::uint64_t real_to_index(double p, int n);

/// n-bit big-endian expansion of k; bit 0 (most significant) is project 1.
/// Throws OutOfRange if k >= 2^n.
DecisionVector index_to_decision(std::uint64_t k, int n);

/// Exact inverse of index_to_decision.
std::uint64_t decision_to_index(const DecisionVector& y);

// ---------------------------------------------------------------------------
// Swarm machinery
// ---------------------------------------------------------------------------

/// Budget-penalty fitness: `penalty` if the decision exceeds the budget
/// (without solving an assignment), otherwise the equilibrium total travel
/// time of the decision network. Increments `ntaps` per assignment solved.
double evaluate_fitness(const DecisionVector& y, const Network& net, const ProjectSet& ps,
                        const AssignmentSettings& settings, double penalty, long& ntaps);

/// One velocity/position update pass over the swarm, in particle index order.
/// Velocities are clamped to [-v_max, v_max]; positions are clamped to
/// [0, x_max] and rounded to the nearest integer.
void pso_step(Swarm& swarm, double w, double c1, double c2, double v_max, double x_max,
              std::vector<Rng>& streams);

/// Uniform positions rejection-sampled until budget-feasible, zero velocities,
/// personal bests at the initial positions, global best by first-wins argmin.
/// Throws InitializationStall if a particle exceeds the draw cap.
Swarm initialize_swarm(const Network& net, const ProjectSet& ps, const PsoSettings& pso,
                       const AssignmentSettings& assignment, std::vector<Rng>& streams,
                       long& ntaps);

/// Full run: initialize, then max_iterations rounds of update / evaluate /
/// best-tracking. Deterministic given the settings (including rng_seed).
RunResult run_pso(const Network& net, const ProjectSet& ps, const PsoSettings& pso,
                  const AssignmentSettings& assignment);

}  // namespace tndp
