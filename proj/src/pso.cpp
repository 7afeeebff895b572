#include "tndp/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tndp {

namespace {

double clamp_position(double p, double x_max) { return std::clamp(p, 0.0, x_max); }

/// Mean fitness over feasible particles (fitness < penalty). Falls back to
/// the previous value when every particle is penalized, so traces stay
/// numeric; the initial swarm is always feasible, so a value always exists.
double average_ofv(const std::vector<double>& fitness, double penalty, double previous) {
    double sum = 0.0;
    int count = 0;
    for (double f : fitness) {
        if (f < penalty) {
            sum += f;
            ++count;
        }
    }
    return count > 0 ? sum / count : previous;
}

}  // namespace

double WeightSchedule::at(int t, int t_max) const {
    if (kind == Kind::Constant) return w_start;
    if (t_max <= 0) return w_start;
    return w_start + (w_end - w_start) * static_cast<double>(t) / static_cast<double>(t_max);
}

std::uint64_t real_to_index(double p, int n) {
    const double x_max = std::ldexp(1.0, n) - 1.0;  // 2^n - 1
    double r = std::round(p);                       // half away from zero
    if (r < 0.0) r = 0.0;
    if (r > x_max) r = x_max;
    return static_cast<std::uint64_t>(r);
}

DecisionVector index_to_decision(std::uint64_t k, int n) {
    if (n < 0 || n > 62) throw OutOfRange("project count out of range");
    if (n < 64 && k > ((std::uint64_t{1} << n) - 1))
        throw OutOfRange("decision index " + std::to_string(k) + " exceeds 2^" +
                         std::to_string(n) + " - 1");
    DecisionVector y;
    y.bits.resize(n);
    for (int j = 0; j < n; ++j) y.bits[j] = static_cast<std::uint8_t>((k >> (n - 1 - j)) & 1u);
    return y;
}

std::uint64_t decision_to_index(const DecisionVector& y) {
    std::uint64_t k = 0;
    for (int j = 0; j < y.size(); ++j)
        if (y.bits[j]) k |= std::uint64_t{1} << (y.size() - 1 - j);
    return k;
}

double evaluate_fitness(const DecisionVector& y, const Network& net, const ProjectSet& ps,
                        const AssignmentSettings& settings, double penalty, long& ntaps) {
    if (decision_cost(ps, y) > ps.budget) return penalty;
    const Network decided = apply_decision(net, ps, y);
    const EquilibriumResult eq = solve_ue(decided, settings);
    ++ntaps;
    return eq.total_time;
}

void pso_step(Swarm& swarm, double w, double c1, double c2, double v_max, double x_max,
              std::vector<Rng>& streams) {
    for (size_t i = 0; i < swarm.particles.size(); ++i) {
        Particle& p = swarm.particles[i];
        const double r1 = streams[i].uniform01();
        const double r2 = streams[i].uniform01();
        double v = w * p.velocity + c1 * r1 * (p.best_position - p.position) +
                   c2 * r2 * (swarm.global_best_position - p.position);
        if (v > v_max) v = v_max;
        if (v < -v_max) v = -v_max;
        p.velocity = v;
        p.position = clamp_position(std::round(p.position + v), x_max);
    }
}

Swarm initialize_swarm(const Network& net, const ProjectSet& ps, const PsoSettings& pso,
                       const AssignmentSettings& assignment, std::vector<Rng>& streams,
                       long& ntaps) {
    const int n = ps.size();
    const double x_max = std::ldexp(1.0, n) - 1.0;
    Swarm swarm;
    swarm.particles.resize(pso.swarm_size);
    swarm.global_best_fitness = std::numeric_limits<double>::infinity();

    for (int i = 0; i < pso.swarm_size; ++i) {
        Particle& p = swarm.particles[i];
        bool feasible = false;
        for (int draw = 0; draw < pso.init_draw_cap; ++draw) {
            const double candidate = std::round(streams[i].uniform(0.0, x_max));
            const DecisionVector y = index_to_decision(real_to_index(candidate, n), n);
            if (decision_cost(ps, y) <= ps.budget) {
                p.position = candidate;
                feasible = true;
                break;
            }
        }
        if (!feasible)
            throw InitializationStall("no budget-feasible position for particle " +
                                      std::to_string(i) + " within " +
                                      std::to_string(pso.init_draw_cap) + " draws");
        p.velocity = 0.0;
        const DecisionVector y = index_to_decision(real_to_index(p.position, n), n);
        p.best_fitness = evaluate_fitness(y, net, ps, assignment, pso.penalty, ntaps);
        p.best_position = p.position;
        if (p.best_fitness < swarm.global_best_fitness) {
            swarm.global_best_fitness = p.best_fitness;
            swarm.global_best_position = p.position;
        }
    }
    return swarm;
}

RunResult run_pso(const Network& net, const ProjectSet& ps, const PsoSettings& pso,
                  const AssignmentSettings& assignment) {
    if (pso.swarm_size < 1) throw ValidationError("swarm size must be >= 1");
    if (pso.c1 < 0.0 || pso.c2 < 0.0) throw ValidationError("c1 and c2 must be nonnegative");
    if (pso.max_iterations < 0) throw ValidationError("max_iterations must be >= 0");
    if (!(pso.penalty > 0.0)) throw ValidationError("penalty must be positive");

    const int n = ps.size();
    const double x_max = std::ldexp(1.0, n) - 1.0;
    const double v_max = pso.v_max > 0.0 ? pso.v_max : std::max(x_max, 1.0);

    std::vector<Rng> streams;
    streams.reserve(pso.swarm_size);
    for (int i = 0; i < pso.swarm_size; ++i)
        streams.push_back(Rng::stream(pso.rng_seed, static_cast<std::uint64_t>(i)));

    RunResult res;
    res.ntaps = 0;
    Swarm swarm = initialize_swarm(net, ps, pso, assignment, streams, res.ntaps);

    std::vector<double> fitness(pso.swarm_size);
    for (int i = 0; i < pso.swarm_size; ++i) fitness[i] = swarm.particles[i].best_fitness;
    res.avg_ofv_trace.push_back(average_ofv(fitness, pso.penalty, pso.penalty));
    res.best_ofv_trace.push_back(swarm.global_best_fitness);
    res.found_at_iteration = 0;

    const int t_max = std::max(pso.max_iterations - 1, 1);
    for (int k = 1; k <= pso.max_iterations; ++k) {
        const double w = pso.inertia.at(k - 1, t_max);
        pso_step(swarm, w, pso.c1, pso.c2, v_max, x_max, streams);

        for (int i = 0; i < pso.swarm_size; ++i) {
            const Particle& p = swarm.particles[i];
            const DecisionVector y = index_to_decision(real_to_index(p.position, n), n);
            fitness[i] = evaluate_fitness(y, net, ps, assignment, pso.penalty, res.ntaps);
        }
        for (int i = 0; i < pso.swarm_size; ++i) {
            Particle& p = swarm.particles[i];
            if (fitness[i] < p.best_fitness) {
                p.best_fitness = fitness[i];
                p.best_position = p.position;
            }
        }
        for (int i = 0; i < pso.swarm_size; ++i) {
            if (fitness[i] < swarm.global_best_fitness) {
                swarm.global_best_fitness = fitness[i];
                swarm.global_best_position = swarm.particles[i].position;
                res.found_at_iteration = k;
            }
        }
        res.avg_ofv_trace.push_back(average_ofv(fitness, pso.penalty, res.avg_ofv_trace.back()));
        res.best_ofv_trace.push_back(swarm.global_best_fitness);
    }

    res.best_decision = index_to_decision(real_to_index(swarm.global_best_position, n), n);
    res.best_fitness = swarm.global_best_fitness;
    res.first_iter_avg_ofv = res.avg_ofv_trace.front();
    res.last_iter_avg_ofv = res.avg_ofv_trace.back();
    return res;
}

}  // namespace tndp
