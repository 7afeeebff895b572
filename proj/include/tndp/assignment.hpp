#pragma once

#include <span>
#include <vector>

#include "tndp/network.hpp"

namespace tndp {

struct AssignmentSettings {
    int max_iterations = 300;
    double relative_gap_tolerance = 1e-4;
    double line_search_tolerance = 1e-8;
};

/// User-equilibrium solution of one decision network.
struct EquilibriumResult {
    std::vector<double> flows;  ///< per arc, indexed like net.arcs()
    double total_time = 0.0;    ///< sum_a x_a t_a(x_a)
    double beckmann_value = 0.0;
    double relative_gap = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> beckmann_trace;  ///< objective after each flow update
};

/// Predecessor labels and distances of one shortest-path tree.
struct ShortestPathTree {
    int origin = 0;
    std::vector<double> distance;  ///< indexed by node id - 1; +inf if unreachable
    std::vector<int> pred_arc;     ///< arc index into net.arcs(), -1 at origin/unreached

    double distance_to(int node) const { return distance[node - 1]; }
};

/// Label-setting shortest paths from `origin` under the given arc times.
/// Ties are broken toward the smaller arc id so loading is deterministic.
/// Throws UnreachableDestination if a positive-demand destination of this
/// origin is unreachable.
ShortestPathTree shortest_path_tree(const Network& net, std::span<const double> times, int origin);

/// Loads every OD demand entirely onto its current shortest path.
std::vector<double> all_or_nothing(const Network& net, std::span<const double> times);

/// Exact step size for moving from `x` toward `x_aon`: minimizes the Beckmann
/// objective along x + lambda (x_aon - x) by bisection on its monotone
/// derivative, to an interval width of `tol`. Returns 0 if the derivative is
/// nonnegative at 0, and 1 if it is nonpositive at 1.
double line_search(const Network& net, std::span<const double> x, std::span<const double> x_aon,
                   double tol);

/// (sum x_a t_a(x_a) - sum x_aon,a t_a(x_a)) / sum x_aon,a t_a(x_a), with arc
/// times evaluated at `flows`. Returns 0 when the denominator vanishes
/// (zero-demand convention).
double relative_gap(const Network& net, std::span<const double> flows,
                    std::span<const double> aon_flows);

/// Beckmann objective sum_a (alpha_a x_a + beta_a x_a^5 / 5), in closed form.
double beckmann_value(const Network& net, std::span<const double> flows);

/// Solves the user-equilibrium traffic assignment by the convex-combinations
/// (Frank-Wolfe) method: repeated all-or-nothing loading plus exact line
/// search, starting from an all-or-nothing load at free-flow times.
/// Deterministic: identical inputs yield bit-identical results.
EquilibriumResult solve_ue(const Network& net, const AssignmentSettings& settings);

}  // namespace tndp
