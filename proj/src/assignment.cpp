#include "tndp/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tndp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_flow_vector(const Network& net, std::span<const double> v, const char* what) {
    if (v.size() != net.arcs().size())
        throw DimensionMismatch(std::string(what) + " length does not match arc count");
}

std::vector<double> arc_times(const Network& net, std::span<const double> flows) {
    std::vector<double> t(flows.size());
    for (size_t i = 0; i < flows.size(); ++i) t[i] = arc_travel_time(net.arcs()[i], flows[i]);
    return t;
}

}  // namespace

ShortestPathTree shortest_path_tree(const Network& net, std::span<const double> times,
                                    int origin) {
    require_flow_vector(net, times, "time vector");
    if (origin < 1 || origin > net.node_count()) throw OutOfRange("origin node out of range");
    for (double t : times)
        if (!(t >= 0.0)) throw DomainError("arc times must be nonnegative");

    const int n = net.node_count();
    ShortestPathTree tree;
    tree.origin = origin;
    tree.distance.assign(n, kInf);
    tree.pred_arc.assign(n, -1);
    std::vector<char> settled(n, 0);
    tree.distance[origin - 1] = 0.0;

    // Scan-based label setting: small networks, fully deterministic.
    for (int round = 0; round < n; ++round) {
        int u = -1;
        double best = kInf;
        for (int v = 0; v < n; ++v) {
            if (!settled[v] && tree.distance[v] < best) {
                best = tree.distance[v];
                u = v;
            }
        }
        if (u < 0) break;
        settled[u] = 1;
        for (int ai : net.arcs_from(u + 1)) {
            const Arc& a = net.arcs()[ai];
            const int v = a.head - 1;
            const double cand = best + times[ai];
            if (cand < tree.distance[v]) {
                tree.distance[v] = cand;
                tree.pred_arc[v] = ai;
            } else if (cand == tree.distance[v] && tree.pred_arc[v] >= 0 &&
                       a.id < net.arcs()[tree.pred_arc[v]].id) {
                tree.pred_arc[v] = ai;  // tie toward the smaller arc id
            }
        }
    }

    // Demanded destinations of this origin must have been reached.
    auto it = std::lower_bound(net.origins().begin(), net.origins().end(), origin);
    if (it != net.origins().end() && *it == origin) {
        const int oi = static_cast<int>(it - net.origins().begin());
        for (const auto& [dest, demand] : net.destinations_of(oi)) {
            if (demand > 0.0 && tree.distance[dest - 1] == kInf)
                throw UnreachableDestination("destination " + std::to_string(dest) +
                                             " unreachable from origin " + std::to_string(origin));
        }
    }
    return tree;
}

std::vector<double> all_or_nothing(const Network& net, std::span<const double> times) {
    require_flow_vector(net, times, "time vector");
    std::vector<double> flows(net.arcs().size(), 0.0);
    for (size_t oi = 0; oi < net.origins().size(); ++oi) {
        const int origin = net.origins()[oi];
        ShortestPathTree tree = shortest_path_tree(net, times, origin);
        for (const auto& [dest, demand] : net.destinations_of(static_cast<int>(oi))) {
            if (demand <= 0.0) continue;
            int v = dest - 1;
            while (v != origin - 1) {
                const int ai = tree.pred_arc[v];
                flows[ai] += demand;
                v = net.arcs()[ai].tail - 1;
            }
        }
    }
    return flows;
}

double line_search(const Network& net, std::span<const double> x, std::span<const double> x_aon,
                   double tol) {
    require_flow_vector(net, x, "flow vector");
    require_flow_vector(net, x_aon, "auxiliary flow vector");
    if (!(tol > 0.0)) throw DomainError("line search tolerance must be positive");

    // Derivative of the Beckmann objective along x + lambda d.
    auto deriv = [&](double lambda) {
        double g = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double d = x_aon[i] - x[i];
            if (d == 0.0) continue;
            g += d * arc_travel_time(net.arcs()[i], x[i] + lambda * d);
        }
        return g;
    };

    if (deriv(0.0) >= 0.0) return 0.0;
    if (deriv(1.0) <= 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (deriv(mid) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double relative_gap(const Network& net, std::span<const double> flows,
                    std::span<const double> aon_flows) {
    require_flow_vector(net, flows, "flow vector");
    require_flow_vector(net, aon_flows, "auxiliary flow vector");
    double current = 0.0, best = 0.0;
    for (size_t i = 0; i < flows.size(); ++i) {
        const double t = arc_travel_time(net.arcs()[i], flows[i]);
        current += flows[i] * t;
        best += aon_flows[i] * t;
    }
    if (best == 0.0) return 0.0;
    return (current - best) / best;
}

double beckmann_value(const Network& net, std::span<const double> flows) {
    require_flow_vector(net, flows, "flow vector");
    double total = 0.0;
    for (size_t i = 0; i < flows.size(); ++i) {
        const Arc& a = net.arcs()[i];
        const double x = flows[i];
        if (!(x >= 0.0)) throw DomainError("flow must be nonnegative");
        const double x2 = x * x;
        total += a.alpha * x + a.beta * x2 * x2 * x * 0.2;
    }
    return total;
}

EquilibriumResult solve_ue(const Network& net, const AssignmentSettings& settings) {
    if (settings.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (!(settings.relative_gap_tolerance > 0.0))
        throw ValidationError("relative gap tolerance must be positive");
    if (!(settings.line_search_tolerance > 0.0))
        throw ValidationError("line search tolerance must be positive");

    EquilibriumResult res;
    const size_t m = net.arcs().size();

    // Warm start: all-or-nothing load at free-flow times.
    std::vector<double> free_flow(m);
    for (size_t i = 0; i < m; ++i) free_flow[i] = net.arcs()[i].alpha;
    res.flows = all_or_nothing(net, free_flow);
    res.beckmann_trace.push_back(beckmann_value(net, res.flows));

    double gap = kInf;
    int iter = 0;
    while (iter < settings.max_iterations) {
        ++iter;
        const std::vector<double> times = arc_times(net, res.flows);
        const std::vector<double> aon = all_or_nothing(net, times);
        gap = relative_gap(net, res.flows, aon);
        if (!std::isfinite(gap) || !std::isfinite(res.beckmann_trace.back()))
            throw NonFiniteValue("assignment produced a non-finite value");
        if (gap <= settings.relative_gap_tolerance) break;
        const double lambda = line_search(net, res.flows, aon, settings.line_search_tolerance);
        for (size_t i = 0; i < m; ++i) res.flows[i] += lambda * (aon[i] - res.flows[i]);
        res.beckmann_trace.push_back(beckmann_value(net, res.flows));
    }

    res.converged = gap <= settings.relative_gap_tolerance;
    if (!res.converged) {
        // The last update moved the flows; report the gap they actually have.
        const std::vector<double> times = arc_times(net, res.flows);
        gap = relative_gap(net, res.flows, all_or_nothing(net, times));
    }
    res.relative_gap = gap;
    res.iterations = iter;
    res.total_time = total_travel_time(net, res.flows);
    res.beckmann_value = res.beckmann_trace.back();
    if (!std::isfinite(res.total_time)) throw NonFiniteValue("total travel time is non-finite");
    return res;
}

}  // namespace tndp
