// Test-only reference solutions, independent of the implementation paths they
// check.
#pragma once

#include <cmath>
#include <vector>

#include "tndp/network.hpp"

namespace tndp::testing {

/// Builds a one-OD-pair network of parallel arcs 1 -> 2 with t_i = alpha_i +
/// beta_i x^4 and the given demand.
inline Network parallel_arc_network(const std::vector<std::pair<double, double>>& coeffs,
                                    double demand) {
    std::vector<Arc> arcs;
    int id = 1;
    for (const auto& [alpha, beta] : coeffs) arcs.push_back({id++, 1, 2, alpha, beta});
    return Network(2, std::move(arcs), {{1, 2, demand}});
}

/// Wardrop equilibrium of parallel arcs by bisection on the common travel
/// time tau: each used arc carries ((tau - alpha_i) / beta_i)^(1/4), unused
/// arcs carry zero; total flow is strictly increasing in tau. Requires
/// beta_i > 0.
inline std::vector<double> parallel_arc_equilibrium(
    const std::vector<std::pair<double, double>>& coeffs, double demand) {
    auto flow_at = [&](double tau) {
        double total = 0.0;
        for (const auto& [alpha, beta] : coeffs)
            if (tau > alpha) total += std::pow((tau - alpha) / beta, 0.25);
        return total;
    };
    double lo = coeffs.front().first, hi = coeffs.front().first;
    for (const auto& [alpha, beta] : coeffs) {
        lo = std::min(lo, alpha);
        hi = std::max(hi, alpha + beta * std::pow(demand, 4.0));
    }
    hi += 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (flow_at(mid) >= demand)
            hi = mid;
        else
            lo = mid;
    }
    const double tau = 0.5 * (lo + hi);
    std::vector<double> flows;
    for (const auto& [alpha, beta] : coeffs)
        flows.push_back(tau > alpha ? std::pow((tau - alpha) / beta, 0.25) : 0.0);
    // Distribute the residual rounding onto the largest flow so totals match.
    double total = 0.0;
    for (double f : flows) total += f;
    if (!flows.empty()) {
        size_t largest = 0;
        for (size_t i = 1; i < flows.size(); ++i)
            if (flows[i] > flows[largest]) largest = i;
        flows[largest] += demand - total;
    }
    return flows;
}

/// Dense-grid minimizer of the Beckmann objective along x + lambda d.
inline double grid_line_search(const Network& net, const std::vector<double>& x,
                               const std::vector<double>& x_aon, int points) {
    auto objective = [&](double lambda) {
        double total = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double xi = x[i] + lambda * (x_aon[i] - x[i]);
            const double x2 = xi * xi;
            total += net.arcs()[i].alpha * xi + net.arcs()[i].beta * x2 * x2 * xi * 0.2;
        }
        return total;
    };
    double best_lambda = 0.0, best = objective(0.0);
    for (int i = 1; i <= points; ++i) {
        const double lambda = static_cast<double>(i) / points;
        const double v = objective(lambda);
        if (v < best) {
            best = v;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

}  // namespace tndp::testing
