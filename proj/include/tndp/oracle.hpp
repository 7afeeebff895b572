#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tndp/assignment.hpp"
#include "tndp/network.hpp"

namespace tndp {

/// One enumerated decision. Infeasible rows carry cost and flag only; rows
/// whose assignment failed carry the error text instead of an objective.
struct EnumerationRow {
    std::uint64_t index = 0;
    double cost = 0.0;
    bool feasible = false;
    bool evaluated = false;
    double ofv = 0.0;
    std::string error;
};

/// Ground truth by complete enumeration of all 2^n decision vectors.
struct EnumerationTable {
    int n_projects = 0;
    double budget = 0.0;
    std::vector<EnumerationRow> rows;  ///< exactly 2^n, in index order
    std::uint64_t optimum_index = 0;
    double optimum_ofv = 0.0;
    bool has_optimum = false;
};

struct BudgetOptimum {
    double budget = 0.0;
    std::uint64_t index = 0;
    double ofv = 0.0;
};

/// Evaluates every feasible decision with the equilibrium solver and returns
/// the full table. Ties in the optimum break toward the smaller index.
/// Refuses n > max_projects_guard unless override_guard is set (2^n solves).
/// `progress`, when nonnull, receives the count of completed rows.
EnumerationTable enumerate_decisions(const Network& net, const ProjectSet& ps,
                                     const AssignmentSettings& settings, double budget,
                                     int threads = 1, int max_projects_guard = 24,
                                     bool override_guard = false,
                                     void (*progress)(std::uint64_t done, std::uint64_t total) = nullptr);

/// Evaluates the objective of all 2^n decisions once (no budget filter), then
/// reports the optimum under each budget. The optimum is nonincreasing in the
/// budget.
std::vector<BudgetOptimum> optimum_for_budgets(const Network& net, const ProjectSet& ps,
                                               const AssignmentSettings& settings,
                                               const std::vector<double>& budgets,
                                               int threads = 1, int max_projects_guard = 24,
                                               bool override_guard = false);

/// CSV persistence: "index,bits,cost,feasible,ofv" rows; ofv is empty for
/// rows without an objective. Round-trips through read_enumeration_csv.
void write_enumeration_csv(const EnumerationTable& table, std::ostream& out);
EnumerationTable read_enumeration_csv(std::istream& in);

}  // namespace tndp
