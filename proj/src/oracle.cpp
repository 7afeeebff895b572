#include "tndp/oracle.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "tndp/parallel.hpp"
#include "tndp/pso.hpp"

namespace tndp {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void check_guard(int n, int guard, bool override_guard) {
    if (n > guard && !override_guard)
        throw ValidationError("refusing to enumerate 2^" + std::to_string(n) +
                              " decisions (guard at " + std::to_string(guard) +
                              " projects); pass the override flag to force");
}

/// Shared worker: evaluates T(y) for decision index k, honoring an optional
/// budget filter.
void evaluate_row(EnumerationRow& row, std::uint64_t k, const Network& net, const ProjectSet& ps,
                  const AssignmentSettings& settings, double budget, bool filter_by_budget) {
    const int n = ps.size();
    const DecisionVector y = index_to_decision(k, n);
    row.index = k;
    row.cost = decision_cost(ps, y);
    row.feasible = row.cost <= budget;
    if (filter_by_budget && !row.feasible) return;
    try {
        const Network decided = apply_decision(net, ps, y);
        row.ofv = solve_ue(decided, settings).total_time;
        row.evaluated = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
}

void find_optimum(EnumerationTable& table) {
    table.has_optimum = false;
    for (const EnumerationRow& row : table.rows) {
        if (!row.feasible || !row.evaluated) continue;
        if (!table.has_optimum || row.ofv < table.optimum_ofv) {
            table.has_optimum = true;
            table.optimum_index = row.index;
            table.optimum_ofv = row.ofv;
        }
    }
}

}  // namespace

EnumerationTable enumerate_decisions(const Network& net, const ProjectSet& ps,
                                     const AssignmentSettings& settings, double budget,
                                     int threads, int max_projects_guard, bool override_guard,
                                     void (*progress)(std::uint64_t, std::uint64_t)) {
    const int n = ps.size();
    check_guard(n, max_projects_guard, override_guard);

    EnumerationTable table;
    table.n_projects = n;
    table.budget = budget;
    const std::uint64_t count = std::uint64_t{1} << n;
    table.rows.resize(count);

    std::atomic<std::uint64_t> done{0};
    parallel_for(static_cast<std::int64_t>(count), threads, [&](std::int64_t k) {
        evaluate_row(table.rows[k], static_cast<std::uint64_t>(k), net, ps, settings, budget,
                     /*filter_by_budget=*/true);
        const std::uint64_t d = done.fetch_add(1) + 1;
        if (progress && (d % 64 == 0 || d == count)) progress(d, count);
    });

    find_optimum(table);
    return table;
}

std::vector<BudgetOptimum> optimum_for_budgets(const Network& net, const ProjectSet& ps,
                                               const AssignmentSettings& settings,
                                               const std::vector<double>& budgets, int threads,
                                               int max_projects_guard, bool override_guard) {
    if (budgets.empty()) throw ValidationError("budget list must be nonempty");
    const int n = ps.size();
    check_guard(n, max_projects_guard, override_guard);

    // One unfiltered pass over all decisions, reused for every budget level.
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<EnumerationRow> rows(count);
    parallel_for(static_cast<std::int64_t>(count), threads, [&](std::int64_t k) {
        evaluate_row(rows[k], static_cast<std::uint64_t>(k), net, ps, settings,
                     /*budget=*/0.0, /*filter_by_budget=*/false);
    });

    std::vector<BudgetOptimum> out;
    out.reserve(budgets.size());
    for (double budget : budgets) {
        BudgetOptimum best;
        best.budget = budget;
        bool found = false;
        for (const EnumerationRow& row : rows) {
            if (row.cost > budget || !row.evaluated) continue;
            if (!found || row.ofv < best.ofv) {
                found = true;
                best.index = row.index;
                best.ofv = row.ofv;
            }
        }
        if (!found)
            throw ValidationError("no feasible decision under budget " + format_double(budget));
        out.push_back(best);
    }
    return out;
}

void write_enumeration_csv(const EnumerationTable& table, std::ostream& out) {
    out << "index,bits,cost,feasible,ofv\n";
    for (const EnumerationRow& row : table.rows) {
        out << row.index << ',' << index_to_decision(row.index, table.n_projects).to_string()
            << ',' << format_double(row.cost) << ',' << (row.feasible ? 1 : 0) << ',';
        if (row.evaluated) out << format_double(row.ofv);
        out << '\n';
    }
}

EnumerationTable read_enumeration_csv(std::istream& in) {
    EnumerationTable table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,bits,cost,feasible,ofv", 0) != 0)
        throw ParseError("enumeration CSV: missing or unexpected header");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        EnumerationRow row;
        std::string bits;
        try {
            std::getline(ss, field, ',');
            row.index = std::stoull(field);
            std::getline(ss, bits, ',');
            std::getline(ss, field, ',');
            row.cost = std::stod(field);
            std::getline(ss, field, ',');
            row.feasible = field == "1";
            if (std::getline(ss, field, ',') && !field.empty()) {
                row.ofv = std::stod(field);
                row.evaluated = true;
            }
        } catch (const std::exception&) {
            throw ParseError("enumeration CSV", line_no, "malformed row");
        }
        if (table.rows.empty()) table.n_projects = static_cast<int>(bits.size());
        table.rows.push_back(row);
    }
    find_optimum(table);
    return table;
}

}  // namespace tndp
