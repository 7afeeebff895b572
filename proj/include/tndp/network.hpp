#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tndp/errors.hpp"

namespace tndp {

/// Directed arc with quartic travel time t(x) = alpha + beta * x^4.
/// alpha, beta >= 0, so t is nonnegative and nondecreasing in the flow.
struct Arc {
    int id = 0;    ///< unique within one network
    int tail = 0;  ///< node ids are 1-based
    int head = 0;
    double alpha = 0.0;  ///< free-flow time
    double beta = 0.0;   ///< congestion coefficient (time / flow^4)
};

/// Travel demand for one origin-destination pair.
struct OdPair {
    int origin = 0;
    int destination = 0;
    double demand = 0.0;
};

/// Immutable directed network: node set {1..node_count}, arc list, demands.
/// Parallel arcs between the same node pair are allowed and distinguished by
/// arc id. Safe to share read-only across threads once constructed.
class Network {
public:
    /// Validates per-arc and per-demand invariants; throws ValidationError.
    /// Reachability of demanded destinations is checked separately (see
    /// check_od_connectivity) so partially built instances can exist in tests.
    Network(int node_count, std::vector<Arc> arcs, std::vector<OdPair> od_pairs);

    int node_count() const { return node_count_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const std::vector<OdPair>& od_pairs() const { return od_pairs_; }

    /// Indices into arcs() of the arcs leaving `node` (1-based id).
    std::span<const int> arcs_from(int node) const;

    /// Distinct demand origins in ascending node-id order.
    const std::vector<int>& origins() const { return origins_; }

    /// (destination, demand) rows of the i-th origin, ascending destination.
    const std::vector<std::pair<int, double>>& destinations_of(int origin_index) const {
        return od_by_origin_[origin_index];
    }

    double total_demand() const { return total_demand_; }

private:
    int node_count_ = 0;
    std::vector<Arc> arcs_;
    std::vector<OdPair> od_pairs_;
    std::vector<int> adj_start_;  // node_count_ + 1 offsets into adj_arcs_
    std::vector<int> adj_arcs_;
    std::vector<int> origins_;
    std::vector<std::vector<std::pair<int, double>>> od_by_origin_;
    double total_demand_ = 0.0;
};

enum class ProjectKind { NewArc, Improvement };

/// Candidate construction project: one decision bit covering one or more arcs
/// (typically both directions of a link) and one construction cost.
struct Project {
    int id = 0;  ///< 1-based, contiguous in file order
    ProjectKind kind = ProjectKind::NewArc;
    std::vector<Arc> arcs;
    double cost = 0.0;
};

/// Ordered candidate projects plus the construction budget. The project order
/// is the canonical bit order for DecisionVector.
struct ProjectSet {
    std::vector<Project> projects;
    double budget = 0.0;

    int size() const { return static_cast<int>(projects.size()); }
    double total_cost() const;
};

/// Accept/reject bit per project, in project order.
struct DecisionVector {
    std::vector<std::uint8_t> bits;

    DecisionVector() = default;
    explicit DecisionVector(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    int size() const { return static_cast<int>(bits.size()); }
    bool operator==(const DecisionVector& o) const { return bits == o.bits; }

    /// "0101..."-style string, project 1 first.
    std::string to_string() const;
    /// Parses a bit string; throws ParseError on any non-'0'/'1' character.
    static DecisionVector from_string(const std::string& s);
};

// ---------------------------------------------------------------------------
// Instance loading
// ---------------------------------------------------------------------------

/// Loads a network from a plain arc file and a trips file.
///
/// Arc file: comment lines start with '~' or '#'; first data line is
/// "<num_nodes> <num_arcs>"; then one arc per line "tail head alpha beta".
/// Trips file: "origin destination demand" per line, same comment rules.
/// Arc ids are assigned 1..num_arcs in file order.
/// Checks that every demanded destination is reachable from its origin.
Network load_network(const std::string& net_path, const std::string& trips_path);

/// Same as load_network but arc rows are BPR-style "tail head t0 capacity b"
/// with power 4, converted via alpha = t0, beta = t0 * b / capacity^4.
Network load_network_bpr(const std::string& net_path, const std::string& trips_path);

/// BPR coefficient conversion used by load_network_bpr; returns {alpha, beta}.
std::pair<double, double> bpr_to_quartic(double t0, double capacity, double b);

/// Loads projects: one header line "project_id kind cost arc_count" (kind is
/// "new" or "improvement") followed by arc_count rows "tail head alpha beta".
/// Project arc node ids are validated against `base`; fresh arc ids are
/// assigned above the base network's largest id.
ProjectSet load_projects(const std::string& path, double budget, const Network& base);

/// Throws ValidationError if some demanded destination is unreachable from
/// its origin over the network's arcs.
void check_od_connectivity(const Network& net);

// ---------------------------------------------------------------------------
// Decision application and evaluation
// ---------------------------------------------------------------------------

/// Returns the decision network: base arcs plus the arcs of every accepted
/// project. The base network is not modified.
Network apply_decision(const Network& base, const ProjectSet& ps, const DecisionVector& y);

/// Total construction cost of the accepted projects.
double decision_cost(const ProjectSet& ps, const DecisionVector& y);

/// t(flow) = alpha + beta * flow^4; throws DomainError on negative flow.
double arc_travel_time(const Arc& arc, double flow);

/// Total system travel time sum_a x_a * t_a(x_a) for flows indexed like
/// net.arcs().
double total_travel_time(const Network& net, std::span<const double> flows);

}  // namespace tndp
