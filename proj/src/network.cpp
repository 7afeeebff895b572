#include "tndp/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace tndp {

namespace {

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '~' || c == '#';
    }
    return true;
}

/// Splits a data line into whitespace-separated tokens.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const std::string& file, int line) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == nullptr || *end != '\0')
        throw ParseError(file, line, "expected a number, got '" + tok + "'");
    return v;
}

int parse_int(const std::string& tok, const std::string& file, int line) {
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end == nullptr || *end != '\0')
        throw ParseError(file, line, "expected an integer, got '" + tok + "'");
    return static_cast<int>(v);
}

/// Reads the next data line; returns false on EOF.
bool next_data_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!is_comment_or_blank(line)) return true;
    }
    return false;
}

struct ArcRowReader {
    bool bpr = false;

    Arc read(const std::vector<std::string>& tok, const std::string& file, int line_no) const {
        const size_t want = bpr ? 5 : 4;
        if (tok.size() != want)
            throw ParseError(file, line_no,
                             "expected " + std::to_string(want) + " fields, got " +
                                 std::to_string(tok.size()));
        Arc a;
        a.tail = parse_int(tok[0], file, line_no);
        a.head = parse_int(tok[1], file, line_no);
        if (bpr) {
            double t0 = parse_double(tok[2], file, line_no);
            double cap = parse_double(tok[3], file, line_no);
            double b = parse_double(tok[4], file, line_no);
            if (cap <= 0.0)
                throw ValidationError(file + ":" + std::to_string(line_no) +
                                      ": capacity must be positive");
            auto [alpha, beta] = bpr_to_quartic(t0, cap, b);
            a.alpha = alpha;
            a.beta = beta;
        } else {
            a.alpha = parse_double(tok[2], file, line_no);
            a.beta = parse_double(tok[3], file, line_no);
        }
        return a;
    }
};

std::vector<OdPair> load_trips(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<OdPair> od;
    std::string line;
    int line_no = 0;
    while (next_data_line(in, line, line_no)) {
        auto tok = tokenize(line);
        if (tok.size() != 3)
            throw ParseError(path, line_no, "expected 3 fields, got " + std::to_string(tok.size()));
        OdPair p;
        p.origin = parse_int(tok[0], path, line_no);
        p.destination = parse_int(tok[1], path, line_no);
        p.demand = parse_double(tok[2], path, line_no);
        od.push_back(p);
    }
    return od;
}

Network load_network_impl(const std::string& net_path, const std::string& trips_path, bool bpr) {
    std::ifstream in(net_path);
    if (!in) throw ParseError(net_path + ": cannot open file");

    std::string line;
    int line_no = 0;
    if (!next_data_line(in, line, line_no))
        throw ParseError(net_path, line_no, "missing header line");
    auto header = tokenize(line);
    if (header.size() != 2)
        throw ParseError(net_path, line_no, "header must be '<num_nodes> <num_arcs>'");
    const int num_nodes = parse_int(header[0], net_path, line_no);
    const int num_arcs = parse_int(header[1], net_path, line_no);
    if (num_nodes < 0 || num_arcs < 0)
        throw ParseError(net_path, line_no, "negative count in header");

    ArcRowReader reader{bpr};
    std::vector<Arc> arcs;
    arcs.reserve(num_arcs);
    for (int i = 0; i < num_arcs; ++i) {
        if (!next_data_line(in, line, line_no))
            throw ParseError(net_path, line_no,
                             "expected " + std::to_string(num_arcs) + " arc rows, got " +
                                 std::to_string(i));
        Arc a = reader.read(tokenize(line), net_path, line_no);
        a.id = i + 1;
        arcs.push_back(a);
    }

    Network net(num_nodes, std::move(arcs), load_trips(trips_path));
    check_od_connectivity(net);
    return net;
}

}  // namespace

std::pair<double, double> bpr_to_quartic(double t0, double capacity, double b) {
    const double c2 = capacity * capacity;
    return {t0, t0 * b / (c2 * c2)};
}

Network load_network(const std::string& net_path, const std::string& trips_path) {
    return load_network_impl(net_path, trips_path, /*bpr=*/false);
}

Network load_network_bpr(const std::string& net_path, const std::string& trips_path) {
    return load_network_impl(net_path, trips_path, /*bpr=*/true);
}

Network::Network(int node_count, std::vector<Arc> arcs, std::vector<OdPair> od_pairs)
    : node_count_(node_count), arcs_(std::move(arcs)), od_pairs_(std::move(od_pairs)) {
    if (node_count_ < 0) throw ValidationError("node count must be nonnegative");

    std::unordered_set<int> seen_ids;
    seen_ids.reserve(arcs_.size());
    for (const Arc& a : arcs_) {
        if (a.tail < 1 || a.tail > node_count_ || a.head < 1 || a.head > node_count_)
            throw ValidationError("arc " + std::to_string(a.id) + " references node outside 1.." +
                                  std::to_string(node_count_));
        if (a.tail == a.head)
            throw ValidationError("arc " + std::to_string(a.id) + " is a self-loop");
        if (!(a.alpha >= 0.0) || !std::isfinite(a.alpha) || !(a.beta >= 0.0) ||
            !std::isfinite(a.beta))
            throw ValidationError("arc " + std::to_string(a.id) +
                                  " has a negative or non-finite coefficient");
        if (!seen_ids.insert(a.id).second)
            throw ValidationError("duplicate arc id " + std::to_string(a.id));
    }

    for (const OdPair& p : od_pairs_) {
        if (p.origin < 1 || p.origin > node_count_ || p.destination < 1 ||
            p.destination > node_count_)
            throw ValidationError("OD pair references node outside 1.." +
                                  std::to_string(node_count_));
        if (p.origin == p.destination)
            throw ValidationError("OD pair with origin = destination = " +
                                  std::to_string(p.origin));
        if (!(p.demand >= 0.0) || !std::isfinite(p.demand))
            throw ValidationError("negative or non-finite demand for OD " +
                                  std::to_string(p.origin) + "->" + std::to_string(p.destination));
        total_demand_ += p.demand;
    }

    // Adjacency grouped by tail (counting sort), preserving arc order within
    // each group.
    adj_start_.assign(node_count_ + 2, 0);
    for (const Arc& a : arcs_) ++adj_start_[a.tail + 1];
    for (int n = 1; n <= node_count_ + 1; ++n) adj_start_[n] += adj_start_[n - 1];
    adj_arcs_.resize(arcs_.size());
    std::vector<int> cursor(adj_start_.begin(), adj_start_.end());
    for (int i = 0; i < static_cast<int>(arcs_.size()); ++i)
        adj_arcs_[cursor[arcs_[i].tail]++] = i;

    // Demands grouped by origin for the assignment engine.
    std::map<int, std::vector<std::pair<int, double>>> grouped;
    for (const OdPair& p : od_pairs_) grouped[p.origin].emplace_back(p.destination, p.demand);
    for (auto& [origin, dests] : grouped) {
        std::sort(dests.begin(), dests.end());
        origins_.push_back(origin);
        od_by_origin_.push_back(std::move(dests));
    }
}

std::span<const int> Network::arcs_from(int node) const {
    if (node < 1 || node > node_count_) throw OutOfRange("node id out of range");
    return {adj_arcs_.data() + adj_start_[node], adj_arcs_.data() + adj_start_[node + 1]};
}

double ProjectSet::total_cost() const {
    double c = 0.0;
    for (const Project& p : projects) c += p.cost;
    return c;
}

std::string DecisionVector::to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

DecisionVector DecisionVector::from_string(const std::string& s) {
    DecisionVector y;
    y.bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw ParseError("decision string must contain only '0'/'1', got '" +
                             std::string(1, c) + "'");
        y.bits.push_back(c == '1' ? 1 : 0);
    }
    return y;
}

ProjectSet load_projects(const std::string& path, double budget, const Network& base) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    if (!(budget >= 0.0) || !std::isfinite(budget))
        throw ValidationError("budget must be nonnegative and finite");

    int max_base_id = 0;
    for (const Arc& a : base.arcs()) max_base_id = std::max(max_base_id, a.id);

    ProjectSet ps;
    ps.budget = budget;
    std::string line;
    int line_no = 0;
    int next_arc_id = max_base_id + 1;
    while (next_data_line(in, line, line_no)) {
        auto tok = tokenize(line);
        if (tok.size() != 4)
            throw ParseError(path, line_no,
                             "project header must be '<id> <kind> <cost> <arc_count>'");
        Project proj;
        proj.id = parse_int(tok[0], path, line_no);
        std::string kind = tok[1];
        std::transform(kind.begin(), kind.end(), kind.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (kind == "new")
            proj.kind = ProjectKind::NewArc;
        else if (kind == "improvement")
            proj.kind = ProjectKind::Improvement;
        else
            throw ParseError(path, line_no, "kind must be 'new' or 'improvement', got '" +
                                                tok[1] + "'");
        proj.cost = parse_double(tok[2], path, line_no);
        const int arc_count = parse_int(tok[3], path, line_no);

        if (proj.id != static_cast<int>(ps.projects.size()) + 1)
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": project ids must be 1..n in order, got " +
                                  std::to_string(proj.id));
        if (!(proj.cost > 0.0) || !std::isfinite(proj.cost))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": project cost must be positive");
        if (arc_count < 1)
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": a project needs at least one arc");

        ArcRowReader reader{false};
        for (int i = 0; i < arc_count; ++i) {
            if (!next_data_line(in, line, line_no))
                throw ParseError(path, line_no, "unexpected end of file inside project " +
                                                    std::to_string(proj.id));
            Arc a = reader.read(tokenize(line), path, line_no);
            a.id = next_arc_id++;
            if (a.tail < 1 || a.tail > base.node_count() || a.head < 1 ||
                a.head > base.node_count())
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": project arc references node outside the base network");
            if (a.tail == a.head)
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": project arc is a self-loop");
            if (!(a.alpha >= 0.0) || !(a.beta >= 0.0))
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": project arc has a negative coefficient");
            proj.arcs.push_back(a);
        }
        ps.projects.push_back(std::move(proj));
    }
    return ps;
}

void check_od_connectivity(const Network& net) {
    // BFS per distinct origin; arcs all usable (travel time plays no role).
    const int n = net.node_count();
    std::vector<int> reached(n + 1, 0);
    std::vector<int> stack;
    for (size_t oi = 0; oi < net.origins().size(); ++oi) {
        const int origin = net.origins()[oi];
        std::fill(reached.begin(), reached.end(), 0);
        stack.assign(1, origin);
        reached[origin] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int ai : net.arcs_from(u)) {
                int v = net.arcs()[ai].head;
                if (!reached[v]) {
                    reached[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (const auto& [dest, demand] : net.destinations_of(static_cast<int>(oi))) {
            if (demand > 0.0 && !reached[dest])
                throw ValidationError("destination " + std::to_string(dest) +
                                      " is unreachable from origin " + std::to_string(origin));
        }
    }
}

Network apply_decision(const Network& base, const ProjectSet& ps, const DecisionVector& y) {
    if (y.size() != ps.size())
        throw DimensionMismatch("decision has " + std::to_string(y.size()) + " bits, project set has " +
                                std::to_string(ps.size()));
    std::vector<Arc> arcs = base.arcs();
    for (int j = 0; j < ps.size(); ++j) {
        if (!y.bits[j]) continue;
        const Project& p = ps.projects[j];
        arcs.insert(arcs.end(), p.arcs.begin(), p.arcs.end());
    }
    return Network(base.node_count(), std::move(arcs), base.od_pairs());
}

double decision_cost(const ProjectSet& ps, const DecisionVector& y) {
    if (y.size() != ps.size())
        throw DimensionMismatch("decision has " + std::to_string(y.size()) + " bits, project set has " +
                                std::to_string(ps.size()));
    double cost = 0.0;
    for (int j = 0; j < ps.size(); ++j)
        if (y.bits[j]) cost += ps.projects[j].cost;
    return cost;
}

double arc_travel_time(const Arc& arc, double flow) {
    if (!(flow >= 0.0)) throw DomainError("flow must be nonnegative");
    const double f2 = flow * flow;
    return arc.alpha + arc.beta * f2 * f2;
}

double total_travel_time(const Network& net, std::span<const double> flows) {
    if (flows.size() != net.arcs().size())
        throw DimensionMismatch("flow vector length does not match arc count");
    double total = 0.0;
    for (size_t i = 0; i < flows.size(); ++i)
        total += flows[i] * arc_travel_time(net.arcs()[i], flows[i]);
    return total;
}

}  // namespace tndp
