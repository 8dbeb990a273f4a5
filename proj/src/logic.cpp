#include "mtjsc/logic.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "mtjsc/errors.hpp"

namespace mtjsc::logic {

namespace {

constexpr std::size_t kNoTerminal = static_cast<std::size_t>(-1);

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Terminal: return "terminal";
        case NodeKind::And: return "AND";
        case NodeKind::Not: return "NOT";
        case NodeKind::Mux: return "MUX";
    }
    return "?";
}

// Post-order of the cone below `roots`; throws on a back edge.
std::vector<NodeId> cone_order(const ScNetlist& net, const std::vector<NodeId>& roots) {
    enum : unsigned char { White, Grey, Black };
    std::vector<unsigned char> color(net.node_count(), White);
    std::vector<NodeId> order;
    std::vector<std::pair<NodeId, std::size_t>> stack;
    for (NodeId root : roots) {
        if (color[root] != White) continue;
        stack.emplace_back(root, 0);
        color[root] = Grey;
        while (!stack.empty()) {
            auto& [id, next] = stack.back();
            const Node& n = net.node(id);
            if (next < n.inputs.size()) {
                const NodeId child = n.inputs[next++];
                if (color[child] == Grey) {
                    throw CyclicNetlist(net.node(child).name);
                }
                if (color[child] == White) {
                    color[child] = Grey;
                    stack.emplace_back(child, 0);
                }
            } else {
                color[id] = Black;
                order.push_back(id);
                stack.pop_back();
            }
        }
    }
    return order;
}

using TermMap = std::map<std::vector<Literal>, std::int64_t>;

SumOfProducts from_map(const TermMap& m) {
    SumOfProducts out;
    out.reserve(m.size());
    for (const auto& [lits, coef] : m) {
        if (coef != 0) out.push_back({lits, coef});
    }
    return out;
}

// Product of two literal lists; empty optional when x and not-x meet.
std::optional<std::vector<Literal>> merge_literals(const std::vector<Literal>& a,
                                                   const std::vector<Literal>& b) {
    std::vector<Literal> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].terminal < b[j].terminal)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].terminal < a[i].terminal) {
            out.push_back(b[j++]);
        } else {
            if (a[i].negated != b[j].negated) return std::nullopt;
            out.push_back(a[i]);
            ++i;
            ++j;
        }
    }
    return out;
}

SumOfProducts multiply(const SumOfProducts& x, const SumOfProducts& y) {
    TermMap acc;
    for (const ProductTerm& a : x) {
        for (const ProductTerm& b : y) {
            if (auto lits = merge_literals(a.literals, b.literals)) {
                acc[std::move(*lits)] += a.coefficient * b.coefficient;
            }
        }
    }
    return from_map(acc);
}

SumOfProducts add(const SumOfProducts& x, const SumOfProducts& y) {
    TermMap acc;
    for (const ProductTerm& t : x) acc[t.literals] += t.coefficient;
    for (const ProductTerm& t : y) acc[t.literals] += t.coefficient;
    return from_map(acc);
}

SumOfProducts complement(const SumOfProducts& x) {
    if (x.size() == 1 && x[0].coefficient == 1 && x[0].literals.size() == 1) {
        Literal l = x[0].literals[0];
        l.negated = !l.negated;
        return {ProductTerm{{l}, 1}};
    }
    TermMap acc;
    acc[{}] += 1;
    for (const ProductTerm& t : x) acc[t.literals] -= t.coefficient;
    return from_map(acc);
}

class Expander {
public:
    explicit Expander(const ScNetlist& net) : net_(net), memo_(net.node_count()) {}

    const SumOfProducts& expand(NodeId root) {
        if (memo_[root]) return *memo_[root];
        for (NodeId id : cone_order(net_, {root})) {
            if (!memo_[id]) memo_[id] = compute(id);
        }
        return *memo_[root];
    }

private:
    SumOfProducts compute(NodeId id) {
        const Node& n = net_.node(id);
        switch (n.kind) {
            case NodeKind::Terminal:
                return {ProductTerm{{Literal{net_.terminal_index(id), false}}, 1}};
            case NodeKind::And: {
                SumOfProducts acc = *memo_[n.inputs[0]];
                for (std::size_t i = 1; i < n.inputs.size(); ++i) {
                    acc = multiply(acc, *memo_[n.inputs[i]]);
                }
                return acc;
            }
            case NodeKind::Not:
                return complement(*memo_[n.inputs[0]]);
            case NodeKind::Mux: {
                const SumOfProducts& sel = *memo_[n.inputs[2]];
                return add(multiply(*memo_[n.inputs[0]], sel),
                           multiply(*memo_[n.inputs[1]], complement(sel)));
            }
        }
        return {};
    }

    const ScNetlist& net_;
    std::vector<std::optional<SumOfProducts>> memo_;
};

}  // namespace

NodeId ScNetlist::add_node(NodeKind kind, std::vector<NodeId> inputs, std::string name) {
    const NodeId id = nodes_.size();
    if (name.empty()) {
        name = "_" + std::to_string(id);
    }
    if (!by_name_.emplace(name, id).second) {
        throw std::invalid_argument("duplicate netlist node name '" + name + "'");
    }
    nodes_.push_back({kind, std::move(name), std::move(inputs)});
    if (kind == NodeKind::Terminal) {
        terminal_of_node_.push_back(terminals_.size());
        terminals_.push_back(id);
    } else {
        terminal_of_node_.push_back(kNoTerminal);
    }
    return id;
}

void ScNetlist::check_arity(NodeKind kind, std::size_t n) const {
    const bool ok = (kind == NodeKind::And && n >= 1) || (kind == NodeKind::Not && n == 1) ||
                    (kind == NodeKind::Mux && n == 3) || (kind == NodeKind::Terminal && n == 0);
    if (!ok) {
        throw std::invalid_argument(std::string("bad input count for ") + kind_name(kind) +
                                    ": " + std::to_string(n));
    }
}

NodeId ScNetlist::add_terminal(std::string name) {
    return add_node(NodeKind::Terminal, {}, std::move(name));
}

NodeId ScNetlist::add_and(std::vector<NodeId> inputs, std::string name) {
    check_arity(NodeKind::And, inputs.size());
    for (NodeId in : inputs) node(in);
    return add_node(NodeKind::And, std::move(inputs), std::move(name));
}

NodeId ScNetlist::add_not(NodeId input, std::string name) {
    node(input);
    return add_node(NodeKind::Not, {input}, std::move(name));
}

NodeId ScNetlist::add_mux(NodeId first, NodeId second, NodeId select, std::string name) {
    node(first);
    node(second);
    node(select);
    return add_node(NodeKind::Mux, {first, second, select}, std::move(name));
}

void ScNetlist::add_output(NodeId id) {
    node(id);
    outputs_.push_back(id);
}

void ScNetlist::rewire(NodeId gate, std::vector<NodeId> inputs) {
    Node& n = nodes_.at(gate);
    check_arity(n.kind, inputs.size());
    for (NodeId in : inputs) node(in);
    n.inputs = std::move(inputs);
}

std::size_t ScNetlist::terminal_index(NodeId id) const {
    const std::size_t t = terminal_of_node_.at(id);
    if (t == kNoTerminal) {
        throw std::invalid_argument("node '" + nodes_[id].name + "' is not a terminal");
    }
    return t;
}

std::optional<NodeId> ScNetlist::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::vector<NodeId> ScNetlist::topological_order() const {
    std::vector<NodeId> all(nodes_.size());
    for (NodeId i = 0; i < all.size(); ++i) all[i] = i;
    return cone_order(*this, all);
}

std::vector<std::size_t> ProductTerm::support() const {
    std::vector<std::size_t> s;
    s.reserve(literals.size());
    for (const Literal& l : literals) s.push_back(l.terminal);
    return s;
}

SumOfProducts expand_products(const ScNetlist& net, NodeId output) {
    Expander ex(net);
    return ex.expand(output);
}

double evaluate_probability(const SumOfProducts& sop, const std::vector<double>& p) {
    double total = 0.0;
    for (const ProductTerm& t : sop) {
        double prod = static_cast<double>(t.coefficient);
        for (const Literal& l : t.literals) {
            prod *= l.negated ? 1.0 - p.at(l.terminal) : p.at(l.terminal);
        }
        total += prod;
    }
    return total;
}

std::vector<ConflictSet> absorb_subsets(std::vector<ConflictSet> sets) {
    std::vector<ConflictSet> unique;
    std::set<std::vector<std::size_t>> seen;
    for (ConflictSet& s : sets) {
        if (seen.insert(s.members).second) unique.push_back(std::move(s));
    }
    std::unordered_map<std::size_t, std::vector<std::size_t>> containing;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        for (std::size_t t : unique[i].members) containing[t].push_back(i);
    }
    std::vector<ConflictSet> out;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        const auto& m = unique[i].members;
        bool absorbed = false;
        for (std::size_t j : containing[m.front()]) {
            const auto& o = unique[j].members;
            if (j != i && o.size() > m.size() &&
                std::includes(o.begin(), o.end(), m.begin(), m.end())) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) out.push_back(unique[i]);
    }
    return out;
}

std::vector<ConflictSet> extract_conflict_sets(const ScNetlist& net) {
    Expander ex(net);
    std::vector<ConflictSet> sets;
    for (NodeId out : net.outputs()) {
        for (const ProductTerm& t : ex.expand(out)) {
            if (!t.literals.empty()) sets.push_back({t.support()});
        }
    }
    return absorb_subsets(std::move(sets));
}

ClusterMap identity_clusters(std::size_t terminal_count) {
    ClusterMap m;
    m.cluster_of.resize(terminal_count);
    m.members.resize(terminal_count);
    for (std::size_t t = 0; t < terminal_count; ++t) {
        m.cluster_of[t] = t;
        m.members[t] = {t};
    }
    return m;
}

ClusterMap cluster_terminals(std::size_t terminal_count,
                             const std::vector<ConflictSet>& conflict_sets,
                             const std::vector<std::vector<std::size_t>>& same_input_classes) {
    std::vector<char> covered(terminal_count, 0);
    for (const auto& cls : same_input_classes) {
        for (std::size_t t : cls) {
            if (t >= terminal_count || covered[t]) {
                throw std::invalid_argument("same-input classes must partition the terminals");
            }
            covered[t] = 1;
        }
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
        throw std::invalid_argument("same-input classes must partition the terminals");
    }

    std::vector<std::vector<std::size_t>> sets_of(terminal_count);
    for (std::size_t s = 0; s < conflict_sets.size(); ++s) {
        for (std::size_t t : conflict_sets[s].members) sets_of.at(t).push_back(s);
    }

    struct Cluster {
        std::vector<std::size_t> members;
        std::unordered_set<std::size_t> sets;
    };
    std::vector<Cluster> clusters;
    for (const auto& cls : same_input_classes) {
        std::vector<std::size_t> sorted = cls;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t first = clusters.size();
        for (std::size_t t : sorted) {
            Cluster* home = nullptr;
            for (std::size_t c = first; c < clusters.size() && !home; ++c) {
                const bool clash = std::any_of(sets_of[t].begin(), sets_of[t].end(),
                                               [&](std::size_t s) { return clusters[c].sets.count(s) > 0; });
                if (!clash) home = &clusters[c];
            }
            if (!home) {
                clusters.emplace_back();
                home = &clusters.back();
            }
            home->members.push_back(t);
            home->sets.insert(sets_of[t].begin(), sets_of[t].end());
        }
    }
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        return a.members.front() < b.members.front();
    });

    ClusterMap m;
    m.cluster_of.resize(terminal_count);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t t : clusters[c].members) m.cluster_of[t] = c;
        m.members.push_back(std::move(clusters[c].members));
    }
    return m;
}

std::vector<ConflictSet> map_conflict_sets(const std::vector<ConflictSet>& sets,
                                           const ClusterMap& clusters) {
    std::vector<ConflictSet> out;
    out.reserve(sets.size());
    for (const ConflictSet& s : sets) {
        ConflictSet mapped;
        for (std::size_t t : s.members) mapped.members.push_back(clusters.cluster_of.at(t));
        std::sort(mapped.members.begin(), mapped.members.end());
        mapped.members.erase(std::unique(mapped.members.begin(), mapped.members.end()),
                             mapped.members.end());
        out.push_back(std::move(mapped));
    }
    return out;
}

std::vector<stochastic::Bitstream> evaluate_streams(
    const ScNetlist& net, const std::vector<stochastic::Bitstream>& terminal_streams) {
    if (terminal_streams.size() != net.terminal_count()) {
        throw std::invalid_argument("expected one stream per terminal");
    }
    std::vector<stochastic::Bitstream> value(net.node_count());
    for (NodeId id : cone_order(net, net.outputs())) {
        const Node& n = net.node(id);
        switch (n.kind) {
            case NodeKind::Terminal:
                value[id] = terminal_streams[net.terminal_index(id)];
                break;
            case NodeKind::And:
                value[id] = value[n.inputs[0]];
                for (std::size_t i = 1; i < n.inputs.size(); ++i) {
                    value[id] = stochastic::sc_and(value[id], value[n.inputs[i]]);
                }
                break;
            case NodeKind::Not:
                value[id] = stochastic::sc_not(value[n.inputs[0]]);
                break;
            case NodeKind::Mux:
                value[id] = stochastic::sc_mux(value[n.inputs[0]], value[n.inputs[1]],
                                               value[n.inputs[2]]);
                break;
        }
    }
    std::vector<stochastic::Bitstream> outs;
    outs.reserve(net.outputs().size());
    for (NodeId o : net.outputs()) outs.push_back(value[o]);
    return outs;
}

ScNetlist parse_netlist(std::istream& in) {
    struct Record {
        std::size_t line;
        NodeKind kind;
        std::string name;
        std::vector<std::string> inputs;
    };
    std::vector<Record> records;
    std::vector<std::pair<std::size_t, std::string>> outputs;

    std::string raw;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError("netlist line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "terminal") {
            if (tok.size() != 2) throw fail("expected 'terminal <id>'");
            records.push_back({lineno, NodeKind::Terminal, tok[1], {}});
        } else if (tok[0] == "output") {
            if (tok.size() != 2) throw fail("expected 'output <id>'");
            outputs.emplace_back(lineno, tok[1]);
        } else if (tok[0] == "gate") {
            if (tok.size() < 4) throw fail("expected 'gate <id> <kind> <inputs...>'");
            NodeKind kind;
            if (tok[2] == "AND") {
                kind = NodeKind::And;
            } else if (tok[2] == "NOT") {
                kind = NodeKind::Not;
                if (tok.size() != 4) throw fail("NOT takes exactly one input");
            } else if (tok[2] == "MUX") {
                kind = NodeKind::Mux;
                if (tok.size() != 6) throw fail("MUX takes exactly three inputs");
            } else {
                throw fail("unknown gate kind '" + tok[2] + "'");
            }
            records.push_back({lineno, kind, tok[1], {tok.begin() + 3, tok.end()}});
        } else {
            throw fail("unknown directive '" + tok[0] + "'");
        }
    }

    ScNetlist net;
    for (const Record& r : records) {
        lineno = r.line;
        if (net.find(r.name)) throw fail("duplicate id '" + r.name + "'");
        if (r.kind == NodeKind::Terminal) {
            net.add_terminal(r.name);
        } else {
            // Placeholder inputs; rewired once every id is known.
            net.add_node(r.kind, std::vector<NodeId>(r.inputs.size(), 0), r.name);
        }
    }
    for (const Record& r : records) {
        if (r.kind == NodeKind::Terminal) continue;
        lineno = r.line;
        std::vector<NodeId> ins;
        for (const std::string& s : r.inputs) {
            auto id = net.find(s);
            if (!id) throw fail("undefined input '" + s + "'");
            ins.push_back(*id);
        }
        net.rewire(*net.find(r.name), std::move(ins));
    }
    for (const auto& [line, name] : outputs) {
        lineno = line;
        auto id = net.find(name);
        if (!id) throw fail("undefined output '" + name + "'");
        net.add_output(*id);
    }
    return net;
}

ScNetlist load_netlist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open netlist file '" + path + "'");
    return parse_netlist(in);
}

void write_netlist(std::ostream& out, const ScNetlist& net) {
    for (std::size_t t = 0; t < net.terminal_count(); ++t) {
        out << "terminal " << net.node(net.terminal_node(t)).name << '\n';
    }
    for (NodeId id = 0; id < net.node_count(); ++id) {
        const Node& n = net.node(id);
        if (n.kind == NodeKind::Terminal) continue;
        out << "gate " << n.name << ' ' << kind_name(n.kind);
        for (NodeId in : n.inputs) out << ' ' << net.node(in).name;
        out << '\n';
    }
    for (NodeId o : net.outputs()) out << "output " << net.node(o).name << '\n';
}

}  // namespace mtjsc::logic
