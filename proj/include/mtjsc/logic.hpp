#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtjsc/bitstream.hpp"

namespace mtjsc::logic {

enum class NodeKind { Terminal, And, Not, Mux };

using NodeId = std::size_t;

struct Node {
    NodeKind kind;
    std::string name;
    // AND: k >= 1 inputs. NOT: one. MUX: (first, second, select), the first
    // data input is passed where select is 1.
    std::vector<NodeId> inputs;
};

// Gate-level stochastic-computing logic. Terminals are numbered 0..N-1 in
// declaration order, independent of their node ids.
class ScNetlist {
public:
    NodeId add_terminal(std::string name = {});
    NodeId add_and(std::vector<NodeId> inputs, std::string name = {});
    NodeId add_not(NodeId input, std::string name = {});
    NodeId add_mux(NodeId first, NodeId second, NodeId select, std::string name = {});
    void add_output(NodeId node);

    // Replaces the inputs of an existing gate. Inputs may reference any
    // existing node, so this is the one way to build a cyclic netlist (the
    // file parser needs it for forward references).
    void rewire(NodeId gate, std::vector<NodeId> inputs);

    std::size_t node_count() const { return nodes_.size(); }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    std::size_t terminal_count() const { return terminals_.size(); }
    NodeId terminal_node(std::size_t terminal) const { return terminals_.at(terminal); }
    // Terminal index of a terminal node.
    std::size_t terminal_index(NodeId id) const;
    const std::vector<NodeId>& outputs() const { return outputs_; }
    std::optional<NodeId> find(const std::string& name) const;

    // Throws CyclicNetlist when the gates do not form a DAG.
    std::vector<NodeId> topological_order() const;

private:
    friend ScNetlist parse_netlist(std::istream& in);

    NodeId add_node(NodeKind kind, std::vector<NodeId> inputs, std::string name);
    void check_arity(NodeKind kind, std::size_t n) const;

    std::vector<Node> nodes_;
    std::vector<NodeId> terminals_;
    std::vector<std::size_t> terminal_of_node_;
    std::vector<NodeId> outputs_;
    std::unordered_map<std::string, NodeId> by_name_;
};

struct Literal {
    std::size_t terminal;
    bool negated = false;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// coefficient * prod(literals); each terminal appears at most once.
struct ProductTerm {
    std::vector<Literal> literals;
    std::int64_t coefficient = 1;
    friend bool operator==(const ProductTerm&, const ProductTerm&) = default;

    std::vector<std::size_t> support() const;
};

using SumOfProducts = std::vector<ProductTerm>;

// Output probability as a sum of products over independent terminal
// probabilities. Terms are combined and sorted by literal list.
SumOfProducts expand_products(const ScNetlist& net, NodeId output);

// Evaluates a sum of products for the given terminal probabilities.
double evaluate_probability(const SumOfProducts& sop, const std::vector<double>& p);

struct ConflictSet {
    std::vector<std::size_t> members;  // sorted terminal indices
    friend bool operator==(const ConflictSet&, const ConflictSet&) = default;
};

// One set per product-term support over all outputs (in output order),
// duplicates removed and subsets absorbed by supersets.
std::vector<ConflictSet> extract_conflict_sets(const ScNetlist& net);

// Removes duplicates and strict subsets, keeping first-seen order.
std::vector<ConflictSet> absorb_subsets(std::vector<ConflictSet> sets);

struct ClusterMap {
    std::vector<std::size_t> cluster_of;              // per terminal
    std::vector<std::vector<std::size_t>> members;    // per cluster, sorted

    std::size_t cluster_count() const { return members.size(); }
};

// Merges terminals of one same-input class when they never share a conflict
// set. Clusters are numbered by their smallest member.
ClusterMap cluster_terminals(std::size_t terminal_count,
                             const std::vector<ConflictSet>& conflict_sets,
                             const std::vector<std::vector<std::size_t>>& same_input_classes);

ClusterMap identity_clusters(std::size_t terminal_count);

// Conflict sets re-expressed over cluster ids.
std::vector<ConflictSet> map_conflict_sets(const std::vector<ConflictSet>& sets,
                                           const ClusterMap& clusters);

// Bitwise evaluation of every output for the given terminal streams.
std::vector<stochastic::Bitstream> evaluate_streams(
    const ScNetlist& net, const std::vector<stochastic::Bitstream>& terminal_streams);

// Plain-text netlist: "terminal <id>", "gate <id> AND <in>...",
// "gate <id> NOT <in>", "gate <id> MUX <d0> <d1> <sel>", "output <id>".
// '#' starts a comment. Forward references are allowed.
ScNetlist parse_netlist(std::istream& in);
ScNetlist load_netlist(const std::string& path);
void write_netlist(std::ostream& out, const ScNetlist& net);

}  // namespace mtjsc::logic
