#pragma once

// Random netlists for property tests.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "mtjsc/logic.hpp"

namespace testgen {

using mtjsc::logic::NodeId;
using mtjsc::logic::ScNetlist;

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline NodeId take(std::mt19937_64& rng, std::vector<NodeId>& pool) {
    const std::size_t i = pick(rng, pool.size());
    const NodeId id = pool[i];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    return id;
}

// Every node feeds at most one gate, so the net is a forest of trees.
inline ScNetlist random_tree(std::mt19937_64& rng, std::size_t terminals, bool with_not = true,
                             bool with_mux = true) {
    ScNetlist net;
    std::vector<NodeId> pool;
    for (std::size_t t = 0; t < terminals; ++t) pool.push_back(net.add_terminal());
    const std::size_t outputs = 1 + pick(rng, std::min<std::size_t>(4, terminals));
    while (pool.size() > outputs) {
        const std::size_t r = pick(rng, 10);
        if (with_mux && r == 0 && pool.size() >= 3) {
            const NodeId a = take(rng, pool);
            const NodeId b = take(rng, pool);
            const NodeId s = take(rng, pool);
            pool.push_back(net.add_mux(a, b, s));
        } else if (with_not && r == 1) {
            pool.push_back(net.add_not(take(rng, pool)));
        } else {
            const std::size_t k = 2 + pick(rng, std::min<std::size_t>(3, pool.size() - 1));
            std::vector<NodeId> in;
            for (std::size_t i = 0; i < k && !pool.empty(); ++i) in.push_back(take(rng, pool));
            pool.push_back(net.add_and(in));
        }
    }
    for (NodeId id : pool) net.add_output(id);
    return net;
}

// Gates draw inputs from any earlier node, so fan-out and reconvergence occur.
inline ScNetlist random_dag(std::mt19937_64& rng, std::size_t terminals, std::size_t gates) {
    ScNetlist net;
    std::vector<NodeId> nodes;
    for (std::size_t t = 0; t < terminals; ++t) nodes.push_back(net.add_terminal());
    for (std::size_t g = 0; g < gates; ++g) {
        const std::size_t r = pick(rng, 6);
        auto any = [&] { return nodes[pick(rng, nodes.size())]; };
        if (r == 0) {
            nodes.push_back(net.add_not(any()));
        } else if (r == 1 && nodes.size() >= 3) {
            nodes.push_back(net.add_mux(any(), any(), any()));
        } else {
            std::vector<NodeId> in{any(), any()};
            if (pick(rng, 3) == 0) in.push_back(any());
            nodes.push_back(net.add_and(in));
        }
    }
    const std::size_t outputs = 1 + pick(rng, 3);
    for (std::size_t i = 0; i < outputs; ++i) {
        net.add_output(nodes[nodes.size() - 1 - pick(rng, std::min<std::size_t>(gates, 4))]);
    }
    return net;
}

// Exact output probability by enumerating all 2^N terminal valuations.
inline double brute_force_probability(const ScNetlist& net, NodeId output,
                                      const std::vector<double>& p) {
    const std::size_t n = net.terminal_count();
    double total = 0.0;
    std::vector<char> v(net.node_count());
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double w = 1.0;
        for (std::size_t t = 0; t < n; ++t) w *= (mask >> t & 1) ? p[t] : 1.0 - p[t];
        for (NodeId id = 0; id < net.node_count(); ++id) {
            const auto& node = net.node(id);
            switch (node.kind) {
                case mtjsc::logic::NodeKind::Terminal:
                    v[id] = mask >> net.terminal_index(id) & 1;
                    break;
                case mtjsc::logic::NodeKind::And:
                    v[id] = 1;
                    for (NodeId in : node.inputs) v[id] &= v[in];
                    break;
                case mtjsc::logic::NodeKind::Not:
                    v[id] = !v[node.inputs[0]];
                    break;
                case mtjsc::logic::NodeKind::Mux:
                    v[id] = v[node.inputs[2]] ? v[node.inputs[0]] : v[node.inputs[1]];
                    break;
            }
        }
        if (v[output]) total += w;
    }
    return total;
}

// Reference net: R1 = MUX(T1 T2, T3 T4, T5), R2 = T6 T7 T8 T9.
inline ScNetlist reference_net() {
    ScNetlist net;
    std::vector<NodeId> t;
    for (int i = 1; i <= 9; ++i) t.push_back(net.add_terminal("T" + std::to_string(i)));
    const NodeId a1 = net.add_and({t[0], t[1]}, "A1");
    const NodeId a2 = net.add_and({t[2], t[3]}, "A2");
    net.add_output(net.add_mux(a1, a2, t[4], "R1"));
    net.add_output(net.add_and({t[5], t[6], t[7], t[8]}, "R2"));
    return net;
}

inline std::vector<double> reference_assignment() {
    return {0.1, 0.2, 0.1, 0.3, 0.1, 0.4, 0.5, 0.3, 0.3};
}

}  // namespace testgen
