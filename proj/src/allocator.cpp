#include "mtjsc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "mtjsc/errors.hpp"

namespace mtjsc::allocator {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
constexpr double kLevelSlack = 1e-9;
// Search nodes per connected component before giving up on the exact pass.
constexpr std::size_t kSearchBudget = 2'000'000;

struct LevelGraph {
    std::vector<std::size_t> vertices;            // columns
    std::vector<std::vector<std::size_t>> adj;    // indices into vertices
};

LevelGraph level_graph(const std::vector<ConflictSet>& sets,
                       const std::vector<std::size_t>& level_of_col, std::size_t level) {
    LevelGraph g;
    std::map<std::size_t, std::size_t> index;
    std::vector<std::set<std::size_t>> adj;
    for (const ConflictSet& s : sets) {
        std::vector<std::size_t> here;
        for (std::size_t col : s.members) {
            if (level_of_col[col] != level) continue;
            auto [it, fresh] = index.emplace(col, g.vertices.size());
            if (fresh) {
                g.vertices.push_back(col);
                adj.emplace_back();
            }
            here.push_back(it->second);
        }
        for (std::size_t a : here) {
            for (std::size_t b : here) {
                if (a != b) adj[a].insert(b);
            }
        }
    }
    for (auto& nb : adj) g.adj.emplace_back(nb.begin(), nb.end());
    return g;
}

// DSATUR-ordered backtracking colouring of one connected component.
class ExactColoring {
public:
    ExactColoring(const LevelGraph& g, std::size_t colors)
        : g_(g), k_(colors), color_(g.vertices.size(), kUnassigned) {}

    bool solve(const std::vector<std::size_t>& component) {
        component_ = component;
        budget_ = kSearchBudget;
        return search(0, 0);
    }
    std::size_t color(std::size_t v) const { return color_[v]; }

private:
    bool search(std::size_t placed, std::size_t max_used) {
        if (placed == component_.size()) return true;
        if (budget_ == 0) return false;
        --budget_;

        std::size_t pick = kUnassigned, best_sat = 0, best_deg = 0;
        for (std::size_t v : component_) {
            if (color_[v] != kUnassigned) continue;
            std::set<std::size_t> seen;
            for (std::size_t u : g_.adj[v]) {
                if (color_[u] != kUnassigned) seen.insert(color_[u]);
            }
            const std::size_t sat = seen.size(), deg = g_.adj[v].size();
            if (pick == kUnassigned || sat > best_sat || (sat == best_sat && deg > best_deg)) {
                pick = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        // Colours above max_used are interchangeable; try only the first.
        const std::size_t limit = std::min(k_, max_used + 1);
        for (std::size_t c = 0; c < limit; ++c) {
            const bool clash = std::any_of(g_.adj[pick].begin(), g_.adj[pick].end(),
                                           [&](std::size_t u) { return color_[u] == c; });
            if (clash) continue;
            color_[pick] = c;
            if (search(placed + 1, std::max(max_used, c + 1))) return true;
            color_[pick] = kUnassigned;
        }
        return false;
    }

    const LevelGraph& g_;
    std::size_t k_;
    std::vector<std::size_t> color_;
    std::vector<std::size_t> component_;
    std::size_t budget_ = 0;
};

std::size_t max_set_demand(const std::vector<ConflictSet>& sets,
                           const std::vector<std::size_t>& level_of_col, std::size_t level) {
    std::size_t demand = 0;
    for (const ConflictSet& s : sets) {
        const auto c = static_cast<std::size_t>(std::count_if(
            s.members.begin(), s.members.end(),
            [&](std::size_t col) { return level_of_col[col] == level; }));
        demand = std::max(demand, c);
    }
    return demand;
}

void place_level_exactly(const std::vector<ConflictSet>& sets,
                         const std::vector<std::size_t>& level_of_col, std::size_t level,
                         std::size_t phi, std::size_t offset, std::vector<std::size_t>& row) {
    const LevelGraph g = level_graph(sets, level_of_col, level);
    ExactColoring solver(g, phi);
    std::vector<char> visited(g.vertices.size(), 0);
    for (std::size_t start = 0; start < g.vertices.size(); ++start) {
        if (visited[start]) continue;
        std::vector<std::size_t> component{start};
        visited[start] = 1;
        for (std::size_t i = 0; i < component.size(); ++i) {
            for (std::size_t u : g.adj[component[i]]) {
                if (!visited[u]) {
                    visited[u] = 1;
                    component.push_back(u);
                }
            }
        }
        if (!solver.solve(component)) {
            throw CapacityExceeded(level, max_set_demand(sets, level_of_col, level), phi);
        }
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        row[g.vertices[v]] = offset + solver.color(v);
    }
}

}  // namespace

std::vector<double> uniform_levels(std::size_t count) {
    std::vector<double> levels(count);
    for (std::size_t k = 0; k < count; ++k) {
        levels[k] = static_cast<double>(k + 1) / static_cast<double>(count);
    }
    return levels;
}

std::size_t nearest_level(const std::vector<double>& levels, double p) {
    if (levels.empty()) throw std::invalid_argument("empty level grid");
    auto it = std::lower_bound(levels.begin(), levels.end(), p);
    if (it == levels.begin()) return 0;
    if (it == levels.end()) return levels.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - levels.begin());
    const std::size_t lo = hi - 1;
    // Ties go to the lower level.
    return (p - levels[lo] <= levels[hi] - p) ? lo : hi;
}

InputAssignment quantize(const std::vector<double>& raw, const std::vector<double>& levels) {
    InputAssignment a;
    a.probability.reserve(raw.size());
    for (double p : raw) a.probability.push_back(levels[nearest_level(levels, p)]);
    return a;
}

std::size_t find_level(const std::vector<double>& levels, double p, std::size_t column) {
    if (!levels.empty()) {
        const std::size_t i = nearest_level(levels, p);
        if (std::abs(levels[i] - p) <= kLevelSlack) return i;
    }
    throw UnknownLevel(column, p);
}

std::vector<std::vector<std::size_t>> same_input_classes(
    const std::vector<InputAssignment>& trace) {
    if (trace.empty()) return {};
    const std::size_t n = trace.front().size();
    std::map<std::vector<double>, std::size_t> key_to_class;
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<double> key;
        key.reserve(trace.size());
        for (const InputAssignment& a : trace) key.push_back(a.probability.at(t));
        auto [it, fresh] = key_to_class.emplace(std::move(key), classes.size());
        if (fresh) classes.emplace_back();
        classes[it->second].push_back(t);
    }
    return classes;
}

std::vector<std::size_t> level_demand(const std::vector<ConflictSet>& sets,
                                      const InputAssignment& assignment,
                                      const std::vector<double>& levels) {
    std::vector<std::size_t> level_of_col(assignment.size());
    for (std::size_t j = 0; j < assignment.size(); ++j) {
        level_of_col[j] = find_level(levels, assignment.probability[j], j);
    }
    std::vector<std::size_t> demand(levels.size(), 0);
    std::vector<std::size_t> count(levels.size(), 0);
    for (const ConflictSet& s : sets) {
        for (std::size_t col : s.members) ++count[level_of_col.at(col)];
        for (std::size_t col : s.members) {
            const std::size_t l = level_of_col[col];
            demand[l] = std::max(demand[l], count[l]);
        }
        for (std::size_t col : s.members) count[level_of_col[col]] = 0;
    }
    return demand;
}

SbgArraySpec size_array(const std::vector<ConflictSet>& sets, const std::vector<double>& levels,
                        const SizingPolicy& policy) {
    if (levels.empty()) throw std::invalid_argument("size_array needs at least one level");
    SbgArraySpec spec{levels, std::vector<std::size_t>(levels.size(), 1)};
    if (policy.kind == SizingPolicy::Kind::WorstCase || policy.trace.empty()) {
        std::size_t widest = 1;
        for (const ConflictSet& s : sets) widest = std::max(widest, s.members.size());
        std::fill(spec.multiplicity.begin(), spec.multiplicity.end(), widest);
    } else {
        for (const InputAssignment& a : policy.trace) {
            const auto demand = level_demand(sets, a, levels);
            for (std::size_t i = 0; i < levels.size(); ++i) {
                spec.multiplicity[i] = std::max(spec.multiplicity[i], demand[i]);
            }
        }
    }
    spec.validate();
    return spec;
}

std::size_t SwitchMatrix::rows_used() const {
    std::vector<char> used(rows_, 0);
    for (std::size_t r : row_of_column_) used.at(r) = 1;
    return static_cast<std::size_t>(std::count(used.begin(), used.end(), 1));
}

SwitchMatrix allocate(const InputAssignment& assignment, const SbgArraySpec& spec,
                      const std::vector<ConflictSet>& sets) {
    spec.validate();
    const std::size_t n = assignment.size();
    std::vector<std::size_t> level_of_col(n);
    for (std::size_t j = 0; j < n; ++j) {
        level_of_col[j] = find_level(spec.levels, assignment.probability[j], j);
    }
    const std::vector<std::size_t> offset = spec.level_offsets();

    std::vector<std::size_t> row(n, kUnassigned);
    std::set<std::size_t> failed;
    for (const ConflictSet& s : sets) {
        // Rows already fixed by earlier sets are pinned for this set.
        std::map<std::size_t, std::set<std::size_t>> used;
        for (std::size_t col : s.members) {
            if (col >= n) throw std::invalid_argument("conflict set member outside assignment");
            if (row[col] == kUnassigned) continue;
            if (!used[level_of_col[col]].insert(row[col]).second) {
                failed.insert(level_of_col[col]);
            }
        }
        for (std::size_t col : s.members) {
            if (row[col] != kUnassigned) continue;
            const std::size_t l = level_of_col[col];
            std::set<std::size_t>& taken = used[l];
            std::size_t r = offset[l];
            while (taken.count(r)) ++r;
            if (r >= offset[l] + spec.multiplicity[l]) {
                failed.insert(l);
                continue;
            }
            row[col] = r;
            taken.insert(r);
        }
    }
    for (std::size_t l : failed) {
        place_level_exactly(sets, level_of_col, l, spec.multiplicity[l], offset[l], row);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (row[j] == kUnassigned) row[j] = offset[level_of_col[j]];
    }
    return SwitchMatrix(spec.total(), std::move(row));
}

std::vector<std::string> verify_allocation(const SwitchMatrix& matrix,
                                           const std::vector<ConflictSet>& sets,
                                           const InputAssignment& assignment,
                                           const SbgArraySpec& spec) {
    std::vector<std::string> problems;
    if (matrix.rows() != spec.total()) {
        problems.push_back("matrix has " + std::to_string(matrix.rows()) + " rows, array has " +
                           std::to_string(spec.total()) + " units");
    }
    if (matrix.columns() != assignment.size()) {
        problems.push_back("matrix has " + std::to_string(matrix.columns()) +
                           " columns, assignment has " + std::to_string(assignment.size()));
        return problems;
    }
    const std::vector<std::size_t> row_level = spec.row_levels();
    for (std::size_t j = 0; j < matrix.columns(); ++j) {
        const std::size_t r = matrix.row_of(j);
        if (r >= row_level.size()) {
            problems.push_back("column " + std::to_string(j) + " has no valid row");
            continue;
        }
        try {
            const std::size_t l = find_level(spec.levels, assignment.probability[j], j);
            if (row_level[r] != l) {
                problems.push_back("column " + std::to_string(j) + " routed to a row of level " +
                                   std::to_string(row_level[r]) + ", requested level " +
                                   std::to_string(l));
            }
        } catch (const UnknownLevel& e) {
            problems.emplace_back(e.what());
        }
    }
    for (std::size_t s = 0; s < sets.size(); ++s) {
        std::map<std::size_t, std::size_t> owner;
        for (std::size_t col : sets[s].members) {
            if (col >= matrix.columns()) {
                problems.push_back("conflict set " + std::to_string(s) + " names column " +
                                   std::to_string(col) + " outside the matrix");
                continue;
            }
            auto [it, fresh] = owner.emplace(matrix.row_of(col), col);
            if (!fresh) {
                problems.push_back("conflict set " + std::to_string(s) + ": columns " +
                                   std::to_string(it->second) + " and " + std::to_string(col) +
                                   " share row " + std::to_string(it->first));
            }
        }
    }
    return problems;
}

std::vector<stochastic::Bitstream> route(const SwitchMatrix& matrix,
                                         const std::vector<stochastic::Bitstream>& row_streams) {
    if (row_streams.size() != matrix.rows()) {
        throw std::invalid_argument("expected one stream per switch-matrix row");
    }
    for (const auto& s : row_streams) {
        if (s.size() != row_streams.front().size()) {
            throw LengthMismatch(row_streams.front().size(), s.size());
        }
    }
    std::vector<stochastic::Bitstream> out;
    out.reserve(matrix.columns());
    for (std::size_t j = 0; j < matrix.columns(); ++j) out.push_back(row_streams[matrix.row_of(j)]);
    return out;
}

CostMetrics cost_metrics(std::uint64_t t, std::uint64_t n, std::uint64_t m,
                         std::uint64_t n_prime) {
    if (t == 0 || n == 0 || m == 0) {
        throw std::invalid_argument("cost_metrics needs positive T, N and M");
    }
    const auto td = static_cast<double>(t), nd = static_cast<double>(n),
               md = static_cast<double>(m), npd = static_cast<double>(n_prime);
    return {md / nd, (td * md + md * npd) / (td * nd)};
}

}  // namespace mtjsc::allocator
