#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mtjsc/bitstream.hpp"
#include "mtjsc/logic.hpp"
#include "mtjsc/sbg.hpp"

namespace mtjsc::allocator {

using logic::ConflictSet;
using sbg::SbgArraySpec;

// Requested probability per switch-matrix column (terminal or cluster).
struct InputAssignment {
    std::vector<double> probability;

    std::size_t size() const { return probability.size(); }
};

// Levels k/L, k = 1..L.
std::vector<double> uniform_levels(std::size_t count);

// Nearest level index, ties toward the lower level.
std::size_t nearest_level(const std::vector<double>& levels, double p);

// Snaps every request onto the nearest level.
InputAssignment quantize(const std::vector<double>& raw, const std::vector<double>& levels);

// Index of an exact level match (1e-9 slack); throws UnknownLevel.
std::size_t find_level(const std::vector<double>& levels, double p, std::size_t column);

// Terminals that carry identical values across every assignment of a trace.
std::vector<std::vector<std::size_t>> same_input_classes(
    const std::vector<InputAssignment>& trace);

struct SizingPolicy {
    enum class Kind { WorstCase, TraceDriven };
    Kind kind = Kind::WorstCase;
    // Assignments (already on the level grid) used by TraceDriven. An empty
    // trace falls back to WorstCase.
    std::vector<InputAssignment> trace;

    static SizingPolicy worst_case() { return {}; }
    static SizingPolicy trace_driven(std::vector<InputAssignment> trace) {
        return {Kind::TraceDriven, std::move(trace)};
    }
};

// Largest per-set demand for each level under one assignment.
std::vector<std::size_t> level_demand(const std::vector<ConflictSet>& sets,
                                      const InputAssignment& assignment,
                                      const std::vector<double>& levels);

// phi(i) >= 1 for every level; worst case uses the largest set size.
SbgArraySpec size_array(const std::vector<ConflictSet>& sets, const std::vector<double>& levels,
                        const SizingPolicy& policy);

// M x N' control matrix with exactly one active row per column, stored as
// the row index of each column.
class SwitchMatrix {
public:
    SwitchMatrix() = default;
    SwitchMatrix(std::size_t rows, std::vector<std::size_t> row_of_column)
        : rows_(rows), row_of_column_(std::move(row_of_column)) {}

    std::size_t rows() const { return rows_; }
    std::size_t columns() const { return row_of_column_.size(); }
    std::size_t row_of(std::size_t column) const { return row_of_column_.at(column); }
    const std::vector<std::size_t>& row_of_column() const { return row_of_column_; }
    bool control(std::size_t row, std::size_t column) const { return row_of(column) == row; }
    // Rows driving at least one column.
    std::size_t rows_used() const;

private:
    std::size_t rows_ = 0;
    std::vector<std::size_t> row_of_column_;
};

// Conflict sets in input order, members in ascending order; each
// member takes the first row of its level not already used inside the set.
// Members placed by an earlier set keep their row. When that greedy pass
// cannot place a level, an exact search over the level's conflict graph
// decides; CapacityExceeded is raised only if no legal placement exists.
// Columns outside every conflict set take the first row of their level.
SwitchMatrix allocate(const InputAssignment& assignment, const SbgArraySpec& spec,
                      const std::vector<ConflictSet>& sets);

// Standalone legality check; returns one message per violation.
std::vector<std::string> verify_allocation(const SwitchMatrix& matrix,
                                           const std::vector<ConflictSet>& sets,
                                           const InputAssignment& assignment,
                                           const SbgArraySpec& spec);

// Column j receives the stream of the row that drives it.
std::vector<stochastic::Bitstream> route(const SwitchMatrix& matrix,
                                         const std::vector<stochastic::Bitstream>& row_streams);

struct CostMetrics {
    double k_energy;  // M / N
    double k_cmos;    // (T*M + M*N') / (T*N)
};

CostMetrics cost_metrics(std::uint64_t transistors_per_sbg, std::uint64_t n,
                         std::uint64_t m, std::uint64_t n_prime);

}  // namespace mtjsc::allocator
