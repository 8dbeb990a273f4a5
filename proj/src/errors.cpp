#include "mtjsc/errors.hpp"

#include <sstream>

namespace mtjsc {

namespace {

std::string fmt_unreachable(double target, double lo, double hi) {
    std::ostringstream os;
    os << "target probability " << target << " outside achievable range [" << lo
       << ", " << hi << "]";
    return os.str();
}

}  // namespace

TargetUnreachable::TargetUnreachable(double target, double lo, double hi)
    : Error(fmt_unreachable(target, lo, hi)), target_(target), lo_(lo), hi_(hi) {}

LengthMismatch::LengthMismatch(std::size_t a, std::size_t b)
    : Error("bitstream length mismatch: " + std::to_string(a) + " vs " +
            std::to_string(b)) {}

CyclicNetlist::CyclicNetlist(const std::string& node)
    : Error("netlist contains a cycle through node '" + node + "'") {}

CapacityExceeded::CapacityExceeded(std::size_t level, std::size_t demand,
                                   std::size_t capacity)
    : Error("SBG capacity exceeded at level " + std::to_string(level) + ": phi = " +
            std::to_string(capacity) + ", largest per-set demand = " + std::to_string(demand)),
      level_(level) {}

UnknownLevel::UnknownLevel(std::size_t column, double probability)
    : Error("column " + std::to_string(column) + " requests probability " +
            std::to_string(probability) + " which is not an array level") {}

}  // namespace mtjsc
