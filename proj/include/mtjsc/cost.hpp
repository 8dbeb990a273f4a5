#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "mtjsc/allocator.hpp"

namespace mtjsc::cost {

struct CostProfile {
    std::string label;
    double e_cyc = 0.0;      // nJ per cycle
    double t_cyc = 0.0;      // ns per cycle
    std::uint64_t n_cyc = 0;
    double n_cmos = 0.0;     // transistors, x10^3

    // Throws ConfigError unless e_cyc, t_cyc and n_cmos are positive.
    void validate() const;
};

struct Totals {
    double energy_uj = 0.0;
    double time_us = 0.0;
};

Totals totals(const CostProfile& p);

// Energy ratio E_tot(a) / E_tot(b).
double compare(const CostProfile& a, const CostProfile& b);

// Baselines of the comparison table. These summarise external platforms and
// are not simulated.
inline const CostProfile kFpgaBaseline{"fpga", 10.3, 10.0, 256, 0.0};
inline const CostProfile kMtjBaseline{"mtj-sc", 4.58, 40.0, 256, 830.0};
inline const CostProfile kSharedSbgReported{"shared-sbg", 0.78, 10.0, 128, 1200.0};

// Transistors per SBG used for the reference design.
inline constexpr std::uint64_t kTransistorsPerSbg = 92;

// Inputs to simulated_profile, gathered from one fusion run.
struct RunAccounting {
    double sbg_energy = 0.0;  // nJ over the whole run
    std::size_t bitstream_length = 0;
    std::size_t m = 0;        // SBG rows
    std::size_t n = 0;        // terminals
    std::size_t n_prime = 0;  // switch-matrix columns
    double t_cyc = 10.0;      // ns
    std::uint64_t transistors_per_sbg = kTransistorsPerSbg;
};

// e_cyc = energy / n, n_cyc = n; n_cmos counts the SBG array plus the
// switch matrix (T*M + M*N').
CostProfile simulated_profile(const RunAccounting& run, std::string label = "simulated");

}  // namespace mtjsc::cost
