#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mtjsc/bitstream.hpp"
#include "mtjsc/device.hpp"

namespace mtjsc::sbg {

enum class SbgMode { Simple, SelfControl };

struct SbgOptions {
    SbgMode mode = SbgMode::SelfControl;
    double write_duration = 5.4;      // ns
    double read_energy = 0.002;       // nJ per read
    device::PulseSpec reset_pulse{1.8, 7.0, device::Direction::AP2P};
    device::VariationSpec variation{};
};

struct OpCounters {
    std::uint64_t writes = 0;
    std::uint64_t reads = 0;
};

// One stochastic bitstream generator: a junction plus the write pulses that
// make its long-run ones-density equal target_p. The pulses are calibrated
// against the nominal device; process variation only affects the junction.
class SbgUnit {
public:
    SbgUnit(const device::MtjParams& params, double target_p, std::uint64_t master_seed,
            std::uint64_t instance_id, const SbgOptions& options = {});

    SbgMode mode() const { return mode_; }
    double target_p() const { return target_p_; }
    const device::MtjInstance& mtj() const { return mtj_; }
    const device::PulseSpec& write_pulse(device::Direction dir) const {
        return dir == device::Direction::P2AP ? write_p2ap_ : write_ap2p_;
    }
    const device::PulseSpec& reset_pulse() const { return reset_; }
    const OpCounters& counters() const { return counters_; }
    double energy() const { return energy_; }
    std::optional<int> last_state() const { return last_state_; }

    // reset -> write -> read per bit. Requires mode() == Simple.
    stochastic::Bitstream generate_simple(std::size_t n);
    // One initialisation cycle, then write-toward-opposite -> read per bit,
    // emitting XOR(current, last). Requires mode() == SelfControl.
    stochastic::Bitstream generate_self_control(std::size_t n);
    // Dispatches on mode().
    stochastic::Bitstream generate(std::size_t n);

private:
    void write(const device::PulseSpec& pulse);
    int read();

    device::MtjInstance mtj_;
    SbgMode mode_;
    double target_p_;
    double read_energy_;
    device::PulseSpec write_p2ap_;
    device::PulseSpec write_ap2p_;
    device::PulseSpec reset_;
    std::optional<int> last_state_;
    OpCounters counters_;
    double energy_ = 0.0;
};

// Calibrated write pulse for one direction; target 0 yields a zero pulse.
device::PulseSpec calibrated_pulse(const device::MtjParams& params, double target_p,
                                   double duration, device::Direction dir);

// Accumulated energy in nJ: V^2*t/R per pulse plus a fixed cost per read.
inline double energy_of(const SbgUnit& unit) { return unit.energy(); }

// Pre-built array: L levels p_1 < ... < p_L with phi(i) generators each.
struct SbgArraySpec {
    std::vector<double> levels;
    std::vector<std::size_t> multiplicity;

    std::size_t total() const;
    // Index of the first row of level i.
    std::vector<std::size_t> level_offsets() const;
    // Level of each row, rows grouped by level in ascending order.
    std::vector<std::size_t> row_levels() const;
    // Throws ConfigError on unsorted levels, levels outside (0, 1], phi = 0
    // or mismatched vector sizes.
    void validate() const;
};

// M units, row r uses instance id r. Units of one level share target_p but
// never a random stream.
std::vector<SbgUnit> build_array(const SbgArraySpec& spec, const device::MtjParams& params,
                                 std::uint64_t master_seed, const SbgOptions& options = {});

// Runs every unit for n cycles, returning one stream per row.
std::vector<stochastic::Bitstream> generate_array(std::vector<SbgUnit>& units, std::size_t n);

double total_energy(const std::vector<SbgUnit>& units);

}  // namespace mtjsc::sbg
