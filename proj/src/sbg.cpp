#include "mtjsc/sbg.hpp"

#include <numeric>
#include <stdexcept>

#include "mtjsc/errors.hpp"

namespace mtjsc::sbg {

using device::Direction;
using device::PulseSpec;
using stochastic::Bitstream;

PulseSpec calibrated_pulse(const device::MtjParams& params, double target_p,
                           double duration, Direction dir) {
    if (target_p <= 0.0) {
        return {0.0, 0.0, dir};
    }
    return {device::calibrate_voltage(params, target_p, duration, dir), duration, dir};
}

SbgUnit::SbgUnit(const device::MtjParams& params, double target_p,
                 std::uint64_t master_seed, std::uint64_t instance_id,
                 const SbgOptions& options)
    : mtj_(params, master_seed, instance_id,
           device::sample_process_variation(options.variation, master_seed, instance_id)),
      mode_(options.mode),
      target_p_(target_p),
      read_energy_(options.read_energy),
      write_p2ap_(calibrated_pulse(params, target_p, options.write_duration, Direction::P2AP)),
      write_ap2p_{0.0, 0.0, Direction::AP2P},
      reset_(options.reset_pulse) {
    if (mode_ == SbgMode::SelfControl) {
        write_ap2p_ =
            calibrated_pulse(params, target_p, options.write_duration, Direction::AP2P);
    }
}

void SbgUnit::write(const PulseSpec& pulse) {
    energy_ += mtj_.pulse_energy(pulse);
    ++counters_.writes;
    mtj_.apply_write(pulse);
}

int SbgUnit::read() {
    energy_ += read_energy_;
    ++counters_.reads;
    return mtj_.read_state();
}

Bitstream SbgUnit::generate_simple(std::size_t n) {
    if (mode_ != SbgMode::Simple) {
        throw std::invalid_argument("generate_simple called on a self-control unit");
    }
    if (n == 0) {
        throw std::invalid_argument("bitstream length must be at least 1");
    }
    Bitstream out(n);
    for (std::size_t i = 0; i < n; ++i) {
        write(reset_);
        write(write_p2ap_);
        out.set(i, read() == 1);
    }
    return out;
}

Bitstream SbgUnit::generate_self_control(std::size_t n) {
    if (mode_ != SbgMode::SelfControl) {
        throw std::invalid_argument("generate_self_control called on a simple unit");
    }
    if (n == 0) {
        throw std::invalid_argument("bitstream length must be at least 1");
    }
    // Initialisation cycle: its XOR result is discarded.
    write(reset_);
    last_state_ = read();
    Bitstream out(n);
    for (std::size_t i = 0; i < n; ++i) {
        write(*last_state_ == 1 ? write_ap2p_ : write_p2ap_);
        const int current = read();
        out.set(i, current != *last_state_);
        last_state_ = current;
    }
    return out;
}

Bitstream SbgUnit::generate(std::size_t n) {
    return mode_ == SbgMode::Simple ? generate_simple(n) : generate_self_control(n);
}

std::size_t SbgArraySpec::total() const {
    return std::accumulate(multiplicity.begin(), multiplicity.end(), std::size_t{0});
}

std::vector<std::size_t> SbgArraySpec::level_offsets() const {
    std::vector<std::size_t> offsets(levels.size(), 0);
    for (std::size_t i = 1; i < levels.size(); ++i) {
        offsets[i] = offsets[i - 1] + multiplicity[i - 1];
    }
    return offsets;
}

std::vector<std::size_t> SbgArraySpec::row_levels() const {
    std::vector<std::size_t> rows;
    rows.reserve(total());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        rows.insert(rows.end(), multiplicity[i], i);
    }
    return rows;
}

void SbgArraySpec::validate() const {
    if (levels.size() != multiplicity.size()) {
        throw ConfigError("array spec: levels and multiplicities differ in length");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0 && levels[i] <= 1.0)) {
            throw ConfigError("array spec: level " + std::to_string(i) + " outside (0, 1]");
        }
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw ConfigError("array spec: levels must be strictly increasing");
        }
        if (multiplicity[i] == 0) {
            throw ConfigError("array spec: multiplicity of level " + std::to_string(i) +
                              " must be at least 1");
        }
    }
}

std::vector<SbgUnit> build_array(const SbgArraySpec& spec, const device::MtjParams& params,
                                 std::uint64_t master_seed, const SbgOptions& options) {
    spec.validate();
    std::vector<SbgUnit> units;
    units.reserve(spec.total());
    std::uint64_t id = 0;
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        for (std::size_t k = 0; k < spec.multiplicity[i]; ++k, ++id) {
            units.emplace_back(params, spec.levels[i], master_seed, id, options);
        }
    }
    return units;
}

std::vector<Bitstream> generate_array(std::vector<SbgUnit>& units, std::size_t n) {
    std::vector<Bitstream> streams;
    streams.reserve(units.size());
    for (SbgUnit& u : units) {
        streams.push_back(u.generate(n));
    }
    return streams;
}

double total_energy(const std::vector<SbgUnit>& units) {
    double e = 0.0;
    for (const SbgUnit& u : units) {
        e += u.energy();
    }
    return e;
}

}  // namespace mtjsc::sbg
