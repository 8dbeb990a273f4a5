#pragma once

#include <cstdint>
#include <random>

#include "mtjsc/rng.hpp"

namespace mtjsc::device {

enum class Direction { P2AP, AP2P };
enum class MtjState { P, AP };

// Calibration of one write direction. Above the critical voltage the
// precessional regime gives dt = c_ns / (V/vc0 - 1); at or below it the
// thermally activated regime gives dt = tau0 * exp(delta * (1 - V/vc0)).
struct SwitchingConstants {
    double vc0;   // V
    double c_ns;  // ns
};

// Physical parameters of the junction plus the calibration constants of the
// stochastic switching model. Dimensions in nm, RA in Ohm*um^2.
struct MtjParams {
    double alpha = 0.027;
    double gamma = 1.76e7;  // Hz/Oe
    double polarization = 0.52;
    double hk0 = 1433.0;  // Oe
    double t_sl = 1.3;
    double t_ox = 0.85;
    double length = 45.0;
    double width = 45.0;
    double tmr = 1.5;
    double ra = 5.0;

    double tau0_ns = 1.0e4;
    double delta = 40.0;
    double sigma_rel = 0.2;
    SwitchingConstants p2ap{0.9, 1.596};
    SwitchingConstants ap2p{1.0, 1.2};

    // Voltage search interval used by calibrate_voltage.
    double v_max = 3.0;

    const SwitchingConstants& constants(Direction dir) const {
        return dir == Direction::P2AP ? p2ap : ap2p;
    }

    // Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct PulseSpec {
    double voltage = 0.0;   // V
    double duration = 0.0;  // ns
    Direction direction = Direction::P2AP;
};

// Per-device multipliers on junction area and oxide thickness.
struct VariationFactors {
    double area = 1.0;
    double tox = 1.0;
};

struct VariationSpec {
    bool enabled = false;
    double sigma_area = 0.05;
    double sigma_tox = 0.02;
};

// Junction area in um^2 (elliptical pillar).
double nominal_area_um2(const MtjParams& params);
double resistance_p(const MtjParams& params, const VariationFactors& factors = {});
double resistance_ap(const MtjParams& params, const VariationFactors& factors = {});

// Mean switching time in ns. Variation rescales dt by the ratio of nominal to
// varied current density; junction area cancels because the critical current
// scales with it, so only oxide thickness moves dt.
double base_switching_time(const MtjParams& params, const PulseSpec& pulse,
                           const VariationFactors& factors = {});

// P(t_sw <= duration) with t_sw ~ Normal(dt, sigma_rel*dt). Pulses with zero
// width or zero voltage never switch.
double switch_probability(const MtjParams& params, const PulseSpec& pulse,
                          const VariationFactors& factors = {});

struct ProbabilityRange {
    double lo;
    double hi;
};

// Probabilities reachable by calibrate_voltage for a given width/direction.
ProbabilityRange achievable_range(const MtjParams& params, double duration,
                                  Direction dir);

// Bisection inverse of switch_probability in voltage (nominal device).
// Throws TargetUnreachable outside achievable_range (with 1e-4 slack).
double calibrate_voltage(const MtjParams& params, double target_p, double duration,
                         Direction dir);

VariationFactors sample_process_variation(const VariationSpec& spec,
                                          std::uint64_t master_seed,
                                          std::uint64_t instance_id);

// One junction with its own switching stream. Single owner; copying yields an
// independent device that replays the same future draws.
class MtjInstance {
public:
    MtjInstance(const MtjParams& params, std::uint64_t master_seed,
                std::uint64_t instance_id, VariationFactors factors = {});

    const MtjParams& params() const { return params_; }
    const VariationFactors& factors() const { return factors_; }
    std::uint64_t id() const { return id_; }
    MtjState state() const { return state_; }
    void set_state(MtjState s) { state_ = s; }

    double r_p() const { return r_p_; }
    double r_ap() const { return r_ap_; }
    double resistance() const { return state_ == MtjState::P ? r_p_ : r_ap_; }

    // Draws a switching time and flips the state when it falls inside the
    // pulse. Writing toward the current state is a no-op.
    bool apply_write(const PulseSpec& pulse);

    // 1 for AP, 0 for P. Ideal, non-destructive.
    int read_state() const { return state_ == MtjState::AP ? 1 : 0; }

    // V^2 * t / R(current state), in nJ.
    double pulse_energy(const PulseSpec& pulse) const;

private:
    MtjParams params_;
    VariationFactors factors_;
    std::uint64_t id_;
    MtjState state_ = MtjState::P;
    double r_p_;
    double r_ap_;
    Engine rng_;
    std::normal_distribution<double> std_normal_{0.0, 1.0};
};

}  // namespace mtjsc::device
