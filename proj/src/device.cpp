#include "mtjsc/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mtjsc/errors.hpp"

namespace mtjsc::device {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Slack around the achievable range; half of the calibration tolerance so a
// clamped target still lands within 1e-4 of the request.
constexpr double kRangeSlack = 5e-5;
constexpr double kSupercriticalEps = 1e-9;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("device parameter '") + name +
                          "' must be positive, got " + std::to_string(v));
    }
}

}  // namespace

void MtjParams::validate() const {
    require_positive(alpha, "alpha");
    require_positive(gamma, "gamma");
    require_positive(polarization, "polarization");
    require_positive(hk0, "hk0");
    require_positive(t_sl, "t_sl");
    require_positive(t_ox, "t_ox");
    require_positive(length, "length");
    require_positive(width, "width");
    require_positive(tmr, "tmr");
    require_positive(ra, "ra");
    require_positive(tau0_ns, "tau0");
    require_positive(delta, "delta");
    require_positive(p2ap.vc0, "vc0_p2ap");
    require_positive(p2ap.c_ns, "c_p2ap");
    require_positive(ap2p.vc0, "vc0_ap2p");
    require_positive(ap2p.c_ns, "c_ap2p");
    require_positive(v_max, "v_max");
    if (!(sigma_rel > 0.0 && sigma_rel < 1.0)) {
        throw ConfigError("device parameter 'sigma_rel' must lie in (0, 1)");
    }
    if (v_max <= std::max(p2ap.vc0, ap2p.vc0)) {
        throw ConfigError("device parameter 'v_max' must exceed both critical voltages");
    }
}

double nominal_area_um2(const MtjParams& params) {
    return std::numbers::pi / 4.0 * params.length * params.width * 1e-6;
}

double resistance_p(const MtjParams& params, const VariationFactors& factors) {
    // R ~ (1/A) * exp(t_ox), t_ox in nm.
    const double r_nominal = params.ra / nominal_area_um2(params);
    return r_nominal * std::exp(params.t_ox * (factors.tox - 1.0)) / factors.area;
}

double resistance_ap(const MtjParams& params, const VariationFactors& factors) {
    return resistance_p(params, factors) * (1.0 + params.tmr);
}

double base_switching_time(const MtjParams& params, const PulseSpec& pulse,
                           const VariationFactors& factors) {
    if (!(pulse.voltage > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const SwitchingConstants& k = params.constants(pulse.direction);
    const double ratio = pulse.voltage / k.vc0;
    double dt;
    if (ratio > 1.0) {
        dt = k.c_ns / (ratio - 1.0);
    } else {
        dt = params.tau0_ns * std::exp(params.delta * (1.0 - ratio));
    }
    // J_nom / J_var with J = V / (R * A).
    const double density_scale = std::exp(params.t_ox * (factors.tox - 1.0));
    return dt * density_scale;
}

double switch_probability(const MtjParams& params, const PulseSpec& pulse,
                          const VariationFactors& factors) {
    if (!(pulse.duration > 0.0) || !(pulse.voltage > 0.0)) {
        return 0.0;
    }
    const double dt = base_switching_time(params, pulse, factors);
    if (!std::isfinite(dt)) {
        return normal_cdf(-1.0 / params.sigma_rel);
    }
    const double sigma = params.sigma_rel * dt;
    return normal_cdf((pulse.duration - dt) / sigma);
}

ProbabilityRange achievable_range(const MtjParams& params, double duration,
                                  Direction dir) {
    const double v_lo = params.constants(dir).vc0 * (1.0 + kSupercriticalEps);
    return {switch_probability(params, {v_lo, duration, dir}),
            switch_probability(params, {params.v_max, duration, dir})};
}

double calibrate_voltage(const MtjParams& params, double target_p, double duration,
                         Direction dir) {
    const ProbabilityRange range = achievable_range(params, duration, dir);
    if (!(target_p >= range.lo - kRangeSlack && target_p <= range.hi + kRangeSlack)) {
        throw TargetUnreachable(target_p, range.lo, range.hi);
    }
    const double target = std::clamp(target_p, range.lo + kRangeSlack,
                                     std::max(range.lo + kRangeSlack, range.hi - kRangeSlack));
    double lo = params.constants(dir).vc0 * (1.0 + kSupercriticalEps);
    double hi = params.v_max;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (switch_probability(params, {mid, duration, dir}) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

VariationFactors sample_process_variation(const VariationSpec& spec,
                                          std::uint64_t master_seed,
                                          std::uint64_t instance_id) {
    if (!spec.enabled) {
        return {};
    }
    Engine rng = make_engine(master_seed, instance_id, StreamSalt::Variation);
    std::normal_distribution<double> area(1.0, spec.sigma_area);
    std::normal_distribution<double> tox(1.0, spec.sigma_tox);
    VariationFactors f;
    do {
        f.area = area(rng);
    } while (f.area <= 0.0);
    do {
        f.tox = tox(rng);
    } while (f.tox <= 0.0);
    return f;
}

MtjInstance::MtjInstance(const MtjParams& params, std::uint64_t master_seed,
                         std::uint64_t instance_id, VariationFactors factors)
    : params_(params),
      factors_(factors),
      id_(instance_id),
      r_p_(resistance_p(params, factors)),
      r_ap_(resistance_ap(params, factors)),
      rng_(make_engine(master_seed, instance_id, StreamSalt::Switching)) {}

bool MtjInstance::apply_write(const PulseSpec& pulse) {
    const MtjState from = pulse.direction == Direction::P2AP ? MtjState::P : MtjState::AP;
    if (state_ != from || !(pulse.duration > 0.0) || !(pulse.voltage > 0.0)) {
        return false;
    }
    const double dt = base_switching_time(params_, pulse, factors_);
    const double t_sw = std::max(0.0, dt + params_.sigma_rel * dt * std_normal_(rng_));
    if (t_sw <= pulse.duration) {
        state_ = from == MtjState::P ? MtjState::AP : MtjState::P;
        return true;
    }
    return false;
}

double MtjInstance::pulse_energy(const PulseSpec& pulse) const {
    return pulse.voltage * pulse.voltage * pulse.duration / resistance();
}

}  // namespace mtjsc::device
