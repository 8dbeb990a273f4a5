#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "mtjsc/device.hpp"
#include "mtjsc/fusion.hpp"
#include "mtjsc/sbg.hpp"

namespace mtjsc::experiments {

// p = 0.1, 0.2, ..., 0.9
std::vector<double> probability_sweep();

// Probability pairs used for the cross-correlation measurement.
std::vector<std::pair<double, double>> cross_pairs();

struct AccuracyRow {
    std::size_t n = 0;
    double p = 0.0;
    double mean_abs_error = 0.0;
    double max_abs_error = 0.0;
};

struct AccuracyResult {
    std::vector<AccuracyRow> rows;  // length-major, then p

    // Mean over the p-sweep of the per-p mean error, per length.
    double mean_error(std::size_t n) const;
    double max_error(std::size_t n) const;
};

// Density error |k/n - p| of fresh generators (one device per repeat, so
// process variation, when enabled, is resampled every repeat).
AccuracyResult accuracy_sweep(const device::MtjParams& params, const sbg::SbgOptions& options,
                              const std::vector<double>& probabilities,
                              const std::vector<std::size_t>& lengths, std::size_t repeats,
                              std::uint64_t seed);

struct SccRow {
    std::size_t n = 0;
    double p_x = 0.0;
    double p_y = 0.0;
    bool self = true;
    double mean_abs_scc = 0.0;
};

struct SccResult {
    std::vector<SccRow> rows;

    double mean_self(std::size_t n) const;
    double mean_cross(std::size_t n) const;
};

// Self: two generators at the same p. Cross: generators at the two
// probabilities of each pair. Every repeat uses fresh devices.
SccResult scc_sweep(const device::MtjParams& params, const sbg::SbgOptions& options,
                    const std::vector<double>& self_probabilities,
                    const std::vector<std::pair<double, double>>& pairs,
                    const std::vector<std::size_t>& lengths, std::size_t repeats,
                    std::uint64_t seed);

struct KlRow {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double kl = 0.0;
};

struct KlResult {
    std::vector<KlRow> rows;
    double mean(std::size_t n) const;
};

// KL(exact || sc estimate) for every (length, seed) combination.
KlResult kl_sweep(const fusion::FusionProblem& problem, const fusion::ScRunOptions& base,
                  const std::vector<std::size_t>& lengths, const std::vector<std::uint64_t>& seeds);

}  // namespace mtjsc::experiments
