#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mtjsc/allocator.hpp"
#include "mtjsc/device.hpp"
#include "mtjsc/logic.hpp"
#include "mtjsc/sbg.hpp"

namespace mtjsc::fusion {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// One sensor's distance (plane units) and bearing (degrees, [0, 360)).
struct Reading {
    double distance = 0.0;
    double bearing = 0.0;
};

inline constexpr double kBearingSigmaDeg = 14.0626;

struct FusionProblem {
    std::size_t width = 64;
    std::size_t height = 64;
    double plane_size = 64.0;
    std::vector<Point> sensors{{0.0, 0.0}, {0.0, 32.0}, {32.0, 0.0}};
    std::vector<Reading> readings;
    double sigma_bearing = kBearingSigmaDeg;

    std::size_t cell_count() const { return width * height; }
    std::size_t channel_count() const { return 2 * sensors.size(); }
    std::size_t cell_index(std::size_t x, std::size_t y) const { return y * width + x; }
    // Plane coordinates of cell (x, y); cell (0, 0) sits on the origin.
    Point cell_position(std::size_t x, std::size_t y) const;
    void validate() const;
};

// Standard deviation of the distance channel for a measured distance.
inline double distance_sigma(double measured) { return 5.0 + measured / 10.0; }

// Direction from `from` to `to`, degrees in [0, 360).
double bearing_deg(Point from, Point to);

// Minimal angular difference, in [0, 180].
double bearing_residual(double a_deg, double b_deg);

// Six (2 per sensor) Gaussian densities at one cell, ordered
// d_1, b_1, d_2, b_2, d_3, b_3.
std::vector<double> likelihoods(const FusionProblem& problem, std::size_t x, std::size_t y);

// Channel-major likelihoods: values[channel][cell].
struct LikelihoodField {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::vector<double>> values;
};

LikelihoodField likelihood_field(const FusionProblem& problem);

class PosteriorGrid {
public:
    PosteriorGrid() = default;
    PosteriorGrid(std::size_t width, std::size_t height, std::vector<double> weights);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    const std::vector<double>& weights() const { return weights_; }
    double at(std::size_t x, std::size_t y) const { return weights_.at(y * width_ + x); }
    bool normalized() const { return normalized_; }

    double sum() const;
    // Divides by the sum; an all-zero grid becomes uniform.
    void normalize();
    // Largest weight; ties go to the lowest (x, y) in lexicographic order.
    std::pair<std::size_t, std::size_t> argmax() const;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> weights_;
    bool normalized_ = false;
};

// Normalised product of the channels (uniform prior).
PosteriorGrid posterior_from_field(const LikelihoodField& field);
PosteriorGrid exact_posterior(const FusionProblem& problem);

// Readings a perfect sensor would report for `target`, plus optional
// Gaussian noise on each channel.
std::vector<Reading> synthesize_readings(const std::vector<Point>& sensors, Point target,
                                         double noise_distance, double noise_bearing,
                                         std::uint64_t seed);

struct Quantizer {
    std::size_t levels = 64;
    std::vector<double> grid() const { return allocator::uniform_levels(levels); }
};

// Cell-parallel AND network: W*H chains of 5 two-input ANDs over the six
// likelihood terminals of each cell (terminal 6*cell + channel).
struct ScNetwork {
    logic::ScNetlist netlist;
    allocator::InputAssignment assignment;  // quantised, per terminal
    std::vector<double> levels;
    std::vector<double> channel_scale;       // divisor applied per channel
};

// Each channel is divided by its grid maximum before quantisation so the
// strongest cell of every channel maps onto the top level.
ScNetwork build_sc_network(const FusionProblem& problem, const Quantizer& quantizer);
ScNetwork build_sc_network(const LikelihoodField& field, const Quantizer& quantizer);

enum class StreamSource {
    Sbg,    // self-control/simple MTJ generators
    Ideal,  // Bernoulli streams straight from a PRNG
};

struct ScRunOptions {
    std::size_t bitstream_length = 128;
    std::uint64_t seed = 1;
    Quantizer quantizer{};
    device::MtjParams params{};
    sbg::SbgOptions sbg{};
    StreamSource source = StreamSource::Sbg;
    // Empty trace: size the array from the run's own assignment.
    allocator::SizingPolicy sizing = allocator::SizingPolicy::trace_driven({});
    // Trace defining "always the same input" for terminal clustering; empty
    // means the run's own assignment.
    std::vector<allocator::InputAssignment> cluster_trace;
};

struct ScRunResult {
    PosteriorGrid estimate;
    PosteriorGrid quantized_exact;
    sbg::SbgArraySpec array;
    allocator::SwitchMatrix matrix;  // M x N'
    logic::ClusterMap clusters;
    std::vector<std::size_t> counts;  // ones per cell
    std::size_t terminals = 0;        // N
    std::size_t bitstream_length = 0;
    double sbg_energy = 0.0;          // nJ, whole array
    sbg::OpCounters ops{};
};

ScRunResult sc_posterior(const FusionProblem& problem, const ScRunOptions& options);
ScRunResult sc_posterior(const LikelihoodField& field, const ScRunOptions& options);

// Floor applied to empty estimate cells.
inline double kl_floor(std::size_t bitstream_length, std::size_t cells) {
    return 1.0 / (10.0 * static_cast<double>(bitstream_length) * static_cast<double>(cells));
}

// sum exact * ln(exact / est), est cells equal to zero replaced by epsilon.
double kl_divergence(const PosteriorGrid& exact, const PosteriorGrid& est, double epsilon);

// "x,y,weight" rows, 6 significant digits.
void write_posterior_csv(std::ostream& out, const PosteriorGrid& grid);
// Binary 8-bit PGM, max-normalised, row y = 0 first.
void write_pgm(std::ostream& out, const PosteriorGrid& grid);

}  // namespace mtjsc::fusion
