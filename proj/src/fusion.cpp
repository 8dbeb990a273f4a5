#include "mtjsc/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "mtjsc/errors.hpp"
#include "mtjsc/rng.hpp"

namespace mtjsc::fusion {

namespace {

double gaussian(double residual, double sigma) {
    const double z = residual / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double wrap_degrees(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    return w == 360.0 ? 0.0 : w;
}

}  // namespace

Point FusionProblem::cell_position(std::size_t x, std::size_t y) const {
    return {static_cast<double>(x) * plane_size / static_cast<double>(width),
            static_cast<double>(y) * plane_size / static_cast<double>(height)};
}

void FusionProblem::validate() const {
    if (width == 0 || height == 0) throw ConfigError("fusion grid must be non-empty");
    if (!(plane_size > 0.0)) throw ConfigError("plane size must be positive");
    if (sensors.empty()) throw ConfigError("at least one sensor is required");
    if (readings.size() != sensors.size()) {
        throw ConfigError("expected " + std::to_string(sensors.size()) + " readings, got " +
                          std::to_string(readings.size()));
    }
    if (!(sigma_bearing > 0.0)) throw ConfigError("bearing sigma must be positive");
    for (const Reading& r : readings) {
        if (!(r.distance >= 0.0)) throw ConfigError("distance readings must be >= 0");
    }
}

double bearing_deg(Point from, Point to) {
    const double deg = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
    return wrap_degrees(deg);
}

double bearing_residual(double a_deg, double b_deg) {
    const double d = wrap_degrees(a_deg - b_deg);
    return d > 180.0 ? 360.0 - d : d;
}

std::vector<double> likelihoods(const FusionProblem& problem, std::size_t x, std::size_t y) {
    const Point c = problem.cell_position(x, y);
    std::vector<double> out;
    out.reserve(problem.channel_count());
    for (std::size_t s = 0; s < problem.sensors.size(); ++s) {
        const Point sp = problem.sensors[s];
        const Reading& r = problem.readings.at(s);
        const double dist = std::hypot(c.x - sp.x, c.y - sp.y);
        out.push_back(gaussian(dist - r.distance, distance_sigma(r.distance)));
        out.push_back(gaussian(bearing_residual(bearing_deg(sp, c), r.bearing),
                               problem.sigma_bearing));
    }
    return out;
}

LikelihoodField likelihood_field(const FusionProblem& problem) {
    problem.validate();
    LikelihoodField field;
    field.width = problem.width;
    field.height = problem.height;
    field.values.assign(problem.channel_count(), std::vector<double>(problem.cell_count()));
    for (std::size_t y = 0; y < problem.height; ++y) {
        for (std::size_t x = 0; x < problem.width; ++x) {
            const std::vector<double> l = likelihoods(problem, x, y);
            const std::size_t cell = problem.cell_index(x, y);
            for (std::size_t ch = 0; ch < l.size(); ++ch) field.values[ch][cell] = l[ch];
        }
    }
    return field;
}

PosteriorGrid::PosteriorGrid(std::size_t width, std::size_t height, std::vector<double> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
    if (weights_.size() != width_ * height_) {
        throw ShapeMismatch("posterior grid " + std::to_string(width_) + "x" +
                            std::to_string(height_) + " given " +
                            std::to_string(weights_.size()) + " weights");
    }
}

double PosteriorGrid::sum() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

void PosteriorGrid::normalize() {
    const double s = sum();
    if (s > 0.0) {
        for (double& w : weights_) w /= s;
    } else if (!weights_.empty()) {
        std::fill(weights_.begin(), weights_.end(), 1.0 / static_cast<double>(weights_.size()));
    }
    normalized_ = true;
}

std::pair<std::size_t, std::size_t> PosteriorGrid::argmax() const {
    if (weights_.empty()) throw std::logic_error("argmax of an empty grid");
    std::size_t bx = 0, by = 0;
    double best = -1.0;
    // x-major scan so that strict '>' keeps the lexicographically lowest tie.
    for (std::size_t x = 0; x < width_; ++x) {
        for (std::size_t y = 0; y < height_; ++y) {
            const double w = at(x, y);
            if (w > best) {
                best = w;
                bx = x;
                by = y;
            }
        }
    }
    return {bx, by};
}

PosteriorGrid posterior_from_field(const LikelihoodField& field) {
    const std::size_t cells = field.width * field.height;
    std::vector<double> w(cells, 1.0);
    for (const auto& channel : field.values) {
        if (channel.size() != cells) throw ShapeMismatch("likelihood channel size mismatch");
        for (std::size_t i = 0; i < cells; ++i) w[i] *= channel[i];
    }
    PosteriorGrid grid(field.width, field.height, std::move(w));
    grid.normalize();
    return grid;
}

PosteriorGrid exact_posterior(const FusionProblem& problem) {
    return posterior_from_field(likelihood_field(problem));
}

std::vector<Reading> synthesize_readings(const std::vector<Point>& sensors, Point target,
                                         double noise_distance, double noise_bearing,
                                         std::uint64_t seed) {
    Engine rng = make_engine(seed, 0, StreamSalt::Readings);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<Reading> out;
    out.reserve(sensors.size());
    for (const Point& s : sensors) {
        Reading r;
        r.distance = std::hypot(target.x - s.x, target.y - s.y);
        r.bearing = bearing_deg(s, target);
        if (noise_distance > 0.0) r.distance = std::max(0.0, r.distance + noise_distance * z(rng));
        if (noise_bearing > 0.0) r.bearing = wrap_degrees(r.bearing + noise_bearing * z(rng));
        out.push_back(r);
    }
    return out;
}

ScNetwork build_sc_network(const FusionProblem& problem, const Quantizer& quantizer) {
    return build_sc_network(likelihood_field(problem), quantizer);
}

ScNetwork build_sc_network(const LikelihoodField& field, const Quantizer& quantizer) {
    const std::size_t cells = field.width * field.height;
    const std::size_t channels = field.values.size();
    if (channels == 0) throw ShapeMismatch("likelihood field has no channels");
    for (const auto& ch : field.values) {
        if (ch.size() != cells) throw ShapeMismatch("likelihood channel size mismatch");
    }

    ScNetwork net;
    net.levels = quantizer.grid();
    net.channel_scale.resize(channels);
    for (std::size_t ch = 0; ch < channels; ++ch) {
        const double mx = *std::max_element(field.values[ch].begin(), field.values[ch].end());
        net.channel_scale[ch] = mx > 0.0 ? mx : 1.0;
    }

    std::vector<double> raw(cells * channels);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::vector<logic::NodeId> term(channels);
        for (std::size_t ch = 0; ch < channels; ++ch) {
            term[ch] = net.netlist.add_terminal("c" + std::to_string(cell) + "_l" +
                                                std::to_string(ch));
            raw[cell * channels + ch] = field.values[ch][cell] / net.channel_scale[ch];
        }
        logic::NodeId acc = term[0];
        for (std::size_t ch = 1; ch < channels; ++ch) {
            acc = net.netlist.add_and({acc, term[ch]},
                                      "c" + std::to_string(cell) + "_g" + std::to_string(ch));
        }
        net.netlist.add_output(acc);
    }
    net.assignment = allocator::quantize(raw, net.levels);
    return net;
}

ScRunResult sc_posterior(const FusionProblem& problem, const ScRunOptions& options) {
    return sc_posterior(likelihood_field(problem), options);
}

ScRunResult sc_posterior(const LikelihoodField& field, const ScRunOptions& options) {
    if (options.bitstream_length == 0) throw std::invalid_argument("bitstream length must be > 0");
    const ScNetwork net = build_sc_network(field, options.quantizer);
    const std::size_t cells = field.width * field.height;
    const std::size_t channels = field.values.size();
    const std::size_t n = options.bitstream_length;

    ScRunResult res;
    res.terminals = net.netlist.terminal_count();
    res.bitstream_length = n;

    const std::vector<logic::ConflictSet> sets = logic::extract_conflict_sets(net.netlist);

    allocator::SizingPolicy sizing = options.sizing;
    if (sizing.kind == allocator::SizingPolicy::Kind::TraceDriven && sizing.trace.empty()) {
        sizing.trace = {net.assignment};
    }
    res.array = allocator::size_array(sets, net.levels, sizing);

    // The current assignment is always part of the clustering trace, so every
    // cluster carries one well-defined level.
    std::vector<allocator::InputAssignment> ctrace = options.cluster_trace;
    ctrace.push_back(net.assignment);
    res.clusters = logic::cluster_terminals(res.terminals, sets,
                                            allocator::same_input_classes(ctrace));
    const std::vector<logic::ConflictSet> csets = logic::map_conflict_sets(sets, res.clusters);
    allocator::InputAssignment cassign;
    cassign.probability.reserve(res.clusters.cluster_count());
    for (const auto& members : res.clusters.members) {
        cassign.probability.push_back(net.assignment.probability[members.front()]);
    }
    res.matrix = allocator::allocate(cassign, res.array, csets);

    std::vector<stochastic::Bitstream> rows;
    if (options.source == StreamSource::Sbg) {
        std::vector<sbg::SbgUnit> units =
            sbg::build_array(res.array, options.params, options.seed, options.sbg);
        rows = sbg::generate_array(units, n);
        res.sbg_energy = sbg::total_energy(units);
        for (const auto& u : units) {
            res.ops.writes += u.counters().writes;
            res.ops.reads += u.counters().reads;
        }
    } else {
        const std::vector<std::size_t> row_level = res.array.row_levels();
        rows.reserve(row_level.size());
        for (std::size_t r = 0; r < row_level.size(); ++r) {
            Engine rng = make_engine(options.seed, r, StreamSalt::Experiment);
            std::bernoulli_distribution bit(res.array.levels[row_level[r]]);
            stochastic::Bitstream s(n);
            for (std::size_t i = 0; i < n; ++i) s.set(i, bit(rng));
            rows.push_back(std::move(s));
        }
    }

    const std::vector<stochastic::Bitstream> cluster_streams = allocator::route(res.matrix, rows);
    std::vector<stochastic::Bitstream> terminal_streams;
    terminal_streams.reserve(res.terminals);
    for (std::size_t t = 0; t < res.terminals; ++t) {
        terminal_streams.push_back(cluster_streams[res.clusters.cluster_of[t]]);
    }
    const std::vector<stochastic::Bitstream> outs =
        logic::evaluate_streams(net.netlist, terminal_streams);

    res.counts.resize(cells);
    std::vector<double> est(cells);
    std::vector<double> qexact(cells, 1.0);
    for (std::size_t c = 0; c < cells; ++c) {
        res.counts[c] = outs[c].count_ones();
        est[c] = static_cast<double>(res.counts[c]);
        for (std::size_t ch = 0; ch < channels; ++ch) {
            qexact[c] *= net.assignment.probability[c * channels + ch];
        }
    }
    res.estimate = PosteriorGrid(field.width, field.height, std::move(est));
    res.estimate.normalize();
    res.quantized_exact = PosteriorGrid(field.width, field.height, std::move(qexact));
    res.quantized_exact.normalize();
    return res;
}

double kl_divergence(const PosteriorGrid& exact, const PosteriorGrid& est, double epsilon) {
    if (exact.width() != est.width() || exact.height() != est.height()) {
        throw ShapeMismatch("KL over grids " + std::to_string(exact.width()) + "x" +
                            std::to_string(exact.height()) + " and " +
                            std::to_string(est.width()) + "x" + std::to_string(est.height()));
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("KL floor must be positive");
    double kl = 0.0;
    const auto& p = exact.weights();
    const auto& q = est.weights();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        const double qi = q[i] > 0.0 ? q[i] : epsilon;
        kl += p[i] * std::log(p[i] / qi);
    }
    return kl;
}

void write_posterior_csv(std::ostream& out, const PosteriorGrid& grid) {
    out << "x,y,weight\n";
    out << std::setprecision(6);
    for (std::size_t y = 0; y < grid.height(); ++y) {
        for (std::size_t x = 0; x < grid.width(); ++x) {
            out << x << ',' << y << ',' << grid.at(x, y) << '\n';
        }
    }
}

void write_pgm(std::ostream& out, const PosteriorGrid& grid) {
    out << "P5\n" << grid.width() << ' ' << grid.height() << "\n255\n";
    const auto& w = grid.weights();
    const double mx = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
    for (double v : w) {
        const double scaled = mx > 0.0 ? v / mx * 255.0 : 0.0;
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
    }
}

}  // namespace mtjsc::fusion
