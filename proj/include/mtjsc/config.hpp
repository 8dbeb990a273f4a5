#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mtjsc/device.hpp"
#include "mtjsc/fusion.hpp"
#include "mtjsc/sbg.hpp"

namespace mtjsc::config {

// Every knob of a run. A run is a pure function of this struct.
struct RunConfig {
    std::uint64_t master_seed = 1;
    std::string out_dir = ".";

    device::MtjParams device{};
    sbg::SbgOptions sbg{};

    // SBG array used by sbg-report.
    std::vector<double> array_levels{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<std::size_t> array_multiplicity{1, 1, 1, 1, 1, 1, 1, 1, 1};

    // sbg-characterize sweep.
    double sweep_v_min = 0.5;
    double sweep_v_max = 2.0;
    double sweep_v_step = 0.01;
    std::vector<double> sweep_durations{3.0, 5.4, 7.0};
    device::Direction sweep_direction = device::Direction::P2AP;

    std::size_t bitstream_length = 128;
    std::vector<std::size_t> lengths{64, 128, 256};
    std::vector<std::size_t> scc_lengths{64, 128, 256, 512};
    std::size_t repeats = 50;

    // fusion-run / cost-report.
    std::size_t grid_width = 32;
    std::size_t grid_height = 32;
    fusion::Point target{40.0, 24.0};
    double noise_distance = 0.0;
    double noise_bearing = 0.0;
    // Explicit (distance, bearing) readings; synthesized from target when empty.
    std::vector<fusion::Reading> readings;
    std::size_t quant_levels = 64;
    fusion::StreamSource source = fusion::StreamSource::Sbg;

    // allocate.
    std::string netlist_path;
    std::string assignment_path;

    std::uint64_t transistors_per_sbg = 92;
    double t_cyc = 10.0;

    // Relative paths inside the file are resolved against its directory.
    std::string base_dir = ".";
};

// key = value lines; '#' starts a comment. Unknown or repeated keys raise
// ConfigError naming the line.
RunConfig parse_config(std::istream& in, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

// Applies one key to cfg; the same keys the file accepts.
void apply(RunConfig& cfg, const std::string& key, const std::string& value);

// Every accepted key with its current value, in a stable order.
std::vector<std::pair<std::string, std::string>> dump(const RunConfig& cfg);

// One probability per whitespace- or comma-separated token, '#' comments.
std::vector<double> load_assignment(const std::string& path);
std::vector<double> parse_assignment(std::istream& in);

// "WxH"
std::pair<std::size_t, std::size_t> parse_grid(const std::string& text);

fusion::FusionProblem make_problem(const RunConfig& cfg);
fusion::ScRunOptions make_run_options(const RunConfig& cfg);

// Path relative to the config file directory unless absolute.
std::string resolve(const RunConfig& cfg, const std::string& path);

}  // namespace mtjsc::config
