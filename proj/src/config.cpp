#include "mtjsc/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include "mtjsc/errors.hpp"

namespace mtjsc::config {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(v);
    while (std::getline(is, cur, ',')) {
        std::string t = trim(cur);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& t : split_list(v)) out.push_back(to_double(key, t));
    return out;
}

std::vector<std::size_t> to_sizes(const std::string& key, const std::string& v) {
    std::vector<std::size_t> out;
    for (const auto& t : split_list(v)) out.push_back(to_uint(key, t));
    return out;
}

std::string fmt(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_floating_point_v<T>) {
            out += fmt(xs[i]);
        } else {
            out += std::to_string(xs[i]);
        }
    }
    return out;
}

struct Key {
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define MTJSC_DOUBLE(name, field)                                                        \
    {name,                                                                               \
     {[](RunConfig& c, const std::string& k, const std::string& v) {                     \
          c.field = to_double(k, v);                                                     \
      },                                                                                 \
      [](const RunConfig& c) { return fmt(c.field); }}}

#define MTJSC_SIZE(name, field)                                                          \
    {name,                                                                               \
     {[](RunConfig& c, const std::string& k, const std::string& v) {                     \
          c.field = to_uint(k, v);                                                       \
      },                                                                                 \
      [](const RunConfig& c) { return std::to_string(c.field); }}}

const std::vector<std::pair<std::string, Key>>& keys() {
    static const std::vector<std::pair<std::string, Key>> table = {
        MTJSC_SIZE("seed", master_seed),
        {"out_dir",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
          [](const RunConfig& c) { return c.out_dir; }}},

        MTJSC_DOUBLE("device.alpha", device.alpha),
        MTJSC_DOUBLE("device.gamma", device.gamma),
        MTJSC_DOUBLE("device.polarization", device.polarization),
        MTJSC_DOUBLE("device.hk0", device.hk0),
        MTJSC_DOUBLE("device.t_sl", device.t_sl),
        MTJSC_DOUBLE("device.t_ox", device.t_ox),
        MTJSC_DOUBLE("device.length", device.length),
        MTJSC_DOUBLE("device.width", device.width),
        MTJSC_DOUBLE("device.tmr", device.tmr),
        MTJSC_DOUBLE("device.ra", device.ra),
        MTJSC_DOUBLE("device.tau0_ns", device.tau0_ns),
        MTJSC_DOUBLE("device.delta", device.delta),
        MTJSC_DOUBLE("device.sigma_rel", device.sigma_rel),
        MTJSC_DOUBLE("device.p2ap.vc0", device.p2ap.vc0),
        MTJSC_DOUBLE("device.p2ap.c_ns", device.p2ap.c_ns),
        MTJSC_DOUBLE("device.ap2p.vc0", device.ap2p.vc0),
        MTJSC_DOUBLE("device.ap2p.c_ns", device.ap2p.c_ns),
        MTJSC_DOUBLE("device.v_max", device.v_max),

        {"sbg.mode",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              if (v == "simple") {
                  c.sbg.mode = sbg::SbgMode::Simple;
              } else if (v == "self-control") {
                  c.sbg.mode = sbg::SbgMode::SelfControl;
              } else {
                  throw ConfigError(k + ": expected simple or self-control, got '" + v + "'");
              }
          },
          [](const RunConfig& c) {
              return std::string(c.sbg.mode == sbg::SbgMode::Simple ? "simple" : "self-control");
          }}},
        MTJSC_DOUBLE("sbg.write_duration", sbg.write_duration),
        MTJSC_DOUBLE("sbg.read_energy", sbg.read_energy),

        {"pv.enabled",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.sbg.variation.enabled = to_bool(k, v);
          },
          [](const RunConfig& c) {
              return std::string(c.sbg.variation.enabled ? "true" : "false");
          }}},
        MTJSC_DOUBLE("pv.sigma_area", sbg.variation.sigma_area),
        MTJSC_DOUBLE("pv.sigma_tox", sbg.variation.sigma_tox),

        {"array.levels",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.array_levels = to_doubles(k, v);
          },
          [](const RunConfig& c) { return join(c.array_levels); }}},
        {"array.multiplicity",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.array_multiplicity = to_sizes(k, v);
          },
          [](const RunConfig& c) { return join(c.array_multiplicity); }}},

        MTJSC_DOUBLE("sweep.v_min", sweep_v_min),
        MTJSC_DOUBLE("sweep.v_max", sweep_v_max),
        MTJSC_DOUBLE("sweep.v_step", sweep_v_step),
        {"sweep.durations",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.sweep_durations = to_doubles(k, v);
          },
          [](const RunConfig& c) { return join(c.sweep_durations); }}},
        {"sweep.direction",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              if (v == "p2ap") {
                  c.sweep_direction = device::Direction::P2AP;
              } else if (v == "ap2p") {
                  c.sweep_direction = device::Direction::AP2P;
              } else {
                  throw ConfigError(k + ": expected p2ap or ap2p, got '" + v + "'");
              }
          },
          [](const RunConfig& c) {
              return std::string(c.sweep_direction == device::Direction::P2AP ? "p2ap" : "ap2p");
          }}},

        MTJSC_SIZE("bitstream_length", bitstream_length),
        {"experiment.lengths",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.lengths = to_sizes(k, v);
          },
          [](const RunConfig& c) { return join(c.lengths); }}},
        {"experiment.scc_lengths",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.scc_lengths = to_sizes(k, v);
          },
          [](const RunConfig& c) { return join(c.scc_lengths); }}},
        MTJSC_SIZE("experiment.repeats", repeats),

        MTJSC_SIZE("fusion.width", grid_width),
        MTJSC_SIZE("fusion.height", grid_height),
        MTJSC_DOUBLE("fusion.target_x", target.x),
        MTJSC_DOUBLE("fusion.target_y", target.y),
        MTJSC_DOUBLE("fusion.noise_distance", noise_distance),
        MTJSC_DOUBLE("fusion.noise_bearing", noise_bearing),
        {"fusion.readings",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              const std::vector<double> xs = to_doubles(k, v);
              if (xs.size() % 2 != 0) {
                  throw ConfigError(k + ": expected distance,bearing pairs");
              }
              c.readings.clear();
              for (std::size_t i = 0; i < xs.size(); i += 2) {
                  c.readings.push_back({xs[i], xs[i + 1]});
              }
          },
          [](const RunConfig& c) {
              std::vector<double> xs;
              for (const auto& r : c.readings) {
                  xs.push_back(r.distance);
                  xs.push_back(r.bearing);
              }
              return join(xs);
          }}},
        MTJSC_SIZE("fusion.levels", quant_levels),
        {"fusion.source",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              if (v == "sbg") {
                  c.source = fusion::StreamSource::Sbg;
              } else if (v == "ideal") {
                  c.source = fusion::StreamSource::Ideal;
              } else {
                  throw ConfigError(k + ": expected sbg or ideal, got '" + v + "'");
              }
          },
          [](const RunConfig& c) {
              return std::string(c.source == fusion::StreamSource::Sbg ? "sbg" : "ideal");
          }}},

        {"allocate.netlist",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.netlist_path = v; },
          [](const RunConfig& c) { return c.netlist_path; }}},
        {"allocate.assignment",
         {[](RunConfig& c, const std::string&, const std::string& v) { c.assignment_path = v; },
          [](const RunConfig& c) { return c.assignment_path; }}},

        MTJSC_SIZE("cost.transistors_per_sbg", transistors_per_sbg),
        MTJSC_DOUBLE("cost.t_cyc", t_cyc),
    };
    return table;
}

#undef MTJSC_DOUBLE
#undef MTJSC_SIZE

const Key* find_key(const std::string& key) {
    for (const auto& [name, k] : keys()) {
        if (name == key) return &k;
    }
    return nullptr;
}

}  // namespace

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
    const Key* k = find_key(key);
    if (!k) throw ConfigError("unknown configuration key '" + key + "'");
    k->set(cfg, key, value);
}

std::vector<std::pair<std::string, std::string>> dump(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [name, k] : keys()) out.emplace_back(name, k.get(cfg));
    return out;
}

RunConfig parse_config(std::istream& in, const std::string& origin) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "empty key");
        if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
        try {
            apply(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RunConfig cfg = parse_config(in, path);
    cfg.base_dir = std::filesystem::path(path).parent_path().string();
    if (cfg.base_dir.empty()) cfg.base_dir = ".";
    return cfg;
}

std::vector<double> parse_assignment(std::istream& in) {
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& ch : line) {
            if (ch == ',') ch = ' ';
        }
        std::istringstream is(line);
        std::string tok;
        while (is >> tok) out.push_back(to_double("assignment", tok));
    }
    return out;
}

std::vector<double> load_assignment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open assignment file '" + path + "'");
    return parse_assignment(in);
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) throw ConfigError("grid must look like WxH, got '" + text + "'");
    const std::size_t w = to_uint("grid", text.substr(0, x));
    const std::size_t h = to_uint("grid", text.substr(x + 1));
    if (w == 0 || h == 0) throw ConfigError("grid dimensions must be positive");
    return {w, h};
}

fusion::FusionProblem make_problem(const RunConfig& cfg) {
    fusion::FusionProblem p;
    p.width = cfg.grid_width;
    p.height = cfg.grid_height;
    p.readings = cfg.readings.empty()
                     ? fusion::synthesize_readings(p.sensors, cfg.target, cfg.noise_distance,
                                                   cfg.noise_bearing, cfg.master_seed)
                     : cfg.readings;
    p.validate();
    return p;
}

fusion::ScRunOptions make_run_options(const RunConfig& cfg) {
    fusion::ScRunOptions o;
    o.bitstream_length = cfg.bitstream_length;
    o.seed = cfg.master_seed;
    o.quantizer.levels = cfg.quant_levels;
    o.params = cfg.device;
    o.sbg = cfg.sbg;
    o.source = cfg.source;
    return o;
}

std::string resolve(const RunConfig& cfg, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(cfg.base_dir) / p).string();
}

}  // namespace mtjsc::config
