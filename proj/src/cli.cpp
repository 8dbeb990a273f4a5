#include "mtjsc/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "CLI11.hpp"
#include "mtjsc/allocator.hpp"
#include "mtjsc/cost.hpp"
#include "mtjsc/errors.hpp"
#include "mtjsc/experiments.hpp"
#include "mtjsc/fusion.hpp"
#include "mtjsc/logic.hpp"
#include "mtjsc/sbg.hpp"

namespace mtjsc::cli {

namespace fs = std::filesystem;

namespace {

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::ofstream open_out(const config::RunConfig& cfg, const std::string& name,
                       std::ostream& log, bool binary = false) {
    fs::create_directories(cfg.out_dir);
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    log << "wrote " << path.string() << '\n';
    return f;
}

void sbg_characterize(const config::RunConfig& cfg, std::ostream& log) {
    if (!(cfg.sweep_v_step > 0.0) || cfg.sweep_v_max < cfg.sweep_v_min) {
        throw ConfigError("sweep needs v_step > 0 and v_max >= v_min");
    }
    auto f = open_out(cfg, "sbg_characterize.csv", log);
    f << "voltage,duration,probability\n";
    const auto steps =
        static_cast<long>((cfg.sweep_v_max - cfg.sweep_v_min) / cfg.sweep_v_step + 1e-9);
    for (double t : cfg.sweep_durations) {
        for (long i = 0; i <= steps; ++i) {
            const double v = cfg.sweep_v_min + static_cast<double>(i) * cfg.sweep_v_step;
            const double p =
                device::switch_probability(cfg.device, {v, t, cfg.sweep_direction});
            f << g6(v) << ',' << g6(t) << ',' << g6(p) << '\n';
        }
    }
}

void sbg_report(const config::RunConfig& cfg, std::ostream& log) {
    const sbg::SbgArraySpec spec{cfg.array_levels, cfg.array_multiplicity};
    spec.validate();
    std::vector<sbg::SbgUnit> units = sbg::build_array(spec, cfg.device, cfg.master_seed, cfg.sbg);
    const auto streams = sbg::generate_array(units, cfg.bitstream_length);
    const auto row_level = spec.row_levels();
    auto f = open_out(cfg, "sbg_report.csv", log);
    f << "unit,level,target_p,density,abs_error,energy_nj,writes,reads\n";
    for (std::size_t r = 0; r < units.size(); ++r) {
        const double p = units[r].target_p();
        const double d = streams[r].value();
        f << r << ',' << row_level[r] << ',' << g6(p) << ',' << g6(d) << ','
          << g6(std::abs(d - p)) << ',' << g6(units[r].energy()) << ','
          << units[r].counters().writes << ',' << units[r].counters().reads << '\n';
    }
}

void scc_report(const config::RunConfig& cfg, std::ostream& log) {
    const auto res = experiments::scc_sweep(cfg.device, cfg.sbg, experiments::probability_sweep(),
                                            experiments::cross_pairs(), cfg.scc_lengths,
                                            cfg.repeats, cfg.master_seed);
    auto f = open_out(cfg, "scc_report.csv", log);
    f << "n,kind,p_x,p_y,mean_abs_scc\n";
    for (const auto& r : res.rows) {
        f << r.n << ',' << (r.self ? "self" : "cross") << ',' << g6(r.p_x) << ',' << g6(r.p_y)
          << ',' << g6(r.mean_abs_scc) << '\n';
    }
}

void allocate_cmd(const config::RunConfig& cfg, std::ostream& log) {
    if (cfg.netlist_path.empty() || cfg.assignment_path.empty()) {
        throw ConfigError("allocate needs a netlist and an assignment file");
    }
    const logic::ScNetlist net = logic::load_netlist(config::resolve(cfg, cfg.netlist_path));
    allocator::InputAssignment assignment{
        config::load_assignment(config::resolve(cfg, cfg.assignment_path))};
    if (assignment.size() != net.terminal_count()) {
        throw ConfigError("assignment has " + std::to_string(assignment.size()) +
                          " values for " + std::to_string(net.terminal_count()) + " terminals");
    }
    const std::set<double> distinct(assignment.probability.begin(), assignment.probability.end());
    const std::vector<double> levels(distinct.begin(), distinct.end());

    const auto sets = logic::extract_conflict_sets(net);
    const auto spec =
        allocator::size_array(sets, levels, allocator::SizingPolicy::trace_driven({assignment}));
    spec.validate();
    const auto clusters = logic::cluster_terminals(net.terminal_count(), sets,
                                                   allocator::same_input_classes({assignment}));
    allocator::InputAssignment cassign;
    for (const auto& m : clusters.members) {
        cassign.probability.push_back(assignment.probability[m.front()]);
    }
    const auto matrix =
        allocator::allocate(cassign, spec, logic::map_conflict_sets(sets, clusters));

    auto f = open_out(cfg, "allocation.csv", log);
    f << "row,col\n";
    for (std::size_t j = 0; j < matrix.columns(); ++j) f << matrix.row_of(j) << ',' << j << '\n';
    auto c = open_out(cfg, "columns.csv", log);
    c << "terminal,column\n";
    for (std::size_t t = 0; t < net.terminal_count(); ++t) {
        c << t << ',' << clusters.cluster_of[t] << '\n';
    }
    const auto metrics = allocator::cost_metrics(cfg.transistors_per_sbg, net.terminal_count(),
                                                 matrix.rows(), matrix.columns());
    auto s = open_out(cfg, "allocate_summary.csv", log);
    s << "M,N,N_prime,K_energy,K_cmos\n"
      << matrix.rows() << ',' << net.terminal_count() << ',' << matrix.columns() << ','
      << g6(metrics.k_energy) << ',' << g6(metrics.k_cmos) << '\n';
    log << "M=" << matrix.rows() << " N=" << net.terminal_count() << " N'=" << matrix.columns()
        << '\n';
}

void fusion_run(const config::RunConfig& cfg, std::ostream& log) {
    const fusion::FusionProblem problem = config::make_problem(cfg);
    const fusion::PosteriorGrid exact = fusion::exact_posterior(problem);
    const fusion::ScRunResult res = fusion::sc_posterior(problem, config::make_run_options(cfg));
    const double kl = fusion::kl_divergence(
        exact, res.estimate, fusion::kl_floor(res.bitstream_length, problem.cell_count()));
    const auto [ax, ay] = res.estimate.argmax();

    auto csv = open_out(cfg, "posterior.csv", log);
    fusion::write_posterior_csv(csv, res.estimate);
    auto pgm = open_out(cfg, "posterior.pgm", log, true);
    fusion::write_pgm(pgm, res.estimate);
    auto ex = open_out(cfg, "exact_posterior.csv", log);
    fusion::write_posterior_csv(ex, exact);

    const std::string line = std::to_string(res.bitstream_length) + ',' + g6(kl) + ',' +
                             std::to_string(ax) + ',' + std::to_string(ay);
    auto s = open_out(cfg, "fusion_summary.csv", log);
    s << "n,kl,argmax_x,argmax_y\n" << line << '\n';
    log << line << '\n';
}

void cost_report(const config::RunConfig& cfg, std::ostream& log) {
    const fusion::FusionProblem problem = config::make_problem(cfg);
    const fusion::ScRunResult res = fusion::sc_posterior(problem, config::make_run_options(cfg));
    cost::RunAccounting acc;
    acc.sbg_energy = res.sbg_energy;
    acc.bitstream_length = res.bitstream_length;
    acc.m = res.array.total();
    acc.n = res.terminals;
    acc.n_prime = res.matrix.columns();
    acc.t_cyc = cfg.t_cyc;
    acc.transistors_per_sbg = cfg.transistors_per_sbg;
    const cost::CostProfile sim = cost::simulated_profile(acc);

    const std::vector<cost::CostProfile> rows = {cost::kFpgaBaseline, cost::kMtjBaseline,
                                                 cost::kSharedSbgReported, sim};
    const cost::CostProfile& ref = cost::kSharedSbgReported;

    auto f = open_out(cfg, "cost_report.csv", log);
    auto md = open_out(cfg, "cost_report.md", log);
    f << "method,e_cyc_nj,t_cyc_ns,n_cyc,e_tot_uj,t_tot_us,n_cmos_k,energy_ratio\n";
    md << "| method | E_cyc (nJ) | T_cyc (ns) | N_cyc | E_tot (uJ) | T_tot (us) | N_cmos (x10^3) "
          "| energy ratio |\n"
       << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& p : rows) {
        const cost::Totals t = cost::totals(p);
        const std::string ratio = g6(cost::compare(p, ref));
        const std::string ncmos = p.n_cmos > 0.0 ? g6(p.n_cmos) : "";
        f << p.label << ',' << g6(p.e_cyc) << ',' << g6(p.t_cyc) << ',' << p.n_cyc << ','
          << g6(t.energy_uj) << ',' << g6(t.time_us) << ',' << ncmos << ',' << ratio << '\n';
        md << "| " << p.label << " | " << g6(p.e_cyc) << " | " << g6(p.t_cyc) << " | "
           << p.n_cyc << " | " << g6(t.energy_uj) << " | " << g6(t.time_us) << " | "
           << (ncmos.empty() ? "-" : ncmos) << " | " << ratio << " |\n";
    }
    const auto m = allocator::cost_metrics(acc.transistors_per_sbg, acc.n, acc.m, acc.n_prime);
    md << "\nSimulated array: M = " << acc.m << ", N = " << acc.n << ", N' = " << acc.n_prime
       << ", K_energy = " << g6(m.k_energy) << ", K_cmos = " << g6(m.k_cmos) << "\n";
}

void pv_sweep(const config::RunConfig& cfg, std::ostream& log) {
    sbg::SbgOptions opt = cfg.sbg;
    const auto res = experiments::accuracy_sweep(cfg.device, opt, experiments::probability_sweep(),
                                                 cfg.lengths, cfg.repeats, cfg.master_seed);
    auto f = open_out(cfg, "pv_sweep.csv", log);
    f << "length,max_error,avg_error\n";
    for (std::size_t n : cfg.lengths) {
        f << n << ',' << g6(res.max_error(n)) << ',' << g6(res.mean_error(n)) << '\n';
    }
    auto d = open_out(cfg, "pv_sweep_detail.csv", log);
    d << "length,p,mean_abs_error,max_abs_error\n";
    for (const auto& r : res.rows) {
        d << r.n << ',' << g6(r.p) << ',' << g6(r.mean_abs_error) << ',' << g6(r.max_abs_error)
          << '\n';
    }
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {
        "sbg-characterize", "sbg-report", "scc-report", "allocate",
        "fusion-run",       "cost-report", "pv-sweep"};
    return names;
}

int run(const std::string& subcommand, const config::RunConfig& cfg, std::ostream& out,
        std::ostream& err) {
    try {
        cfg.device.validate();
        if (subcommand == "sbg-characterize") {
            sbg_characterize(cfg, out);
        } else if (subcommand == "sbg-report") {
            sbg_report(cfg, out);
        } else if (subcommand == "scc-report") {
            scc_report(cfg, out);
        } else if (subcommand == "allocate") {
            allocate_cmd(cfg, out);
        } else if (subcommand == "fusion-run") {
            fusion_run(cfg, out);
        } else if (subcommand == "cost-report") {
            cost_report(cfg, out);
        } else if (subcommand == "pv-sweep") {
            pv_sweep(cfg, out);
        } else {
            err << "error: unknown subcommand '" << subcommand << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        err << "error: " << subcommand << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"MTJ stochastic-computing simulator"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<bool> pv;
    std::string grid;
    std::optional<std::size_t> length;
    std::string netlist;
    std::string assignment;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--seed", seed, "master seed override");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_flag("--pv,!--no-pv", pv, "toggle process variation");
    app.add_option("--grid", grid, "fusion grid as WxH");
    app.add_option("--bitstream-len", length, "bitstream length");

    for (const auto& name : subcommands()) {
        CLI::App* sub = app.add_subcommand(name);
        if (name == "allocate") {
            sub->add_option("--netlist", netlist, "netlist file");
            sub->add_option("--assignment", assignment, "assignment file");
        }
    }
    app.fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 2;
    }

    config::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = config::load_config(config_path);
        if (seed) cfg.master_seed = *seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (pv) cfg.sbg.variation.enabled = *pv;
        if (!grid.empty()) std::tie(cfg.grid_width, cfg.grid_height) = config::parse_grid(grid);
        if (length) cfg.bitstream_length = *length;
        // Paths given on the command line are relative to the working directory.
        if (!netlist.empty()) cfg.netlist_path = fs::absolute(netlist).string();
        if (!assignment.empty()) cfg.assignment_path = fs::absolute(assignment).string();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return run(app.get_subcommands().front()->get_name(), cfg, out, err);
}

}  // namespace mtjsc::cli
