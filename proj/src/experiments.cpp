#include "mtjsc/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "mtjsc/bitstream.hpp"
#include "mtjsc/rng.hpp"

namespace mtjsc::experiments {

std::vector<double> probability_sweep() {
    std::vector<double> p;
    for (int k = 1; k <= 9; ++k) p.push_back(k / 10.0);
    return p;
}

std::vector<std::pair<double, double>> cross_pairs() {
    return {{0.19, 0.41}, {0.12, 0.48}, {0.49, 0.25}, {0.23, 0.44}, {0.18, 0.58}};
}

double AccuracyResult::mean_error(std::size_t n) const {
    double s = 0.0;
    std::size_t k = 0;
    for (const auto& r : rows) {
        if (r.n != n) continue;
        s += r.mean_abs_error;
        ++k;
    }
    return k ? s / static_cast<double>(k) : 0.0;
}

double AccuracyResult::max_error(std::size_t n) const {
    double m = 0.0;
    for (const auto& r : rows) {
        if (r.n == n) m = std::max(m, r.max_abs_error);
    }
    return m;
}

AccuracyResult accuracy_sweep(const device::MtjParams& params, const sbg::SbgOptions& options,
                              const std::vector<double>& probabilities,
                              const std::vector<std::size_t>& lengths, std::size_t repeats,
                              std::uint64_t seed) {
    AccuracyResult res;
    std::uint64_t id = 0;
    for (std::size_t n : lengths) {
        for (double p : probabilities) {
            AccuracyRow row{n, p, 0.0, 0.0};
            for (std::size_t r = 0; r < repeats; ++r) {
                sbg::SbgUnit unit(params, p, seed, id++, options);
                const double err = std::abs(unit.generate(n).value() - p);
                row.mean_abs_error += err;
                row.max_abs_error = std::max(row.max_abs_error, err);
            }
            if (repeats) row.mean_abs_error /= static_cast<double>(repeats);
            res.rows.push_back(row);
        }
    }
    return res;
}

namespace {

double mean_of(const std::vector<SccRow>& rows, std::size_t n, bool self) {
    double s = 0.0;
    std::size_t k = 0;
    for (const auto& r : rows) {
        if (r.n != n || r.self != self) continue;
        s += r.mean_abs_scc;
        ++k;
    }
    return k ? s / static_cast<double>(k) : 0.0;
}

}  // namespace

double SccResult::mean_self(std::size_t n) const { return mean_of(rows, n, true); }
double SccResult::mean_cross(std::size_t n) const { return mean_of(rows, n, false); }

SccResult scc_sweep(const device::MtjParams& params, const sbg::SbgOptions& options,
                    const std::vector<double>& self_probabilities,
                    const std::vector<std::pair<double, double>>& pairs,
                    const std::vector<std::size_t>& lengths, std::size_t repeats,
                    std::uint64_t seed) {
    SccResult res;
    std::uint64_t id = 0;
    auto measure = [&](std::size_t n, double px, double py, bool self) {
        SccRow row{n, px, py, self, 0.0};
        for (std::size_t r = 0; r < repeats; ++r) {
            sbg::SbgUnit a(params, px, seed, id++, options);
            sbg::SbgUnit b(params, py, seed, id++, options);
            row.mean_abs_scc += std::abs(stochastic::scc(a.generate(n), b.generate(n)));
        }
        if (repeats) row.mean_abs_scc /= static_cast<double>(repeats);
        res.rows.push_back(row);
    };
    for (std::size_t n : lengths) {
        for (double p : self_probabilities) measure(n, p, p, true);
        for (const auto& [px, py] : pairs) measure(n, px, py, false);
    }
    return res;
}

double KlResult::mean(std::size_t n) const {
    double s = 0.0;
    std::size_t k = 0;
    for (const auto& r : rows) {
        if (r.n != n) continue;
        s += r.kl;
        ++k;
    }
    return k ? s / static_cast<double>(k) : 0.0;
}

KlResult kl_sweep(const fusion::FusionProblem& problem, const fusion::ScRunOptions& base,
                  const std::vector<std::size_t>& lengths,
                  const std::vector<std::uint64_t>& seeds) {
    const fusion::PosteriorGrid exact = fusion::exact_posterior(problem);
    KlResult res;
    for (std::size_t n : lengths) {
        for (std::uint64_t s : seeds) {
            fusion::ScRunOptions opt = base;
            opt.bitstream_length = n;
            opt.seed = s;
            const fusion::ScRunResult run = fusion::sc_posterior(problem, opt);
            const double eps = fusion::kl_floor(n, problem.cell_count());
            res.rows.push_back({n, s, fusion::kl_divergence(exact, run.estimate, eps)});
        }
    }
    return res;
}

}  // namespace mtjsc::experiments
