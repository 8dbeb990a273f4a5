#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mtjsc/errors.hpp"
#include "mtjsc/experiments.hpp"
#include "mtjsc/fusion.hpp"
#include "mtjsc/logic.hpp"

using namespace mtjsc;
using namespace mtjsc::fusion;

namespace {

FusionProblem problem_for(std::size_t w, std::size_t h, Point target) {
    FusionProblem p;
    p.width = w;
    p.height = h;
    p.readings = synthesize_readings(p.sensors, target, 0.0, 0.0, 1);
    return p;
}

std::vector<std::uint64_t> seeds(std::uint64_t n) {
    std::vector<std::uint64_t> s;
    for (std::uint64_t i = 1; i <= n; ++i) s.push_back(i);
    return s;
}

}  // namespace

TEST_CASE("distance likelihood by hand") {
    FusionProblem p;
    p.readings = {{5.0, 0.0}, {10.0, 0.0}, {10.0, 0.0}};
    // Cell (3, 4) of the 64x64 grid sits at (3, 4); 5 units from sensor 1.
    const auto l = likelihoods(p, 3, 4);
    REQUIRE(l.size() == 6);
    CHECK(l[0] == doctest::Approx(1.0 / (std::sqrt(2.0 * std::numbers::pi) * 5.5)).epsilon(1e-12));
    CHECK(l[0] == doctest::Approx(0.0725).epsilon(0.001));
    for (double v : l) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("densities peak at the consistent cell") {
    const FusionProblem p = problem_for(64, 64, {40, 24});
    const auto l = likelihoods(p, 40, 24);
    for (std::size_t s = 0; s < 3; ++s) {
        const double sd = distance_sigma(p.readings[s].distance);
        CHECK(l[2 * s] == doctest::Approx(1.0 / (sd * std::sqrt(2.0 * std::numbers::pi))));
        CHECK(l[2 * s + 1] ==
              doctest::Approx(1.0 / (kBearingSigmaDeg * std::sqrt(2.0 * std::numbers::pi))));
    }
}

TEST_CASE("bearings") {
    CHECK(bearing_residual(359.0, 1.0) == doctest::Approx(2.0));
    CHECK(bearing_residual(1.0, 359.0) == doctest::Approx(2.0));
    CHECK(bearing_residual(10.0, 190.0) == doctest::Approx(180.0));
    CHECK(bearing_deg({0, 0}, {1, 1}) == doctest::Approx(45.0));
    CHECK(bearing_deg({0, 0}, {1, -1}) == doctest::Approx(315.0));
    CHECK(distance_sigma(20.0) == doctest::Approx(7.0));
}

TEST_CASE("posterior grid basics") {
    LikelihoodField flat{4, 3, {std::vector<double>(12, 0.3), std::vector<double>(12, 0.7)}};
    const PosteriorGrid u = posterior_from_field(flat);
    for (double w : u.weights()) CHECK(w == doctest::Approx(1.0 / 12));
    // Ties go to the lowest (x, y).
    CHECK(u.argmax() == std::pair<std::size_t, std::size_t>{0, 0});

    PosteriorGrid g(3, 2, {0, 5, 0, 5, 0, 1});
    g.normalize();
    CHECK(g.argmax() == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-12));

    PosteriorGrid z(2, 2, {0, 0, 0, 0});
    z.normalize();
    CHECK(z.at(1, 1) == 0.25);
    CHECK_THROWS_AS(PosteriorGrid(2, 2, {1, 2, 3}), ShapeMismatch);
}

TEST_CASE("exact posterior locates the target") {
    const FusionProblem p = problem_for(32, 32, {40, 24});
    const PosteriorGrid post = exact_posterior(p);
    CHECK(std::abs(post.sum() - 1.0) <= 1e-12);
    CHECK(post.argmax() == std::pair<std::size_t, std::size_t>{20, 12});

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> cell(1, 31);
    for (int i = 0; i < 20; ++i) {
        const std::size_t x = static_cast<std::size_t>(cell(rng));
        const std::size_t y = static_cast<std::size_t>(cell(rng));
        const auto q = exact_posterior(problem_for(32, 32, {2.0 * x, 2.0 * y}));
        CHECK(q.argmax() == std::pair<std::size_t, std::size_t>{x, y});
    }
}

TEST_CASE("channel rescaling leaves the posterior unchanged") {
    const FusionProblem p = problem_for(16, 16, {40, 24});
    const LikelihoodField base = likelihood_field(p);
    LikelihoodField scaled = base;
    const std::vector<double> c{0.9, 0.3, 1.0, 0.05, 0.6, 0.77};
    for (std::size_t ch = 0; ch < 6; ++ch) {
        for (double& v : scaled.values[ch]) v *= c[ch];
    }
    const PosteriorGrid a = posterior_from_field(base);
    const PosteriorGrid b = posterior_from_field(scaled);
    for (std::size_t i = 0; i < a.weights().size(); ++i) {
        CHECK(std::abs(a.weights()[i] - b.weights()[i]) <= 1e-12);
    }
    CHECK(a.argmax() == b.argmax());

    int kept = 0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        ScRunOptions o;
        o.bitstream_length = 256;
        o.seed = s;
        kept += sc_posterior(base, o).estimate.argmax() == sc_posterior(scaled, o).estimate.argmax();
    }
    CHECK(kept >= 9);
}

TEST_CASE("network shape") {
    CHECK(build_sc_network(problem_for(32, 32, {40, 24}), {}).netlist.terminal_count() == 6144);
    CHECK(build_sc_network(problem_for(64, 64, {40, 24}), {}).netlist.terminal_count() == 24576);

    const ScNetwork one = build_sc_network(problem_for(1, 1, {40, 24}), {});
    const auto sets = logic::extract_conflict_sets(one.netlist);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].members.size() == 6);

    const ScNetwork net = build_sc_network(problem_for(8, 8, {40, 24}), {});
    const auto lv = allocator::uniform_levels(64);
    for (double v : net.assignment.probability) {
        CHECK_NOTHROW(allocator::find_level(lv, v, 0));
    }
    // Each channel's strongest cell lands on the top level.
    for (std::size_t ch = 0; ch < 6; ++ch) {
        double mx = 0.0;
        for (std::size_t c = 0; c < 64; ++c) mx = std::max(mx, net.assignment.probability[6 * c + ch]);
        CHECK(mx == 1.0);
    }
}

TEST_CASE("ideal streams converge to the quantized posterior") {
    const FusionProblem p = problem_for(16, 16, {40, 24});
    ScRunOptions o;
    o.source = StreamSource::Ideal;
    o.bitstream_length = 256;
    const auto small = sc_posterior(p, o);
    o.bitstream_length = 16384;
    const auto large = sc_posterior(p, o);
    const double eps = kl_floor(16384, 256);
    const double kl_small = kl_divergence(small.quantized_exact, small.estimate, eps);
    const double kl_large = kl_divergence(large.quantized_exact, large.estimate, eps);
    CHECK(kl_large < kl_small);
    CHECK(kl_large < 0.005);
}

TEST_CASE("sc posterior is normalized and deterministic") {
    const FusionProblem p = problem_for(8, 8, {40, 24});
    ScRunOptions o;
    o.seed = 3;
    const auto a = sc_posterior(p, o);
    const auto b = sc_posterior(p, o);
    CHECK(a.estimate.weights() == b.estimate.weights());
    CHECK(a.sbg_energy == b.sbg_energy);
    CHECK(std::abs(a.estimate.sum() - 1.0) <= 1e-12);
    CHECK(a.terminals == 384);
    CHECK(a.matrix.columns() == a.clusters.cluster_count());
    CHECK(a.ops.writes == a.array.total() * (o.bitstream_length + 1));
    o.seed = 4;
    CHECK(sc_posterior(p, o).estimate.weights() != a.estimate.weights());
}

TEST_CASE("accuracy improves with length and degrades under variation") {
    const FusionProblem p = problem_for(32, 32, {40, 24});
    ScRunOptions o;
    const auto nominal = experiments::kl_sweep(p, o, {64, 128, 256}, seeds(10));
    CHECK(nominal.mean(64) > nominal.mean(128));
    CHECK(nominal.mean(128) > nominal.mean(256));

    o.sbg.variation.enabled = true;
    const auto varied = experiments::kl_sweep(p, o, {64, 128, 256}, seeds(10));
    CHECK(varied.mean(64) > varied.mean(128));
    CHECK(varied.mean(128) > varied.mean(256));
    for (std::size_t n : {64u, 128u, 256u}) CHECK(varied.mean(n) > nominal.mean(n));
}

TEST_CASE("KL divergence") {
    PosteriorGrid u(2, 2, {0.25, 0.25, 0.25, 0.25});
    CHECK(kl_divergence(u, u, 1e-9) == 0.0);

    const std::size_t n = 128;
    const double eps = kl_floor(n, 4);
    CHECK(eps == doctest::Approx(1.0 / 5120));
    PosteriorGrid point(2, 2, {1.0, 0.0, 0.0, 0.0});
    const double hand = 0.25 * std::log(0.25) + 0.75 * std::log(0.25 * 5120);
    CHECK(kl_divergence(u, point, eps) == doctest::Approx(hand).epsilon(1e-12));

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> a(9), b(9);
        for (double& v : a) v = w(rng);
        for (double& v : b) v = w(rng);
        PosteriorGrid pa(3, 3, a), pb(3, 3, b);
        pa.normalize();
        pb.normalize();
        CHECK(kl_divergence(pa, pb, 1e-12) >= 0.0);
    }
    CHECK_THROWS_AS(kl_divergence(u, PosteriorGrid(4, 1, {1, 0, 0, 0}), 1e-9), ShapeMismatch);
}

TEST_CASE("readings synthesis") {
    const std::vector<Point> sensors{{0, 0}, {0, 32}, {32, 0}};
    const auto clean = synthesize_readings(sensors, {40, 24}, 0, 0, 1);
    CHECK(clean[0].distance == doctest::Approx(std::hypot(40.0, 24.0)));
    CHECK(clean[1].bearing == doctest::Approx(360.0 + std::atan2(-8.0, 40.0) * 180 / std::numbers::pi));
    const auto noisy = synthesize_readings(sensors, {40, 24}, 2.0, 5.0, 7);
    CHECK(noisy[0].distance != clean[0].distance);
    CHECK(noisy[0].distance == synthesize_readings(sensors, {40, 24}, 2.0, 5.0, 7)[0].distance);
    for (const auto& r : noisy) {
        CHECK(r.bearing >= 0.0);
        CHECK(r.bearing < 360.0);
    }
}

TEST_CASE("problem validation") {
    FusionProblem p;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.readings = {{1, 0}, {1, 0}, {-1, 0}};
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("writers") {
    PosteriorGrid g(2, 1, {0.25, 0.75});
    std::ostringstream csv;
    write_posterior_csv(csv, g);
    CHECK(csv.str() == "x,y,weight\n0,0,0.25\n1,0,0.75\n");

    std::ostringstream pgm;
    write_pgm(pgm, g);
    const std::string s = pgm.str();
    CHECK(s.rfind("P5\n2 1\n255\n", 0) == 0);
    REQUIRE(s.size() == 11 + 2);
    CHECK(static_cast<unsigned char>(s[11]) == 85);
    CHECK(static_cast<unsigned char>(s[12]) == 255);
}
