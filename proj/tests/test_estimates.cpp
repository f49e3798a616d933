#include <doctest.h>

#include "nkg/estimates.hpp"

using namespace nkg;

namespace {

ModelConfig quantum_config() {
    ModelConfig cfg;
    cfg.n = 1;
    cfg.masses = Eigen::VectorXd::Ones(1);
    cfg.relativistic = true;
    cfg.chi = FormFactor::gaussian(0.1, 2.0);
    cfg.potential = Potential::gaussian_well(0.1, 1.5, 1);
    cfg.grid = KGrid::symmetric(2.0, 3);
    cfg.sigma = 0.5;
    return cfg;
}

} // namespace

TEST_CASE("run_suite: all cases pass on the default configuration") {
    ModelConfig cfg = quantum_config();
    ParticleGrid pg(64, 12.0);
    EstimateSuiteOptions opts;
    opts.samples = 200; // smaller than production for test runtime
    opts.envelope_samples = 16;
    EstimateSuite suite = run_suite(cfg, pg, 6, {0.4, 0.2, 0.1}, opts);

    CHECK(suite.all_pass);
    CHECK(suite.cases.size() >= 12);
    for (const auto& c : suite.cases) {
        INFO(c.name, ": worst ratio ", c.worst_ratio);
        CHECK(c.pass);
        CHECK(c.hbar_uniform);
        CHECK(c.samples > 0);
        CHECK(c.worst_per_hbar.size() == 3);
    }
}

TEST_CASE("run_suite: reproducible from the seed") {
    ModelConfig cfg = quantum_config();
    ParticleGrid pg(64, 12.0);
    EstimateSuiteOptions opts;
    opts.samples = 50;
    opts.envelope_samples = 8;
    opts.seed = 777;
    EstimateSuite a = run_suite(cfg, pg, 4, {0.4, 0.2}, opts);
    EstimateSuite b = run_suite(cfg, pg, 4, {0.4, 0.2}, opts);
    REQUIRE(a.cases.size() == b.cases.size());
    for (size_t i = 0; i < a.cases.size(); ++i)
        CHECK(a.cases[i].worst_ratio == b.cases[i].worst_ratio);
}

TEST_CASE("replay format round-trips a complex vector") {
    Eigen::VectorXcd v(3);
    v << complexd(1.5, -2.25), complexd(0.0, 1e-17), complexd(-3.0, 4.0);
    const Eigen::VectorXcd back = parse_replay(replay_format(v));
    REQUIRE(back.size() == v.size());
    for (int i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);
    CHECK_THROWS_AS(parse_replay("0:bad"), std::exception);
}

TEST_CASE("run_suite: chi = 0 degenerates the sandwich to H = H0 + V and still passes") {
    ModelConfig cfg = quantum_config();
    cfg.chi = FormFactor::custom([](double) { return 0.0; });
    ParticleGrid pg(64, 12.0);
    EstimateSuiteOptions opts;
    opts.samples = 30;
    opts.envelope_samples = 4;
    EstimateSuite suite = run_suite(cfg, pg, 4, {0.4, 0.25}, opts);
    for (const auto& c : suite.cases) {
        INFO(c.name);
        CHECK(c.pass);
    }
}
