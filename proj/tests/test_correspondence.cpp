#include <doctest.h>

#include <numbers>
#include <random>

#include "nkg/correspondence.hpp"

using namespace nkg;
using std::numbers::pi;

namespace {

ModelConfig quantum_config() {
    ModelConfig cfg;
    cfg.n = 1;
    cfg.masses = Eigen::VectorXd::Ones(1);
    cfg.relativistic = true;
    cfg.chi = FormFactor::gaussian(0.05, 2.0);
    cfg.potential = Potential::gaussian_well(0.1, 1.5, 1);
    cfg.grid = KGrid::symmetric(2.0, 3);
    cfg.sigma = 0.5;
    return cfg;
}

ModelConfig classical_config() {
    ModelConfig cfg = quantum_config();
    cfg.chi = FormFactor::gaussian(0.25, 2.0);
    cfg.grid = KGrid::symmetric(8.0, 129);
    return cfg;
}

ClassicalState center_state(const ModelConfig& cfg, double p0, double q0, double amp) {
    ClassicalState u = ClassicalState::zero(1, cfg.grid.size());
    u.p[0] = p0;
    u.q[0] = q0;
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        u.alpha[i] = amp * std::exp(-k * k / 4.0) * complexd(1.0, 0.5);
    }
    return u;
}

ClassicalState random_state(const ModelConfig& cfg, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g;
    ClassicalState u = ClassicalState::zero(cfg.dn(), cfg.grid.size());
    for (int j = 0; j < cfg.dn(); ++j) {
        u.p[j] = scale * g(rng);
        u.q[j] = scale * g(rng);
    }
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double e = std::exp(-cfg.grid.points[i] * cfg.grid.points[i] / 8.0);
        u.alpha[i] = scale * e * complexd(g(rng), g(rng));
    }
    return u;
}

TestPoint random_testpoint(const ModelConfig& cfg, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g;
    TestPoint xi = TestPoint::zero(cfg.dn(), cfg.grid.size());
    for (int j = 0; j < cfg.dn(); ++j) {
        xi.p0[j] = scale * g(rng);
        xi.q0[j] = scale * g(rng);
    }
    for (int i = 0; i < cfg.grid.size(); ++i)
        xi.alpha0[i] = scale * complexd(g(rng), g(rng));
    return xi;
}

} // namespace

TEST_CASE("q_phase: zero point, particle-only case, extended-precision oracle") {
    ModelConfig cfg = classical_config();
    std::mt19937_64 rng(3);
    ClassicalState u = random_state(cfg, rng);

    TestPoint zero = TestPoint::zero(cfg.dn(), cfg.grid.size());
    CHECK(std::abs(q_phase(zero, u, cfg)) == 0.0);

    TestPoint xi = random_testpoint(cfg, rng);
    xi.alpha0.setZero();
    ClassicalState u_part = u;
    u_part.alpha.setZero();
    const complexd got = q_phase(xi, u_part, cfg);
    CHECK(got.real() == 0.0);
    CHECK(got.imag() ==
          doctest::Approx(u.q[0] * xi.p0[0] - u.p[0] * xi.q0[0]).epsilon(1e-14));

    // extended-precision re-evaluation of the full phase
    for (int trial = 0; trial < 50; ++trial) {
        TestPoint y = random_testpoint(cfg, rng);
        ClassicalState v = random_state(cfg, rng);
        long double im = (long double)v.q[0] * y.p0[0] - (long double)v.p[0] * y.q0[0];
        long double re_field = 0.0L;
        for (int i = 0; i < cfg.grid.size(); ++i)
            re_field += (long double)cfg.grid.dk *
                        (long double)std::real(std::conj(y.alpha0[i]) * v.alpha[i]);
        const complexd oracle(0.0, (double)(im + std::sqrt(2.0L) * re_field));
        CHECK(std::abs(q_phase(y, v, cfg) - oracle) <= 1e-14 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("q_phase equals 2 pi i Re<xi~, u> with the rescaled test point") {
    ModelConfig cfg = classical_config();
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        TestPoint xi = random_testpoint(cfg, rng);
        ClassicalState u = random_state(cfg, rng);
        // xi~ = (z0/(2 i pi), alpha0/(sqrt(2) pi)): q-part p0/2pi, p-part -q0/2pi
        TestPoint xt = xi;
        xt.p0 = -xi.q0 / (2.0 * pi);
        xt.q0 = xi.p0 / (2.0 * pi);
        xt.alpha0 = xi.alpha0 / (std::sqrt(2.0) * pi);
        const complexd want(0.0, 2.0 * pi * re_inner_x0(xt, u, cfg.grid.dk));
        CHECK(std::abs(q_phase(xi, u, cfg) - want) <= 1e-13 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("b_symbol: field-free case and the vector-field identity") {
    ModelConfig cfg = classical_config();
    std::mt19937_64 rng(7);

    SUBCASE("chi = 0, V = 0 leaves only the kinetic pairing") {
        ModelConfig free_cfg = cfg;
        free_cfg.chi = FormFactor::custom([](double) { return 0.0; });
        free_cfg.potential = Potential::zero();
        for (int trial = 0; trial < 20; ++trial) {
            ClassicalState u = random_state(free_cfg, rng);
            TestPoint xi = random_testpoint(free_cfg, rng);
            xi.q0.setZero();
            xi.alpha0.setZero();
            const double want = -free_cfg.kinetic_grad(u.p[0], 0) * xi.p0[0];
            CHECK(b_symbol(0.3, xi, u, free_cfg) == doctest::Approx(want).epsilon(1e-13));
        }
    }

    SUBCASE("b(s, xi) = -2 pi Re<v(s,u), xi~> on 1000 random triples") {
        for (int trial = 0; trial < 1000; ++trial) {
            ClassicalState u = random_state(cfg, rng);
            TestPoint xi = random_testpoint(cfg, rng);
            const double s = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
            const double direct = b_symbol(s, xi, u, cfg);
            const double via_v = b_symbol_via_vector_field(s, xi, u, cfg);
            CHECK(direct == doctest::Approx(via_v).epsilon(1e-12));
        }
    }

    SUBCASE("refined-grid quadrature oracle") {
        // smooth profiles evaluable off-grid
        auto alpha_fn = [](double k) {
            return complexd(0.3, 0.1) * std::exp(-k * k / 3.0);
        };
        auto xi_fn = [](double k) {
            return complexd(0.1, -0.2) * std::exp(-(k - 0.5) * (k - 0.5) / 2.0);
        };
        ModelConfig fine = cfg;
        fine.grid = cfg.grid.refined(16);

        ClassicalState u = ClassicalState::zero(1, cfg.grid.size());
        u.p[0] = 0.2;
        u.q[0] = -0.4;
        TestPoint xi = TestPoint::zero(1, cfg.grid.size());
        xi.p0[0] = 0.3;
        xi.q0[0] = 0.6;
        ClassicalState uf = ClassicalState::zero(1, fine.grid.size());
        uf.p = u.p;
        uf.q = u.q;
        TestPoint xif = TestPoint::zero(1, fine.grid.size());
        xif.p0 = xi.p0;
        xif.q0 = xi.q0;
        for (int i = 0; i < cfg.grid.size(); ++i) {
            u.alpha[i] = alpha_fn(cfg.grid.points[i]);
            xi.alpha0[i] = xi_fn(cfg.grid.points[i]);
        }
        for (int i = 0; i < fine.grid.size(); ++i) {
            uf.alpha[i] = alpha_fn(fine.grid.points[i]);
            xif.alpha0[i] = xi_fn(fine.grid.points[i]);
        }
        CHECK(b_symbol(0.7, xi, u, cfg) ==
              doctest::Approx(b_symbol(0.7, xif, uf, fine)).epsilon(1e-6));
    }
}

TEST_CASE("characteristic_quantum: unit value at zero, modulus bound, gaussian oracle") {
    ModelConfig cfg = quantum_config();
    ParticleGrid pg(64, 12.0);
    FockBasis fb = FockBasis::from_grid(cfg.grid, 8);
    const double hbar = 0.25;
    HamiltonianAssembly h(cfg, pg, fb, hbar);

    ClassicalState u0 = center_state(cfg, 0.2, 0.4, 0.08);
    QuantumState psi = coherent_state(u0, hbar, pg, fb, cfg);

    TestPoint zero = TestPoint::zero(1, cfg.grid.size());
    CHECK(std::abs(characteristic_quantum(psi, zero, h) - complexd(1.0)) <= 1e-12);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        TestPoint xi = random_testpoint(cfg, rng, 1.0);
        const double f = 0.25 / xi.x0_norm(cfg.grid.dk); // keep the displaced
        xi.p0 *= f;                                      // state inside the cap
        xi.q0 *= f;
        xi.alpha0 *= f;
        const complexd val = characteristic_quantum(psi, xi, h);
        CHECK(std::abs(val) <= 1.0 + 1e-12);

        // closed-form gaussian/coherent overlap:
        //   e^{2 pi i Re<xi,u0>} e^{-pi^2 hbar (|z0|^2 + |alpha0|^2/2)}
        const double z2 = xi.p0.squaredNorm() + xi.q0.squaredNorm();
        const double a2 = cfg.grid.dk * xi.alpha0.squaredNorm();
        const complexd oracle = std::exp(complexd(0.0, 2.0 * pi *
                                                  re_inner_x0(xi, u0, cfg.grid.dk))) *
                                std::exp(-pi * pi * hbar * (z2 + a2 / 2.0));
        CHECK(std::abs(val - oracle) <= 1e-6);
    }
}

TEST_CASE("characteristic_residual: trivial zeros and refinement order") {
    ModelConfig cfg = classical_config();
    ClassicalState u0 = center_state(cfg, 0.3, 0.5, 0.2);
    std::mt19937_64 rng(19);
    TestPoint xi = random_testpoint(cfg, rng, 0.4);

    SUBCASE("t = t0 gives exactly zero") {
        ResidualResult r = characteristic_residual({u0}, xi, 0.5, 0.5, 1e-2, cfg);
        CHECK(r.residual == 0.0);
    }

    SUBCASE("xi = 0 gives exactly zero") {
        TestPoint zero = TestPoint::zero(1, cfg.grid.size());
        ResidualResult r = characteristic_residual({u0}, zero, 0.0, 0.4, 1e-2, cfg);
        CHECK(r.residual <= 1e-15);
    }

    SUBCASE("Dirac sample: defect converges at the trapezoid order") {
        const double t = 0.5;
        const double r1 = characteristic_residual({u0}, xi, 0.0, t, t / 40.0, cfg).residual;
        const double r2 = characteristic_residual({u0}, xi, 0.0, t, t / 80.0, cfg).residual;
        const double order = std::log2(r1 / r2);
        CHECK(order >= 1.8);
    }
}

TEST_CASE("characteristic_residual: gaussian cloud stays within Monte-Carlo noise") {
    ModelConfig cfg = classical_config();
    ClassicalState u0 = center_state(cfg, 0.3, 0.5, 0.2);
    std::vector<ClassicalState> cloud = gaussian_cloud(u0, 0.5, 0.3, 128, cfg, 99);
    std::mt19937_64 rng(21);
    TestPoint xi = random_testpoint(cfg, rng, 0.8);
    ResidualResult r = characteristic_residual(cloud, xi, 0.0, 0.5, 5e-3, cfg);
    CHECK(r.residual <= 3.0 * r.mc_stderr);
}

TEST_CASE("pushforward_check: orders agree, fault injection is caught") {
    ModelConfig cfg = classical_config();
    ClassicalState u0 = center_state(cfg, 0.3, 0.5, 0.2);
    std::vector<ClassicalState> cloud = gaussian_cloud(u0, 0.3, 0.2, 16, cfg, 7);
    std::vector<TestPoint> panel = default_test_panel(cfg, 0.5, 4, 4, 11);

    CHECK(pushforward_check(cloud, 0.0, 1e-2, panel, cfg) == 0.0);
    CHECK(pushforward_check(cloud, 0.4, 1e-2, panel, cfg) <= 1e-12);
    CHECK(pushforward_check(cloud, 0.4, 1e-2, panel, cfg, 0.05) > 1e-6);
}

TEST_CASE("hbar_sweep: decoupled system shows shrinking errors and monotone columns") {
    ModelConfig cfg = quantum_config();
    cfg.chi = FormFactor::custom([](double) { return 0.0; });
    cfg.potential = Potential::zero();

    ClassicalState u0 = center_state(cfg, 0.1, 0.3, 0.0);
    SweepOptions opts;
    opts.base_n_x = 32;
    opts.max_n_x = 128;
    opts.length = 12.0;
    opts.evolve.force_krylov = true;
    opts.panel_scale = 0.15;

    SweepReport rep = hbar_sweep(u0, {0.4, 0.2, 0.1}, {0.5, 1.0}, cfg, opts);
    REQUIRE(rep.completed_hbars == 3);
    CHECK(rep.warnings.empty());
    CHECK(rep.monotone(0.10));

    // the characteristic-function error at fixed t strictly decreases with hbar
    double prev = 1e9;
    for (const auto& row : rep.rows) {
        if (row.t != 1.0) continue;
        CHECK(row.err_char < prev);
        prev = row.err_char;
        CHECK(row.leakage <= opts.leak_threshold);
    }
}

TEST_CASE("hbar_sweep rejects a non-decreasing hbar list") {
    ModelConfig cfg = quantum_config();
    ClassicalState u0 = center_state(cfg, 0.1, 0.3, 0.05);
    CHECK_THROWS_AS(hbar_sweep(u0, {0.1, 0.2}, {0.5}, cfg, {}), config_error);
}

TEST_CASE("free-field compatibility: rotated-frame observables match the pulled-back flow") {
    // the error of <a_i> in the rotated frame against e^{+i t omega} alpha_cl(t)
    // equals the direct-frame error against alpha_cl(t), because both sides
    // rotate by the same unimodular factor
    ModelConfig cfg = quantum_config();
    ParticleGrid pg(64, 12.0);
    FockBasis fb = FockBasis::from_grid(cfg.grid, 6);
    const double hbar = 0.25;
    HamiltonianAssembly h(cfg, pg, fb, hbar);
    ClassicalState u0 = center_state(cfg, 0.1, 0.3, 0.08);
    const double t = 0.7;

    QuantumState psi = evolve(coherent_state(u0, hbar, pg, fb, cfg), h, t);
    QuantumState rotated = interaction_picture(psi, h, t);
    Trajectory ref = integrate(u0, t, 1e-3, Picture::direct, cfg);
    const ClassicalState ucl = ref.states.back();
    const ClassicalState pulled = free_flow(-t, ucl, cfg);

    const ObservableRecord direct_obs = observables(psi, h);
    const ObservableRecord rotated_obs = observables(rotated, h);
    const double rdk = std::sqrt(cfg.grid.dk);
    for (int i = 0; i < fb.modes(); ++i) {
        const double err_direct = std::abs(direct_obs.a_modes[i] - rdk * ucl.alpha[i]);
        const double err_rotated = std::abs(rotated_obs.a_modes[i] - rdk * pulled.alpha[i]);
        CHECK(err_rotated == doctest::Approx(err_direct).epsilon(1e-9));
    }
    // particle observables are untouched by the field rotation
    CHECK(rotated_obs.q_mean == doctest::Approx(direct_obs.q_mean).epsilon(1e-12));
    CHECK(rotated_obs.p_mean == doctest::Approx(direct_obs.p_mean).epsilon(1e-12));
}
