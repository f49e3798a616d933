// Acceptance suite: one check per numbered criterion, each printed as a
// single [PASS]/[FAIL] line with the measured values.  Exit code is nonzero
// when any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

#include "nkg/assumptions.hpp"
#include "nkg/correspondence.hpp"
#include "nkg/estimates.hpp"
#include "nkg/kernels.hpp"

using namespace nkg;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

double wall() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

// default classical preset: semi-relativistic particle, gaussian chi and well
ModelConfig classical_preset() {
    ModelConfig cfg;
    cfg.n = 1;
    cfg.masses = Eigen::VectorXd::Ones(1);
    cfg.relativistic = true;
    cfg.chi = FormFactor::gaussian(0.25, 2.0);
    cfg.potential = Potential::gaussian_well(0.1, 1.5, 1);
    cfg.grid = KGrid::symmetric(8.0, 129);
    cfg.sigma = 0.5;
    return cfg;
}

// quantum-scale preset: 3 field modes, small coupling
ModelConfig quantum_preset() {
    ModelConfig cfg = classical_preset();
    cfg.chi = FormFactor::gaussian(0.05, 2.0);
    cfg.grid = KGrid::symmetric(0.5, 3);
    return cfg;
}

ClassicalState classical_initial(const ModelConfig& cfg) {
    ClassicalState u = ClassicalState::zero(1, cfg.grid.size());
    u.p[0] = 0.3;
    u.q[0] = 0.5;
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        u.alpha[i] = std::exp(-k * k / 4.0) * complexd(0.2, 0.1);
    }
    return u;
}

ClassicalState quantum_initial(const ModelConfig& cfg) {
    ClassicalState u = ClassicalState::zero(1, cfg.grid.size());
    u.p[0] = 0.1;
    u.q[0] = 0.3;
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        u.alpha[i] = 0.08 * std::exp(-k * k / 4.0);
    }
    return u;
}

ClassicalState random_state(const ModelConfig& cfg, std::mt19937_64& rng, double scale) {
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

void criterion_1_conservation() {
    const ModelConfig cfg = classical_preset();
    const ClassicalState u0 = classical_initial(cfg);
    const double t0 = wall();
    Trajectory traj = integrate(u0, 10.0, 1e-3, Picture::direct, cfg, {.save_stride = 10});
    const double drift = energy_drift(traj, cfg);
    const double runtime = wall() - t0;

    // order check on a window where the drift is safely above roundoff
    Trajectory coarse = integrate(u0, 2.0, 4e-3, Picture::direct, cfg, {.save_stride = 25});
    Trajectory fine = integrate(u0, 2.0, 2e-3, Picture::direct, cfg, {.save_stride = 50});
    const double ratio = energy_drift(coarse, cfg) / energy_drift(fine, cfg);

    const bool pass = drift < 1e-6 && ratio >= 8.0 && ratio <= 32.0 && runtime < 10.0;
    report(1, pass,
           fmt("classical conservation: drift %.3e (< 1e-6), halving ratio %.1f (~16), "
               "runtime %.2f s (< 10)",
               drift, ratio, runtime));
}

void criterion_2_picture_equivalence() {
    const ModelConfig cfg = classical_preset();
    const ClassicalState u0 = classical_initial(cfg);
    const double T = 5.0, dt = 1e-3;
    Trajectory direct = integrate(u0, T, dt, Picture::direct, cfg, {.save_stride = 5000});
    Trajectory rotated = integrate(u0, T, dt, Picture::interaction, cfg, {.save_stride = 5000});
    const ClassicalState mapped =
        to_direct_picture(rotated, static_cast<int>(rotated.states.size()) - 1, cfg);
    const double diff = xsigma_norm(direct.states.back() - mapped, cfg);
    report(2, diff < 1e-8,
           fmt("picture equivalence at T = 5: X^sigma difference %.3e (< 1e-8)", diff));
}

void criterion_3_duhamel() {
    const ModelConfig cfg = classical_preset();
    const ClassicalState u0 = classical_initial(cfg);
    const double T = 0.5;
    double res[3];
    const int steps[3] = {64, 128, 256};
    for (int l = 0; l < 3; ++l) {
        Trajectory traj = integrate(u0, T, T / steps[l], Picture::direct, cfg);
        res[l] = duhamel_residual(traj, cfg);
    }
    const double order1 = std::log2(res[0] / res[1]);
    const double order2 = std::log2(res[1] / res[2]);
    const double order = std::min(order1, order2);
    report(3, order >= 3.5,
           fmt("Duhamel residual refinement: residuals %.2e/%.2e/%.2e, observed order %.2f "
               "(>= 3.5)",
               res[0], res[1], res[2], order));
}

void criterion_4_interaction_bounds() {
    const ModelConfig cfg = classical_preset();
    std::mt19937_64 rng(101);
    const GradILipschitz lip = grad_I_lipschitz(cfg);
    int violations_i = 0, violations_ii = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ClassicalState u1 = random_state(cfg, rng, 1.0);
        const ClassicalState u2 = random_state(cfg, rng, 1.0);
        const double g1 = grad_I(u1.q, u1.alpha, 0, cfg);
        const double a1 = std::sqrt(cfg.grid.dk) * u1.alpha.norm();
        if (std::abs(g1) > grad_I_bound(cfg, a1) * (1.0 + 1e-12)) ++violations_i;

        const double lhs = std::abs(g1 - grad_I(u2.q, u2.alpha, 0, cfg));
        const double da = std::sqrt(cfg.grid.dk) * (u1.alpha - u2.alpha).norm();
        const double dq = std::abs(u1.q[0] - u2.q[0]);
        const double rhs = lip.alpha_coeff * da +
                           lip.q_coeff * dq * gsigma_norm(u2.alpha, cfg, cfg.sigma);
        if (lhs > rhs * (1.0 + 1e-12)) ++violations_ii;
    }
    report(4, violations_i == 0 && violations_ii == 0,
           fmt("interaction-gradient bounds on 1000 samples: %d norm violations, %d Lipschitz "
               "violations (need 0)",
               violations_i, violations_ii));
}

void criterion_5_gronwall() {
    const ModelConfig cfg = classical_preset();
    const ClassicalState base = classical_initial(cfg);
    std::mt19937_64 rng(202);
    std::vector<std::pair<ClassicalState, ClassicalState>> pairs;
    for (int i = 0; i < 100; ++i) {
        ClassicalState a = base;
        // random O(1) starting point plus a small random perturbation
        ClassicalState jitter = random_state(cfg, rng, 0.3);
        a += jitter;
        ClassicalState delta = random_state(cfg, rng, 1e-8);
        pairs.emplace_back(a, a + delta);
    }
    std::vector<int> ok(pairs.size(), 0);
    kernels::map_indexed(static_cast<int>(pairs.size()), Exec::omp, [&](int i) {
        GronwallReport rep =
            gronwall_divergence(pairs[i].first, pairs[i].second, 5.0, 1e-3, cfg);
        ok[i] = rep.envelope_ok ? 1 : 0;
    });
    int violations = 0;
    for (int v : ok) violations += 1 - v;
    report(5, violations == 0,
           fmt("Gronwall envelope on 100 perturbation pairs over [0,5]: %d violations (need 0)",
               violations));
}

// shared certificate run used by criteria 6, 7 and 11
EstimateSuite run_certificates(const ModelConfig& cfg) {
    EstimateSuiteOptions opts;
    opts.samples = 1000;
    opts.seed = 31415;
    opts.envelope_samples = 32;
    ParticleGrid pgrid(128, 16.0);
    return run_suite(cfg, pgrid, 8, {0.4, 0.2, 0.1, 0.05}, opts);
}

const EstimateCase* find_case(const EstimateSuite& suite, const std::string& name) {
    for (const auto& c : suite.cases)
        if (c.name == name) return &c;
    return nullptr;
}

void criterion_6_fock_algebra(const EstimateSuite& suite) {
    const char* names[] = {"ladder_commutator",     "annihilate_number_bound",
                           "create_number_bound",   "annihilate_field_bound",
                           "create_field_bound",    "field_dominates_number",
                           "number_shift_bound"};
    bool pass = true;
    std::string detail;
    for (const char* n : names) {
        const EstimateCase* c = find_case(suite, n);
        if (!c || !c->pass || !c->hbar_uniform) {
            pass = false;
            detail += std::string(" ") + n;
        }
    }
    report(6, pass,
           pass ? "Fock algebra: commutator to 1e-12 and ladder estimates, 1000 states x 4 "
                  "hbar, zero violations, trend flat"
                : "Fock algebra FAILURES:" + detail);
}

void criterion_7_nelson(const EstimateSuite& suite) {
    const ModelConfig cfg = quantum_preset();
    ParticleGrid pgrid(64, 16.0);
    FockBasis fbasis = FockBasis::from_grid(cfg.grid, 4); // dim 64 * 35 = 2240
    HamiltonianAssembly h(cfg, pgrid, fbasis, 0.2);
    const double herm = h.hermiticity_deficit();

    const double t0 = wall();
    h.eigendecomposition();
    const double eig_time = wall() - t0;

    const ClassicalState u0 = quantum_initial(cfg);
    QuantumState psi0 = coherent_state(u0, 0.2, pgrid, fbasis, cfg);
    double unit_drift = 0.0;
    for (double t : {0.5, 1.0, 1.5, 2.0}) {
        QuantumState psi = evolve(psi0, h, t);
        unit_drift = std::max(unit_drift, std::abs(psi.norm() - 1.0));
    }

    const EstimateCase* lower = find_case(suite, "form_equivalence_lower");
    const EstimateCase* upper = find_case(suite, "form_equivalence_upper");
    const bool sandwich = lower && upper && lower->pass && upper->pass;

    const bool pass = herm < 1e-12 && unit_drift < 1e-10 && sandwich && eig_time < 60.0;
    report(7, pass,
           fmt("Nelson assembly: hermiticity %.1e (< 1e-12), unitarity drift %.1e (< 1e-10), "
               "form sandwich %s, dim-2240 eigendecomposition %.1f s (< 60)",
               herm, unit_drift, sandwich ? "pass" : "FAIL", eig_time));
}

void criterion_8_coherent_moments() {
    const ModelConfig cfg = quantum_preset();
    ParticleGrid pgrid(64, 16.0);
    FockBasis fbasis = FockBasis::from_grid(cfg.grid, 8);
    const double hbar = 0.2;
    HamiltonianAssembly h(cfg, pgrid, fbasis, hbar);
    const ClassicalState u0 = quantum_initial(cfg);
    QuantumState psi = coherent_state(u0, hbar, pgrid, fbasis, cfg);

    const ObservableRecord obs = observables(psi, h);
    const double want = std::pow(gsigma_norm(u0.alpha, cfg, cfg.sigma), 2.0);
    const double moment_err = std::abs(obs.dgamma_sigma - want) / std::max(1e-30, want);

    const std::vector<TestPoint> panel = default_test_panel(cfg, 0.2, 8, 8, 555);
    double char_err = 0.0;
    for (const auto& xi : panel) {
        const double z2 = xi.p0.squaredNorm() + xi.q0.squaredNorm();
        const double a2 = cfg.grid.dk * xi.alpha0.squaredNorm();
        const complexd oracle =
            std::exp(complexd(0.0, 2.0 * pi * re_inner_x0(xi, u0, cfg.grid.dk))) *
            std::exp(-pi * pi * hbar * (z2 + a2 / 2.0));
        char_err = std::max(char_err,
                            std::abs(characteristic_quantum(psi, xi, h) - oracle));
    }
    const bool pass = moment_err < 1e-6 && char_err < 1e-6;
    report(8, pass,
           fmt("coherent-state moments: field-moment relative error %.2e (< 1e-6), "
               "characteristic-function error vs gaussian overlap %.2e (< 1e-6)",
               moment_err, char_err));
}

void criterion_9_correspondence() {
    const ModelConfig cfg = quantum_preset();
    const ClassicalState u0 = quantum_initial(cfg);
    SweepOptions opts;
    opts.seed = 777;
    const double t0 = wall();
    SweepReport rep = hbar_sweep(u0, {0.4, 0.2, 0.1, 0.05}, {0.5, 1.0}, cfg, opts);
    const double runtime = wall() - t0;

    const bool complete = rep.completed_hbars == 4 && rep.warnings.empty();
    const bool monotone = rep.monotone(0.10);
    double smallest_char = 0.0;
    for (const auto& r : rep.rows)
        if (r.hbar == 0.05) smallest_char = std::max(smallest_char, r.err_char);
    const bool pass = complete && monotone && smallest_char < 0.05 && runtime < 900.0;
    report(9, pass,
           fmt("Bohr correspondence sweep: %d/4 hbar complete, monotone(10%%) %s, smallest-hbar "
               "characteristic error %.3f (< 0.05), runtime %.0f s (< 900)",
               rep.completed_hbars, monotone ? "yes" : "NO", smallest_char, runtime));
}

void criterion_10_transport_identity() {
    const ModelConfig cfg = classical_preset();
    const ClassicalState u0 = classical_initial(cfg);
    std::mt19937_64 rng(404);
    std::normal_distribution<double> g;
    TestPoint xi = TestPoint::zero(1, cfg.grid.size());
    xi.p0[0] = 0.5 * g(rng);
    xi.q0[0] = 0.5 * g(rng);
    for (int i = 0; i < cfg.grid.size(); ++i)
        xi.alpha0[i] = 0.3 * std::exp(-cfg.grid.points[i] * cfg.grid.points[i] / 8.0) *
                       complexd(g(rng), g(rng));

    const double T = 1.0;
    const double r1 = characteristic_residual({u0}, xi, 0.0, T, T / 100.0, cfg).residual;
    const double r2 = characteristic_residual({u0}, xi, 0.0, T, T / 200.0, cfg).residual;
    const double order = std::log2(r1 / r2);

    std::vector<ClassicalState> cloud = gaussian_cloud(u0, 0.5, 0.3, 512, cfg, 808);
    ResidualResult mc = characteristic_residual(cloud, xi, 0.0, T, 2e-3, cfg);
    const bool noise_ok = mc.residual <= 3.0 * mc.mc_stderr;

    const bool pass = order >= 1.8 && noise_ok;
    report(10, pass,
           fmt("transport identity: Dirac refinement order %.2f (>= 1.8), 512-sample residual "
               "%.2e vs 3 x stderr %.2e (%s)",
               order, mc.residual, 3.0 * mc.mc_stderr, noise_ok ? "ok" : "FAIL"));
}

void criterion_11_envelopes(const EstimateSuite& suite) {
    const char* names[] = {"position_envelope", "momentum_envelope", "field_moment_envelope"};
    bool pass = true;
    std::string detail;
    for (const char* n : names) {
        const EstimateCase* c = find_case(suite, n);
        if (!c || !c->pass) {
            pass = false;
            detail += std::string(" ") + n;
        }
    }
    report(11, pass,
           pass ? "propagation envelopes: one frozen exponential envelope holds across the "
                  "whole hbar sweep for <q^2>, <p^2>, <dGamma>"
                : "propagation envelope FAILURES:" + detail);
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1_conservation();
    criterion_2_picture_equivalence();
    criterion_3_duhamel();
    criterion_4_interaction_bounds();
    criterion_5_gronwall();

    const EstimateSuite suite = run_certificates(quantum_preset());
    criterion_6_fock_algebra(suite);
    criterion_7_nelson(suite);
    criterion_8_coherent_moments();
    criterion_9_correspondence();
    criterion_10_transport_identity();
    criterion_11_envelopes(suite);

    std::printf("%d criterion failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
