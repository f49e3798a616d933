// Benchmark comparing the serial reference kernels against their OpenMP
// variants: product-space Hamiltonian application at a few sizes, and an
// ensemble of independent classical integrations.

#include <cstdio>
#include <random>

#include <omp.h>

#include "nkg/classical.hpp"
#include "nkg/kernels.hpp"

using namespace nkg;

namespace {

ModelConfig quantum_config(int modes_kmax_points) {
    ModelConfig cfg;
    cfg.n = 1;
    cfg.masses = Eigen::VectorXd::Ones(1);
    cfg.relativistic = true;
    cfg.chi = FormFactor::gaussian(0.05, 2.0);
    cfg.potential = Potential::gaussian_well(0.1, 1.5, 1);
    cfg.grid = KGrid::symmetric(2.0, modes_kmax_points);
    cfg.sigma = 0.5;
    return cfg;
}

double time_apply(const HamiltonianAssembly& h, Exec exec, int reps) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Eigen::VectorXcd x(h.dim()), y;
    for (int i = 0; i < h.dim(); ++i) x[i] = complexd(g(rng), g(rng));
    x /= x.norm();
    h.apply(x, y, exec); // warm up
    const double t0 = omp_get_wtime();
    for (int r = 0; r < reps; ++r) {
        h.apply(x, y, exec);
        x.swap(y);
    }
    return (omp_get_wtime() - t0) / reps;
}

double time_ensemble(const ModelConfig& cfg, Exec exec, int count) {
    ClassicalState u0 = ClassicalState::zero(1, cfg.grid.size());
    u0.p[0] = 0.3;
    u0.q[0] = 0.5;
    for (int i = 0; i < cfg.grid.size(); ++i)
        u0.alpha[i] = 0.2 * std::exp(-cfg.grid.points[i] * cfg.grid.points[i] / 4.0);
    std::vector<double> out(count);
    const double t0 = omp_get_wtime();
    kernels::map_indexed(count, exec, [&](int i) {
        ClassicalState u = u0;
        u.q[0] += 1e-3 * i;
        Trajectory traj = integrate(u, 0.5, 1e-3, Picture::direct, cfg, {.save_stride = 500});
        out[i] = xsigma_norm(traj.states.back(), cfg);
    });
    const double elapsed = omp_get_wtime() - t0;
    // consume the results so the loop cannot be elided
    double acc = 0.0;
    for (double v : out) acc += v;
    if (acc < 0.0) std::printf("impossible\n");
    return elapsed;
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());
    std::printf("%-34s %12s %12s %8s\n", "kernel", "serial [ms]", "omp [ms]", "speedup");

    struct Size {
        int n_x, n_max, reps;
    };
    for (const Size s : {Size{64, 4, 200}, Size{64, 8, 100}, Size{128, 8, 50}}) {
        ModelConfig cfg = quantum_config(3);
        ParticleGrid pg(s.n_x, 16.0);
        FockBasis fb = FockBasis::from_grid(cfg.grid, s.n_max);
        HamiltonianAssembly h(cfg, pg, fb, 0.2);

        // the two variants must agree exactly before timing means anything
        std::mt19937_64 rng(2);
        std::normal_distribution<double> g;
        Eigen::VectorXcd x(h.dim()), ys, yo;
        for (int i = 0; i < h.dim(); ++i) x[i] = complexd(g(rng), g(rng));
        h.apply(x, ys, Exec::serial);
        h.apply(x, yo, Exec::omp);
        if ((ys - yo).norm() != 0.0) {
            std::printf("MISMATCH between serial and omp apply at dim %d\n", h.dim());
            return 1;
        }

        const double ts = time_apply(h, Exec::serial, s.reps);
        const double to = time_apply(h, Exec::omp, s.reps);
        char label[64];
        std::snprintf(label, sizeof(label), "hamiltonian_apply dim=%d", h.dim());
        std::printf("%-34s %12.3f %12.3f %7.2fx\n", label, ts * 1e3, to * 1e3, ts / to);
    }

    {
        ModelConfig cfg = quantum_config(65);
        const int count = 64;
        const double ts = time_ensemble(cfg, Exec::serial, count);
        const double to = time_ensemble(cfg, Exec::omp, count);
        char label[64];
        std::snprintf(label, sizeof(label), "classical_ensemble n=%d", count);
        std::printf("%-34s %12.3f %12.3f %7.2fx\n", label, ts * 1e3, to * 1e3, ts / to);
    }
    return 0;
}
