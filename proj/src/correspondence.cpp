#include "nkg/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nkg/kernels.hpp"

namespace nkg {

using std::numbers::pi;

TestPoint TestPoint::zero(int dn, int n_modes) {
    TestPoint xi;
    xi.p0 = Eigen::VectorXd::Zero(dn);
    xi.q0 = Eigen::VectorXd::Zero(dn);
    xi.alpha0 = Eigen::VectorXcd::Zero(n_modes);
    return xi;
}

double TestPoint::x0_norm(double dk) const {
    return std::sqrt(p0.squaredNorm() + q0.squaredNorm() + dk * alpha0.squaredNorm());
}

complexd q_phase(const TestPoint& xi, const ClassicalState& u, const ModelConfig& cfg) {
    if (xi.alpha0.size() != u.alpha.size())
        throw shape_error("q_phase: incompatible mode sets");
    // Im<z, z0> = q . p0 - p . q0
    const double im_part = u.q.dot(xi.p0) - u.p.dot(xi.q0);
    double re_field = 0.0;
    for (int i = 0; i < xi.alpha0.size(); ++i)
        re_field += std::real(std::conj(xi.alpha0[i]) * u.alpha[i]);
    re_field *= cfg.grid.dk;
    return complexd(0.0, im_part + std::sqrt(2.0) * re_field);
}

double re_inner_x0(const TestPoint& xi, const ClassicalState& u, double dk) {
    double s = xi.p0.dot(u.p) + xi.q0.dot(u.q);
    for (int i = 0; i < xi.alpha0.size(); ++i)
        s += dk * std::real(std::conj(xi.alpha0[i]) * u.alpha[i]);
    return s;
}

complexd characteristic_quantum(const QuantumState& psi, const TestPoint& xi,
                                const HamiltonianAssembly& h) {
    if (xi.alpha0.size() != h.fbasis().modes())
        throw shape_error("characteristic_quantum: mode-set mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw config_error("characteristic_quantum: state must be normalized");
    // W1 argument 2 pi i (q0 + i p0), W2 argument sqrt(2) pi alpha0
    const complexd z = complexd(0.0, 2.0 * pi) * complexd(xi.q0[0], xi.p0[0]);
    const Eigen::MatrixXcd w1 = weyl_particle(h.pgrid(), z, psi.hbar);
    const Eigen::MatrixXcd w2 = weyl_field(h.fbasis(), std::sqrt(2.0) * pi * xi.alpha0, psi.hbar);
    auto m = psi.matrix(h.pgrid().size());
    const Eigen::MatrixXcd moved = w1 * m * w2.transpose();
    return (m.conjugate().cwiseProduct(moved)).sum();
}

namespace {

// g_j(s)(k) = (chi/sqrt(omega)) e^{-2 pi i k q_j + i s omega(k)}
Eigen::VectorXcd g_of_s(double s, double qj, const ModelConfig& cfg) {
    Eigen::VectorXcd g(cfg.grid.size());
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        const double w = cfg.dispersion.omega(k);
        g[i] = cfg.chi.eval(k) / std::sqrt(w) * std::polar(1.0, -2.0 * pi * k * qj + s * w);
    }
    return g;
}

} // namespace

double b_symbol(double s, const TestPoint& xi, const ClassicalState& u, const ModelConfig& cfg) {
    if (xi.alpha0.size() != cfg.grid.size() || u.alpha.size() != cfg.grid.size())
        throw shape_error("b_symbol: incompatible mode sets");
    complexd acc = 0.0;
    const Eigen::VectorXd grad_v = cfg.potential.gradient(u.q);
    for (int j = 0; j < cfg.n; ++j) {
        acc += -cfg.kinetic_grad(u.p[j], j) * xi.p0[j] - grad_v[j] * xi.q0[j];
        const Eigen::VectorXcd gj = g_of_s(s, u.q[j], cfg);
        complexd field_term = 0.0, source_term = 0.0;
        for (int i = 0; i < cfg.grid.size(); ++i) {
            const double k = cfg.grid.points[i];
            const complexd bj0 = complexd(0.0, 2.0 * pi * k * xi.q0[j]) * gj[i];
            field_term += std::conj(u.alpha[i]) * bj0 + std::conj(bj0) * u.alpha[i];
            source_term += std::conj(xi.alpha0[i]) * gj[i] - std::conj(gj[i]) * xi.alpha0[i];
        }
        acc += cfg.grid.dk * field_term;
        acc += complexd(0.0, 1.0 / std::sqrt(2.0)) * cfg.grid.dk * source_term;
    }
    return discard_imag(acc, 1e-12, "b_symbol");
}

double b_symbol_via_vector_field(double s, const TestPoint& xi, const ClassicalState& u,
                                 const ModelConfig& cfg) {
    const ClassicalState v = vector_field(s, u, cfg);
    // xi~ = (z0/(2 i pi), alpha0/(sqrt(2) pi)) has q-part p0/(2 pi) and
    // p-part -q0/(2 pi)
    double particle = 0.0;
    for (int j = 0; j < cfg.n; ++j)
        particle += v.q[j] * xi.p0[j] / (2.0 * pi) - v.p[j] * xi.q0[j] / (2.0 * pi);
    double field = 0.0;
    for (int i = 0; i < cfg.grid.size(); ++i)
        field += std::real(std::conj(v.alpha[i]) * xi.alpha0[i]) / (std::sqrt(2.0) * pi);
    field *= cfg.grid.dk;
    return -2.0 * pi * (particle + field);
}

namespace {

// phase pairing used by the transport identity, on X^sigma
double re_inner_sigma(const TestPoint& xi, const ClassicalState& u, const ModelConfig& cfg) {
    double s = xi.p0.dot(u.p) + xi.q0.dot(u.q);
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double w = std::pow(cfg.dispersion.omega(cfg.grid.points[i]), 2.0 * cfg.sigma);
        s += cfg.grid.dk * w * std::real(std::conj(xi.alpha0[i]) * u.alpha[i]);
    }
    return s;
}

ClassicalState rk4_rotated_step(double t, const ClassicalState& u, double h,
                                const ModelConfig& cfg) {
    ClassicalState k1 = vector_field(t, u, cfg);
    ClassicalState k2 = vector_field(t + h / 2.0, u + (h / 2.0) * k1, cfg);
    ClassicalState k3 = vector_field(t + h / 2.0, u + (h / 2.0) * k2, cfg);
    ClassicalState k4 = vector_field(t + h, u + h * k3, cfg);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

ResidualResult characteristic_residual(const std::vector<ClassicalState>& samples,
                                       const TestPoint& xi, double t0, double t, double dt,
                                       const ModelConfig& cfg, Exec exec) {
    ResidualResult res;
    res.n_samples = static_cast<int>(samples.size());
    if (samples.empty()) return res;
    if (t < t0) throw config_error("characteristic_residual: need t >= t0");

    const long n_steps = std::lround(std::ceil((t - t0) / dt - 1e-12));
    std::vector<complexd> defect(samples.size());

    kernels::map_indexed(res.n_samples, exec, [&](int is) {
        ClassicalState u = samples[is];
        const double h = n_steps > 0 ? (t - t0) / double(n_steps) : 0.0;
        complexd integral = 0.0;
        complexd f_first = 0.0, f_last = 0.0;
        for (long step = 0; step <= n_steps; ++step) {
            const double s = t0 + step * h;
            const complexd f = std::exp(complexd(0.0, 2.0 * pi * re_inner_sigma(xi, u, cfg)));
            const double bv = re_inner_sigma(xi, vector_field(s, u, cfg), cfg);
            const double w = (step == 0 || step == n_steps) ? 0.5 : 1.0;
            integral += w * h * f * bv;
            if (step == 0) f_first = f;
            if (step == n_steps) f_last = f;
            if (step < n_steps) u = rk4_rotated_step(s, u, h, cfg);
        }
        defect[is] = f_last - f_first - complexd(0.0, 2.0 * pi) * integral;
    });

    complexd mean = 0.0;
    for (const auto& d : defect) mean += d;
    mean /= double(res.n_samples);
    double var = 0.0;
    for (const auto& d : defect) var += std::norm(d - mean);
    res.residual_mean = mean;
    res.residual = std::abs(mean);
    res.mc_stderr = res.n_samples > 1
                        ? std::sqrt(var / (res.n_samples - 1) / res.n_samples)
                        : 0.0;
    return res;
}

double pushforward_check(const std::vector<ClassicalState>& samples, double t, double dt,
                         const std::vector<TestPoint>& panel, const ModelConfig& cfg,
                         double fault_offset) {
    if (samples.empty() || panel.empty()) return 0.0;
    const long n_steps = std::lround(std::ceil(std::abs(t) / dt - 1e-12));
    const double h = n_steps > 0 ? t / double(n_steps) : 0.0;

    auto flow = [&](ClassicalState u) {
        for (long s = 0; s < n_steps; ++s)
            u = rk4_rotated_step(s * h, u, h, cfg);
        return u;
    };

    // order 1: flow every sample, then average each test function
    std::vector<ClassicalState> flowed;
    flowed.reserve(samples.size());
    for (const auto& u : samples) flowed.push_back(flow(u));

    double worst = 0.0;
    for (const auto& xi : panel) {
        complexd mean_after = 0.0;
        for (const auto& u : flowed)
            mean_after += std::exp(complexd(0.0, 2.0 * pi * re_inner_sigma(xi, u, cfg)));
        mean_after /= double(samples.size());

        // order 2: average the composition (f . flow) sample by sample
        complexd mean_composed = 0.0;
        for (const auto& u0 : samples) {
            ClassicalState u = u0;
            if (fault_offset != 0.0) u.q.array() += fault_offset;
            mean_composed +=
                std::exp(complexd(0.0, 2.0 * pi * re_inner_sigma(xi, flow(u), cfg)));
        }
        mean_composed /= double(samples.size());
        worst = std::max(worst, std::abs(mean_after - mean_composed));
    }
    return worst;
}

std::vector<ClassicalState> gaussian_cloud(const ClassicalState& center, double spread_pq,
                                           double spread_field, int count,
                                           const ModelConfig& cfg, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<ClassicalState> cloud;
    cloud.reserve(count);
    const Eigen::VectorXd env = cfg.chi_values(); // keeps the cloud in G^sigma
    const double env_max = env.cwiseAbs().maxCoeff();
    for (int i = 0; i < count; ++i) {
        ClassicalState u = center;
        for (int j = 0; j < cfg.dn(); ++j) {
            u.p[j] += spread_pq * gauss(rng);
            u.q[j] += spread_pq * gauss(rng);
        }
        for (int m = 0; m < cfg.grid.size(); ++m) {
            const double e = env_max > 0.0 ? std::abs(env[m]) / env_max : 1.0;
            u.alpha[m] += spread_field * e * complexd(gauss(rng), gauss(rng));
        }
        cloud.push_back(std::move(u));
    }
    return cloud;
}

std::vector<TestPoint> default_test_panel(const ModelConfig& cfg, double scale, int n_fixed,
                                          int n_random, unsigned long seed) {
    const int dn = cfg.dn();
    const int nm = cfg.grid.size();
    const int mid = nm / 2;
    std::vector<TestPoint> panel;

    auto push_scaled = [&](TestPoint xi) {
        const double nrm = xi.x0_norm(cfg.grid.dk);
        if (nrm > 0.0) {
            const double f = scale / nrm;
            xi.p0 *= f;
            xi.q0 *= f;
            xi.alpha0 *= f;
        }
        panel.push_back(std::move(xi));
    };

    // fixed directions: particle-only, field-only, mixed
    std::vector<TestPoint> fixed;
    for (int variant = 0; variant < n_fixed; ++variant) {
        TestPoint xi = TestPoint::zero(dn, nm);
        switch (variant % 8) {
            case 0: xi.p0[0] = 1.0; break;
            case 1: xi.q0[0] = 1.0; break;
            case 2: xi.alpha0[mid] = 1.0; break;
            case 3: xi.alpha0[mid] = complexd(0.0, 1.0); break;
            case 4: xi.p0[0] = 1.0; xi.q0[0] = 1.0; break;
            case 5: xi.p0[0] = 1.0; xi.alpha0[mid] = 1.0; break;
            case 6: xi.q0[0] = 1.0; xi.alpha0[mid] = complexd(0.0, 1.0); break;
            default:
                xi.p0[0] = 1.0;
                xi.q0[0] = -1.0;
                for (int m = 0; m < nm; ++m) xi.alpha0[m] = 1.0;
                break;
        }
        push_scaled(std::move(xi));
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < n_random; ++r) {
        TestPoint xi = TestPoint::zero(dn, nm);
        for (int j = 0; j < dn; ++j) {
            xi.p0[j] = gauss(rng);
            xi.q0[j] = gauss(rng);
        }
        for (int m = 0; m < nm; ++m)
            xi.alpha0[m] = complexd(gauss(rng), gauss(rng));
        push_scaled(std::move(xi));
    }
    return panel;
}

bool SweepReport::monotone(double slack, double floor) const {
    // for each t, walk the rows in decreasing hbar and require every error
    // column to be non-increasing up to the multiplicative slack
    std::vector<double> ts;
    for (const auto& r : rows)
        if (std::find(ts.begin(), ts.end(), r.t) == ts.end()) ts.push_back(r.t);
    const double f = 1.0 + slack;
    for (double t : ts) {
        std::vector<const SweepRow*> seq;
        for (const auto& r : rows)
            if (r.t == t) seq.push_back(&r);
        std::sort(seq.begin(), seq.end(),
                  [](const SweepRow* a, const SweepRow* b) { return a->hbar > b->hbar; });
        for (size_t i = 1; i < seq.size(); ++i) {
            const SweepRow& hi = *seq[i - 1]; // larger hbar
            const SweepRow& lo = *seq[i];
            auto ok = [&](double low, double high) {
                return low <= floor || low <= high * f;
            };
            if (!ok(lo.err_q, hi.err_q)) return false;
            if (!ok(lo.err_p, hi.err_p)) return false;
            if (!ok(lo.err_char, hi.err_char)) return false;
            for (int m = 0; m < hi.err_modes.size(); ++m)
                if (!ok(lo.err_modes[m], hi.err_modes[m])) return false;
        }
    }
    return true;
}

namespace {

// smallest occupation cap whose Poisson tail beyond it stays under `tail`
int poisson_cap(double lambda, double tail, int lo, int hi) {
    for (int n = lo; n <= hi; ++n) {
        double term = std::exp(-lambda);
        double cdf = term;
        for (int k = 1; k <= n; ++k) {
            term *= lambda / k;
            cdf += term;
        }
        if (1.0 - cdf <= tail) return n;
    }
    return hi;
}

} // namespace

SweepReport hbar_sweep(const ClassicalState& u0, const std::vector<double>& hbar_list,
                       const std::vector<double>& t_list, const ModelConfig& cfg,
                       const SweepOptions& opts) {
    for (size_t i = 1; i < hbar_list.size(); ++i)
        if (!(hbar_list[i] < hbar_list[i - 1]))
            throw config_error("hbar_sweep: hbar list must be strictly decreasing");
    for (double hb : hbar_list)
        if (!(hb > 0.0 && hb <= 1.0))
            throw config_error("hbar_sweep: hbar values must lie in (0, 1]");

    SweepReport rep;
    rep.seed = opts.seed;
    rep.centering_note =
        "coherent centering: particle W1(z0/hbar) gaussian, field W2(sqrt(2) alpha0/(i hbar)) "
        "vacuum; characteristic pairing e^{2 pi i Re<xi,u>}";

    // classical reference on the same (coarse) mode set, direct picture
    const double t_end = *std::max_element(t_list.begin(), t_list.end());
    Trajectory ref = integrate(u0, t_end, opts.classical_dt, Picture::direct, cfg);
    std::vector<ClassicalState> ref_at;
    std::vector<double> lambda_max(1, 0.0);
    for (double t : t_list) {
        const long idx = std::lround(t / opts.classical_dt);
        if (idx < 0 || idx >= static_cast<long>(ref.states.size()))
            throw config_error("hbar_sweep: t values must be multiples of classical_dt");
        ref_at.push_back(ref.states[idx]);
    }
    double alpha2_max = 0.0;
    for (const auto& s : ref.states) {
        double a2 = 0.0;
        for (int i = 0; i < cfg.grid.size(); ++i) a2 += cfg.grid.dk * std::norm(s.alpha[i]);
        alpha2_max = std::max(alpha2_max, a2);
    }

    const std::vector<TestPoint> panel = default_test_panel(
        cfg, opts.panel_scale, opts.panel_fixed, opts.panel_random, opts.seed);

    double p_abs_max = std::abs(u0.p[0]);
    for (const auto& s : ref.states) p_abs_max = std::max(p_abs_max, std::abs(s.p[0]));
    double q_abs_max = std::abs(u0.q[0]);
    for (const auto& s : ref.states) q_abs_max = std::max(q_abs_max, std::abs(s.q[0]));

    for (double hb : hbar_list) {
        try {
            // size the particle grid for the packet momentum content
            int n_x = opts.base_n_x;
            while (true) {
                try {
                    ParticleGrid probe(n_x, opts.length);
                    check_wavepacket_guards(probe, hb, q_abs_max, p_abs_max);
                    break;
                } catch (const config_error&) {
                    if (n_x >= opts.max_n_x) throw;
                    n_x *= 2;
                }
            }
            // size the occupation cap for the classical field amplitude
            const int n_max = poisson_cap(alpha2_max / hb, opts.leak_threshold / 10.0,
                                          opts.base_n_max, opts.max_n_max);

            ParticleGrid pgrid(n_x, opts.length);
            FockBasis fbasis = FockBasis::from_grid(cfg.grid, n_max);
            HamiltonianAssembly h(cfg, pgrid, fbasis, hb);
            QuantumState psi0 = coherent_state(u0, hb, pgrid, fbasis, cfg);

            for (size_t it = 0; it < t_list.size(); ++it) {
                const double t = t_list[it];
                QuantumState psi = evolve(psi0, h, t, opts.evolve);
                const ObservableRecord obs = observables(psi, h);
                const ClassicalState& ucl = ref_at[it];

                SweepRow row;
                row.hbar = hb;
                row.t = t;
                row.n_x = n_x;
                row.n_max = n_max;
                row.err_q = std::abs(obs.q_mean - ucl.q[0]);
                row.err_p = std::abs(obs.p_mean - ucl.p[0]);
                row.err_modes.resize(cfg.grid.size());
                const double rdk = std::sqrt(cfg.grid.dk);
                for (int m = 0; m < cfg.grid.size(); ++m)
                    row.err_modes[m] = std::abs(obs.a_modes[m] - rdk * ucl.alpha[m]);
                double worst = 0.0;
                for (const auto& xi : panel) {
                    const complexd quantum = characteristic_quantum(psi, xi, h);
                    const complexd classical =
                        std::exp(complexd(0.0, 2.0 * pi * re_inner_x0(xi, ucl, cfg.grid.dk)));
                    worst = std::max(worst, std::abs(quantum - classical));
                }
                row.err_char = worst;
                row.leakage = obs.leakage;
                if (row.leakage > opts.leak_threshold)
                    throw truncation_error("leakage " + std::to_string(row.leakage) +
                                           " above threshold at hbar = " + std::to_string(hb));
                rep.rows.push_back(std::move(row));
            }
            ++rep.completed_hbars;
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "hbar = " << hb << " skipped: " << e.what();
            rep.warnings.push_back(os.str());
        }
    }
    return rep;
}

} // namespace nkg
