#include "nkg/estimates.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nkg/correspondence.hpp"

namespace nkg {

using std::numbers::pi;

namespace {

Eigen::VectorXcd random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = complexd(g(rng), g(rng));
    v /= v.norm();
    return v;
}

// Haar-like random Fock vector supported on total occupation <= sector_cap
FockVector random_fock(std::mt19937_64& rng, const FockBasis& b, double hbar, int sector_cap) {
    std::normal_distribution<double> g;
    FockVector v;
    v.hbar = hbar;
    v.c = Eigen::VectorXcd::Zero(b.dim());
    for (int s = 0; s < b.dim(); ++s)
        if (b.total(s) <= sector_cap) v.c[s] = complexd(g(rng), g(rng));
    v.c /= v.c.norm();
    return v;
}

Eigen::VectorXcd random_mode_fn(std::mt19937_64& rng, int modes) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd f(modes);
    for (int i = 0; i < modes; ++i) f[i] = complexd(g(rng), g(rng));
    return f;
}

double mode_norm(const FockBasis& b, const Eigen::VectorXcd& f) {
    return std::sqrt(b.dk()) * f.norm();
}

struct CaseBuilder {
    EstimateCase c;
    double floor = 1e-300;

    explicit CaseBuilder(std::string name, std::string statement, std::string constants,
                         double tolerance) {
        c.name = std::move(name);
        c.statement = std::move(statement);
        c.constants = std::move(constants);
        c.tolerance = tolerance;
    }

    void record(int hbar_index, double lhs, double rhs, const Eigen::VectorXcd& sample) {
        while (static_cast<int>(c.worst_per_hbar.size()) <= hbar_index)
            c.worst_per_hbar.push_back(0.0);
        const double ratio = lhs / std::max(rhs, floor);
        ++c.samples;
        if (ratio > c.worst_per_hbar[hbar_index]) c.worst_per_hbar[hbar_index] = ratio;
        if (ratio > c.worst_ratio) {
            c.worst_ratio = ratio;
            if (ratio > 1.0 + c.tolerance) {
                c.violating_hbar_index = hbar_index;
                c.violating_sample = sample;
            }
        }
    }

    EstimateCase finish(double trend_slack) {
        c.pass = c.worst_ratio <= 1.0 + c.tolerance;
        // uniformity means the certified constant does not degrade as hbar
        // shrinks: the worst ratio stays flat within the slack, or at least
        // 10% below the bound at every hbar (a ratio drifting around well
        // under the constant is not a degrading constant)
        const double reference = std::max(c.worst_per_hbar.empty() ? 0.0 : c.worst_per_hbar[0],
                                          0.01);
        const double comfortable = 0.9 * (1.0 + c.tolerance);
        for (double w : c.worst_per_hbar)
            if (w > reference * (1.0 + trend_slack) && w > comfortable)
                c.hbar_uniform = false;
        return c;
    }
};

} // namespace

EstimateSuite run_suite(const ModelConfig& cfg, const ParticleGrid& pgrid, int n_max,
                        const std::vector<double>& hbar_list, const EstimateSuiteOptions& opts) {
    cfg.validate();
    EstimateSuite suite;
    std::mt19937_64 rng(opts.seed);

    const FockBasis fb = FockBasis::from_grid(cfg.grid, n_max);
    const Eigen::VectorXd omega = cfg.omega();
    const double m_f = cfg.dispersion.mass;
    const double nm1 = weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, -1.0);
    const double v_inf = cfg.potential.sup_value;

    const int fock_samples = opts.samples;
    const int product_samples = std::max(1, opts.samples / 5);

    // --- ladder-operator cases on the Fock factor ---------------------------
    CaseBuilder annihilate_number(
        "annihilate_number_bound", "|a(f) psi| <= |N^(1/2) psi| |f|",
        "no constants; Cauchy-Schwarz across occupation sectors", 0.0);
    CaseBuilder create_number(
        "create_number_bound", "|a*(f) psi| <= |(N+1)^(1/2) psi| |f|",
        "no constants; adjoint of the annihilation case plus the CCR", 0.0);
    CaseBuilder annihilate_field(
        "annihilate_field_bound", "|a(f) psi| <= |f/sqrt(omega)| |(H02+1)^(1/2) psi|",
        "no constants; omega-weighted Cauchy-Schwarz", 0.0);
    CaseBuilder create_field(
        "create_field_bound",
        "|a*(f) psi|^2 <= |f/sqrt(omega)|^2 |(H02+1)^(1/2) psi|^2 + hbar |f|^2 |psi|^2",
        "no constants; annihilation case plus the CCR", 0.0);
    CaseBuilder field_number(
        "field_dominates_number", "m_f |N psi| <= |H02 psi|",
        "m_f from the dispersion floor omega >= m_f", 0.0);
    CaseBuilder number_shift(
        "number_shift_bound", "|(N+1)^(1/2) psi| <= eps |N psi| + b |psi|",
        "eps = 1/sqrt(2), b = sqrt(3/2) from 2xy <= x^2 + y^2 with weight 1", 0.0);
    CaseBuilder ccr(
        "ladder_commutator", "[a(f), a*(g)] = hbar <f,g> on total occupation <= cap-1",
        "identity; deviation measured against 1e-12 * hbar |f| |g| |psi|", 0.0);

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(fb.modes());
    for (size_t ih = 0; ih < hbar_list.size(); ++ih) {
        const double hb = hbar_list[ih];
        const Eigen::VectorXd n_diag = dgamma_diagonal(fb, ones, hb);
        const Eigen::VectorXd h02_diag = dgamma_diagonal(fb, omega, hb);
        for (int s = 0; s < fock_samples; ++s) {
            const FockVector psi = random_fock(rng, fb, hb, fb.cap());
            const Eigen::VectorXcd f = random_mode_fn(rng, fb.modes());
            const double fn = mode_norm(fb, f);
            Eigen::VectorXcd fw(fb.modes());
            for (int i = 0; i < fb.modes(); ++i)
                fw[i] = f[i] / std::sqrt(omega[i]);
            const double fwn = mode_norm(fb, fw);

            const double n_half = std::sqrt((psi.c.array().abs2() * n_diag.array()).sum());
            const double np1_half =
                std::sqrt((psi.c.array().abs2() * (n_diag.array() + 1.0)).sum());
            const double h02p1_half =
                std::sqrt((psi.c.array().abs2() * (h02_diag.array() + 1.0)).sum());

            annihilate_number.record(ih, annihilate(fb, f, psi).norm(), n_half * fn, psi.c);
            create_number.record(ih, create(fb, f, psi).norm(), np1_half * fn, psi.c);
            annihilate_field.record(ih, annihilate(fb, f, psi).norm(), fwn * h02p1_half, psi.c);
            {
                const double lhs = std::pow(create(fb, f, psi).norm(), 2.0);
                const double rhs = fwn * fwn * h02p1_half * h02p1_half + hb * fn * fn;
                create_field.record(ih, lhs, rhs, psi.c);
            }
            {
                const double lhs = m_f * std::sqrt((psi.c.array().abs2() *
                                                    n_diag.array().square())
                                                       .sum());
                const double rhs = std::sqrt((psi.c.array().abs2() *
                                              h02_diag.array().square())
                                                 .sum());
                field_number.record(ih, lhs, rhs, psi.c);
            }
            {
                const double eps = 1.0 / std::sqrt(2.0);
                const double b = std::sqrt(1.5);
                const double n_full =
                    std::sqrt((psi.c.array().abs2() * n_diag.array().square()).sum());
                number_shift.record(ih, np1_half, eps * n_full + b, psi.c);
            }
            {
                // protected sector: total occupation <= cap - 1
                const FockVector psi_safe = random_fock(rng, fb, hb, fb.cap() - 1);
                const Eigen::VectorXcd g = random_mode_fn(rng, fb.modes());
                const FockVector lhs1 = annihilate(fb, f, create(fb, g, psi_safe));
                const FockVector rhs1 = create(fb, g, annihilate(fb, f, psi_safe));
                const complexd fg = mode_inner(fb, f, g);
                const Eigen::VectorXcd dev = lhs1.c - rhs1.c - hb * fg * psi_safe.c;
                const double scale = hb * fn * mode_norm(fb, g);
                ccr.record(ih, dev.norm(), 1e-12 * scale, psi_safe.c);
            }
        }
    }

    // --- quadratic-form sandwich between H and H0 ---------------------------
    // Constants assembled from |<H1>| <= eps <H02 + 1> + (nm1)^2/eps |psi|^2:
    //   ceps = 1/2 + 2 nm1^2            (eps = 1/2 lower bound for H)
    //   a    = v_inf + ceps + 1         so that H + a >= 1
    //   b    = (2 + nm1^2 + 2 v_inf + ceps) / 2   (eps = 1 upper bound)
    //   c    = 1/2,  C = 2 + max(0, b - 2)
    const double g_factor = cfg.n * nm1;
    const double ceps = 0.5 + 2.0 * g_factor * g_factor;
    const double a_shift = v_inf + ceps + 1.0;
    const double b_shift = (2.0 + g_factor * g_factor + 2.0 * v_inf + ceps) / 2.0;
    const double c_lower = 0.5;
    const double c_upper = 2.0 + std::max(0.0, b_shift - 2.0);
    {
        std::ostringstream con;
        con << "a = " << a_shift << ", b = " << b_shift << ", c = " << c_lower
            << ", C = " << c_upper << " from ||V||_inf = " << v_inf
            << " and ||chi/omega|| = " << nm1;
        CaseBuilder lower("form_equivalence_lower", "c <psi,(H+a) psi> <= <psi,(H0+b) psi>",
                          con.str(), 0.0);
        CaseBuilder upper("form_equivalence_upper", "<psi,(H0+b) psi> <= C <psi,(H+a) psi>",
                          con.str(), 0.0);

        for (size_t ih = 0; ih < hbar_list.size(); ++ih) {
            const double hb = hbar_list[ih];
            HamiltonianAssembly h(cfg, pgrid, fb, hb);
            Eigen::VectorXcd hpsi, h0psi;
            for (int s = 0; s < product_samples; ++s) {
                const Eigen::VectorXcd psi = random_unit(rng, h.dim());
                h.apply(psi, hpsi, opts.exec);
                h.apply_free(psi, h0psi, opts.exec);
                const double form_h = std::real(psi.dot(hpsi)) + a_shift;
                const double form_h0 = std::real(psi.dot(h0psi)) + b_shift;
                lower.record(ih, c_lower * form_h, form_h0, psi);
                upper.record(ih, form_h0, c_upper * form_h, psi);
            }
        }
        suite.cases.push_back(lower.finish(opts.trend_slack));
        suite.cases.push_back(upper.finish(opts.trend_slack));
    }

    // --- Weyl displacement estimates ----------------------------------------
    {
        CaseBuilder weyl2(
            "weyl_field_number_bound",
            "|N^(1/2) W2(alpha) psi| <= sqrt(1 + hbar^2 |alpha|^2 / 2) |(N+1)^(1/2) psi|",
            "constant from the displaced-number expansion and Cauchy-Schwarz", 0.0);
        const Eigen::VectorXcd alpha = ([&] {
            Eigen::VectorXcd a = random_mode_fn(rng, fb.modes());
            a *= 0.5 / mode_norm(fb, a);
            return a;
        })();
        for (size_t ih = 0; ih < hbar_list.size(); ++ih) {
            const double hb = hbar_list[ih];
            const Eigen::MatrixXcd w2 = weyl_field(fb, alpha, hb);
            const Eigen::VectorXd n_diag = dgamma_diagonal(fb, ones, hb);
            const double an = mode_norm(fb, alpha);
            const double c_w = std::sqrt(1.0 + hb * hb * an * an / 2.0);
            for (int s = 0; s < product_samples; ++s) {
                const FockVector psi = random_fock(rng, fb, hb, fb.cap() / 2);
                const Eigen::VectorXcd moved = w2 * psi.c;
                const double lhs =
                    std::sqrt((moved.array().abs2() * n_diag.array()).sum());
                const double rhs =
                    c_w * std::sqrt((psi.c.array().abs2() * (n_diag.array() + 1.0)).sum());
                weyl2.record(ih, lhs, rhs, psi.c);
            }
        }
        suite.cases.push_back(weyl2.finish(opts.trend_slack));
    }
    {
        CaseBuilder weyl1(
            "weyl_particle_moment_bound",
            "|(p^2+q^2)^(1/2) W1(z) psi| <= sqrt(1 + hbar^2 |z|^2) |(p^2+q^2+1)^(1/2) psi|",
            "constant from the shifted-moment expansion and Cauchy-Schwarz", 0.0);
        const complexd z(0.8, -0.6);
        const Eigen::VectorXd x = pgrid.x();
        std::uniform_real_distribution<double> uq(-pgrid.length() / 8.0, pgrid.length() / 8.0);
        for (size_t ih = 0; ih < hbar_list.size(); ++ih) {
            const double hb = hbar_list[ih];
            const Eigen::MatrixXcd w1 = weyl_particle(pgrid, z, hb);
            const Eigen::VectorXd p = pgrid.momenta(hb);
            std::uniform_real_distribution<double> up(-0.25 * hb * pi / pgrid.dx(),
                                                      0.25 * hb * pi / pgrid.dx());
            auto moment = [&](const Eigen::VectorXcd& v, double plus) {
                const Eigen::VectorXcd vf = pgrid.to_fourier(v);
                return std::sqrt((v.array().abs2() * (x.array().square() + plus)).sum() +
                                 (vf.array().abs2() * p.array().square()).sum());
            };
            for (int s = 0; s < product_samples; ++s) {
                // localized random packet: grid-edge wrap would break the
                // translation identity for fully random vectors
                Eigen::VectorXcd psi = coherent_wavepacket(pgrid, uq(rng), up(rng), hb);
                psi += 0.3 * coherent_wavepacket(pgrid, uq(rng), up(rng), hb);
                psi /= psi.norm();
                const double lhs = moment(w1 * psi, 0.0);
                const double rhs = std::sqrt(1.0 + hb * hb * std::norm(z)) * moment(psi, 1.0);
                weyl1.record(ih, lhs, rhs, psi);
            }
        }
        suite.cases.push_back(weyl1.finish(opts.trend_slack));
    }

    // --- propagation envelopes along the quantum evolution ------------------
    // C1, C2 fitted once at the largest hbar, then frozen across the sweep.
    {
        struct Track {
            std::vector<std::vector<double>> ratio; // [hbar][time]
        };
        Track tq, tp, tf;
        const int nt = opts.envelope_samples;
        const double dt = opts.envelope_t_end / nt;

        ClassicalState u0 = ClassicalState::zero(cfg.dn(), cfg.grid.size());
        u0.p[0] = 0.1;
        u0.q[0] = 0.3;
        const Eigen::VectorXd chi_vals = cfg.chi_values();
        const double chi_max = chi_vals.cwiseAbs().maxCoeff();
        for (int i = 0; i < cfg.grid.size(); ++i)
            u0.alpha[i] = 0.1 * (chi_max > 0 ? chi_vals[i] / chi_max : 1.0);

        Eigen::VectorXd w2s(fb.modes());
        for (int i = 0; i < fb.modes(); ++i)
            w2s[i] = std::pow(omega[i], 2.0 * cfg.sigma);

        for (size_t ih = 0; ih < hbar_list.size(); ++ih) {
            const double hb = hbar_list[ih];
            HamiltonianAssembly h(cfg, pgrid, fb, hb);
            QuantumState psi = coherent_state(u0, hb, pgrid, fb, cfg);

            Eigen::VectorXcd h0psi;
            h.apply_free(psi.c, h0psi, opts.exec);
            const ObservableRecord obs0 = observables(psi, h);
            const double den_q = std::real(psi.c.dot(h0psi)) + obs0.q2 + 1.0;
            const double den_p = std::real(psi.c.dot(h0psi)) + obs0.p2 + 1.0;
            const double den_f = obs0.dgamma_sigma + 1.0;

            EvolveOptions ev;
            ev.exec = opts.exec;
            ev.force_krylov = true; // stepping is deterministic and cheap here
            tq.ratio.emplace_back();
            tp.ratio.emplace_back();
            tf.ratio.emplace_back();
            QuantumState cur = psi;
            for (int it = 0; it <= nt; ++it) {
                const ObservableRecord obs = observables(cur, h);
                tq.ratio[ih].push_back(obs.q2 / den_q);
                tp.ratio[ih].push_back(obs.p2 / den_p);
                tf.ratio[ih].push_back(obs.dgamma_sigma / den_f);
                if (it < nt) cur = evolve(cur, h, dt, ev);
            }
        }

        auto make_envelope_case = [&](const char* name, const char* what, const Track& tr) {
            // fit at the largest hbar
            double c2 = 0.0;
            for (int it = 1; it <= nt; ++it) {
                const double r0 = tr.ratio[0][it - 1];
                const double r1 = tr.ratio[0][it];
                if (r0 > 0.0 && r1 > r0)
                    c2 = std::max(c2, std::log(r1 / r0) / dt);
            }
            double c1 = 0.0;
            for (int it = 0; it <= nt; ++it)
                c1 = std::max(c1, tr.ratio[0][it] * std::exp(-c2 * it * dt));
            // 5% headroom over the largest-hbar fit absorbs the sub-percent
            // hbar-variation of the moment curves that one frozen envelope
            // must dominate
            c1 *= 1.05;
            std::ostringstream con;
            con << "C1 = " << c1 << ", C2 = " << c2 << " fitted at hbar = " << hbar_list[0]
                << " and frozen";
            CaseBuilder env(name, std::string(what) + " <= C1 <initial moment> e^{C2 t}",
                            con.str(), 0.0);
            for (size_t ih = 0; ih < hbar_list.size(); ++ih)
                for (int it = 0; it <= nt; ++it)
                    env.record(static_cast<int>(ih), tr.ratio[ih][it],
                               c1 * std::exp(c2 * it * dt), Eigen::VectorXcd());
            return env.finish(opts.trend_slack);
        };
        suite.cases.push_back(make_envelope_case("position_envelope", "<q^2>(t)", tq));
        suite.cases.push_back(make_envelope_case("momentum_envelope", "<p^2>(t)", tp));
        suite.cases.push_back(make_envelope_case("field_moment_envelope",
                                                 "<dGamma(omega^2sigma)>(t)", tf));
    }

    suite.cases.push_back(annihilate_number.finish(opts.trend_slack));
    suite.cases.push_back(create_number.finish(opts.trend_slack));
    suite.cases.push_back(annihilate_field.finish(opts.trend_slack));
    suite.cases.push_back(create_field.finish(opts.trend_slack));
    suite.cases.push_back(field_number.finish(opts.trend_slack));
    suite.cases.push_back(number_shift.finish(opts.trend_slack));
    suite.cases.push_back(ccr.finish(opts.trend_slack));

    for (const auto& c : suite.cases)
        suite.all_pass = suite.all_pass && c.pass && c.hbar_uniform;
    return suite;
}

std::string replay_format(const Eigen::VectorXcd& v) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < v.size(); ++i)
        os << i << ":" << v[i].real() << "," << v[i].imag() << "\n";
    return os.str();
}

Eigen::VectorXcd parse_replay(const std::string& text) {
    std::istringstream is(text);
    std::vector<complexd> vals;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto colon = line.find(':');
        const auto comma = line.find(',', colon);
        if (colon == std::string::npos || comma == std::string::npos)
            throw config_error("replay file: malformed line '" + line + "'");
        const size_t idx = std::stoul(line.substr(0, colon));
        if (idx != vals.size())
            throw config_error("replay file: indices must be consecutive from 0");
        vals.emplace_back(std::stod(line.substr(colon + 1, comma - colon - 1)),
                          std::stod(line.substr(comma + 1)));
    }
    Eigen::VectorXcd v(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
    return v;
}

} // namespace nkg
