// Command-line front door: configuration loading, experiment orchestration,
// and CSV/JSON export.  Subcommands: classical, quantum, correspondence,
// verify.  Exit codes: 0 success, 1 property failure, 2 usage/config error,
// 3 numerical failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nkg/assumptions.hpp"
#include "nkg/classical.hpp"
#include "nkg/correspondence.hpp"
#include "nkg/estimates.hpp"
#include "nkg/io.hpp"

using namespace nkg;
using nlohmann::json;

namespace {

struct RunContext {
    IniFile ini;
    ModelConfig cfg;
    std::string out_dir;
    std::string config_path;
    std::string hash;
    unsigned long seed = 0;
    std::string subcommand;
};

ClassicalState initial_state(const RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg;
    ClassicalState u = ClassicalState::zero(cfg.dn(), cfg.grid.size());
    const auto p0 = ctx.ini.get_list("state", "p0", std::vector<double>(cfg.dn(), 0.0));
    const auto q0 = ctx.ini.get_list("state", "q0", std::vector<double>(cfg.dn(), 0.0));
    if (static_cast<int>(p0.size()) != cfg.dn() || static_cast<int>(q0.size()) != cfg.dn())
        throw config_error("[state] p0/q0: need exactly d*n values");
    for (int j = 0; j < cfg.dn(); ++j) {
        u.p[j] = p0[j];
        u.q[j] = q0[j];
    }
    const double amp_re = ctx.ini.get_double("state", "alpha_re", 0.0);
    const double amp_im = ctx.ini.get_double("state", "alpha_im", 0.0);
    const double width = ctx.ini.get_double("state", "alpha_width", 2.0);
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        u.alpha[i] = complexd(amp_re, amp_im) * std::exp(-k * k / (width * width));
    }
    return u;
}

void write_manifest(const RunContext& ctx) {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    std::string text;
    text += "subcommand: " + ctx.subcommand + "\n";
    text += "config: " + ctx.config_path + "\n";
    text += "out: " + ctx.out_dir + "\n";
    text += "seed: " + std::to_string(ctx.seed) + "\n";
    text += "timestamp: " + std::string(stamp) + "\n";
    text += "config_hash: " + ctx.hash + "\n";
    write_file(ctx.out_dir + "/run_manifest.txt", text);
}

int cmd_classical(const RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg;
    const double t_end = ctx.ini.get_double("classical", "t_end", 10.0);
    const double dt = ctx.ini.get_double("classical", "dt", 1e-3);
    const int stride = ctx.ini.get_int("classical", "save_stride", 10);
    const std::string picture_s = ctx.ini.get_string("classical", "picture", "direct");
    if (picture_s != "direct" && picture_s != "interaction")
        throw config_error("[classical] picture: expected 'direct' or 'interaction'");
    const Picture picture = picture_s == "interaction" ? Picture::interaction : Picture::direct;

    ClassicalState u0 = initial_state(ctx);
    Trajectory traj = integrate(u0, t_end, dt, picture, cfg, {.save_stride = stride});

    {
        CsvWriter csv(ctx.out_dir + "/trajectory.csv");
        csv.comment("config_hash", ctx.hash);
        csv.comment("picture", picture_s);
        std::vector<std::string> cols{"t"};
        for (int j = 0; j < cfg.dn(); ++j) cols.push_back("p_" + std::to_string(j + 1));
        for (int j = 0; j < cfg.dn(); ++j) cols.push_back("q_" + std::to_string(j + 1));
        for (int i = 0; i < cfg.grid.size(); ++i) cols.push_back("re_alpha_" + std::to_string(i));
        for (int i = 0; i < cfg.grid.size(); ++i) cols.push_back("im_alpha_" + std::to_string(i));
        cols.push_back("H");
        csv.header(cols);
        for (size_t s = 0; s < traj.states.size(); ++s) {
            const ClassicalState u = to_direct_picture(traj, static_cast<int>(s), cfg);
            std::vector<double> row{traj.times[s]};
            for (int j = 0; j < cfg.dn(); ++j) row.push_back(u.p[j]);
            for (int j = 0; j < cfg.dn(); ++j) row.push_back(u.q[j]);
            for (int i = 0; i < cfg.grid.size(); ++i) row.push_back(u.alpha[i].real());
            for (int i = 0; i < cfg.grid.size(); ++i) row.push_back(u.alpha[i].imag());
            row.push_back(hamiltonian_classical(u, cfg));
            csv.row(row);
        }
    }

    // energy-drift report needs the direct picture
    Trajectory direct =
        picture == Picture::direct ? traj
                                   : integrate(u0, t_end, dt, Picture::direct, cfg,
                                               {.save_stride = stride});
    const double drift = energy_drift(direct, cfg);
    {
        std::string text = "# config_hash: " + ctx.hash + "\n";
        text += "relative_energy_drift: " + CsvWriter::format(drift) + "\n";
        text += "t_end: " + CsvWriter::format(t_end) + "\n";
        text += "dt: " + CsvWriter::format(dt) + "\n";
        write_file(ctx.out_dir + "/energy_drift.txt", text);
    }

    const double gap0 = ctx.ini.get_double("classical", "gronwall_gap", 1e-8);
    const double gt = ctx.ini.get_double("classical", "gronwall_t", std::min(t_end, 5.0));
    ClassicalState u0b = u0;
    u0b.q[0] += gap0;
    GronwallReport grep = gronwall_divergence(u0, u0b, gt, dt, cfg);
    {
        CsvWriter csv(ctx.out_dir + "/gronwall.csv");
        csv.comment("config_hash", ctx.hash);
        csv.comment("rate_constant", CsvWriter::format(grep.rate_constant));
        csv.comment("fitted_rate", CsvWriter::format(grep.fitted_rate));
        csv.comment("envelope_ok", grep.envelope_ok ? "true" : "false");
        csv.header({"t", "gap", "envelope"});
        for (size_t i = 0; i < grep.times.size(); ++i)
            csv.row({grep.times[i], grep.gaps[i], grep.envelopes[i]});
    }
    std::cout << "classical: drift " << drift << ", gronwall envelope "
              << (grep.envelope_ok ? "ok" : "VIOLATED") << "\n";
    return grep.envelope_ok ? 0 : 1;
}

int cmd_quantum(const RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg;
    const double hbar = ctx.ini.get_double("quantum", "hbar", 0.2);
    const int n_x = ctx.ini.get_int("quantum", "n_x", 64);
    const double length = ctx.ini.get_double("quantum", "length", 16.0);
    const int n_max = ctx.ini.get_int("quantum", "n_max", 4);
    const double t_end = ctx.ini.get_double("quantum", "t_end", 2.0);
    const double save_dt = ctx.ini.get_double("quantum", "save_dt", 0.1);

    ParticleGrid pgrid(n_x, length);
    FockBasis fbasis = FockBasis::from_grid(cfg.grid, n_max);
    HamiltonianAssembly h(cfg, pgrid, fbasis, hbar);
    ClassicalState u0 = initial_state(ctx);
    QuantumState psi0 = coherent_state(u0, hbar, pgrid, fbasis, cfg);

    CsvWriter csv(ctx.out_dir + "/observables.csv");
    csv.comment("config_hash", ctx.hash);
    csv.comment("dim", std::to_string(h.dim()));
    std::vector<std::string> cols{"t", "hbar", "q_mean", "p_mean"};
    for (int i = 0; i < fbasis.modes(); ++i) {
        cols.push_back("re_a_" + std::to_string(i));
        cols.push_back("im_a_" + std::to_string(i));
    }
    cols.push_back("n_mean");
    cols.push_back("energy");
    cols.push_back("leakage");
    csv.header(cols);

    const int n_samples = static_cast<int>(std::lround(t_end / save_dt));
    for (int s = 0; s <= n_samples; ++s) {
        const double t = s * save_dt;
        QuantumState psi = evolve(psi0, h, t);
        const ObservableRecord obs = observables(psi, h);
        std::vector<double> row{t, hbar, obs.q_mean, obs.p_mean};
        for (int i = 0; i < fbasis.modes(); ++i) {
            row.push_back(obs.a_modes[i].real());
            row.push_back(obs.a_modes[i].imag());
        }
        row.push_back(obs.n_mean);
        row.push_back(obs.energy);
        row.push_back(obs.leakage);
        csv.row(row);
    }
    std::cout << "quantum: dim " << h.dim() << ", evolved to t = " << t_end << "\n";
    return 0;
}

int cmd_correspondence(const RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg;
    SweepOptions opts;
    opts.base_n_x = ctx.ini.get_int("sweep", "n_x", 64);
    opts.length = ctx.ini.get_double("sweep", "length", 16.0);
    opts.max_n_x = ctx.ini.get_int("sweep", "max_n_x", 256);
    opts.base_n_max = ctx.ini.get_int("sweep", "n_max", 4);
    opts.max_n_max = ctx.ini.get_int("sweep", "max_n_max", 24);
    opts.leak_threshold = ctx.ini.get_double("sweep", "leak_threshold", 1e-6);
    opts.classical_dt = ctx.ini.get_double("sweep", "classical_dt", 1e-3);
    opts.panel_scale = ctx.ini.get_double("sweep", "panel_scale", 0.2);
    opts.panel_fixed = ctx.ini.get_int("sweep", "panel_fixed", 8);
    opts.panel_random = ctx.ini.get_int("sweep", "panel_random", 8);
    opts.seed = ctx.seed;

    const auto hbar_list = ctx.ini.get_list("sweep", "hbar_list", {0.4, 0.2, 0.1, 0.05});
    const auto t_list = ctx.ini.get_list("sweep", "t_list", {0.5, 1.0});

    ClassicalState u0 = initial_state(ctx);
    SweepReport rep = hbar_sweep(u0, hbar_list, t_list, cfg, opts);
    for (const auto& w : rep.warnings)
        std::cerr << "warning: " << w << "\n";
    if (hbar_list.size() < 2)
        std::cerr << "warning: single-hbar sweep, monotonicity unassessable\n";

    {
        CsvWriter csv(ctx.out_dir + "/sweep.csv");
        csv.comment("config_hash", ctx.hash);
        csv.comment("seed", std::to_string(rep.seed));
        csv.comment("centering", rep.centering_note);
        std::vector<std::string> cols{"hbar", "t", "err_q", "err_p"};
        for (int i = 0; i < cfg.grid.size(); ++i)
            cols.push_back("err_mode_" + std::to_string(i));
        cols.push_back("err_char");
        cols.push_back("leakage");
        cols.push_back("n_x");
        cols.push_back("n_max");
        csv.header(cols);
        for (const auto& r : rep.rows) {
            std::vector<double> row{r.hbar, r.t, r.err_q, r.err_p};
            for (int i = 0; i < r.err_modes.size(); ++i) row.push_back(r.err_modes[i]);
            row.push_back(r.err_char);
            row.push_back(r.leakage);
            row.push_back(double(r.n_x));
            row.push_back(double(r.n_max));
            csv.row(row);
        }
    }
    {
        json j;
        j["config_hash"] = ctx.hash;
        j["seed"] = rep.seed;
        j["centering"] = rep.centering_note;
        j["warnings"] = rep.warnings;
        j["monotone_within_10pct"] = rep.monotone(0.10);
        j["rows"] = json::array();
        for (const auto& r : rep.rows) {
            json row;
            row["hbar"] = r.hbar;
            row["t"] = r.t;
            row["err_q"] = r.err_q;
            row["err_p"] = r.err_p;
            std::vector<double> em(r.err_modes.data(), r.err_modes.data() + r.err_modes.size());
            row["err_modes"] = em;
            row["err_char"] = r.err_char;
            row["leakage"] = r.leakage;
            row["n_x"] = r.n_x;
            row["n_max"] = r.n_max;
            j["rows"].push_back(row);
        }
        write_file(ctx.out_dir + "/sweep.json", j.dump(2) + "\n");
    }

    // transport-identity residuals: Dirac sample and gaussian cloud
    {
        const double t0 = ctx.ini.get_double("sweep", "residual_t0", 0.0);
        const double t1 = ctx.ini.get_double("sweep", "residual_t", 1.0);
        const double rdt = ctx.ini.get_double("sweep", "residual_dt", 2e-3);
        const int samples = ctx.ini.get_int("sweep", "residual_samples", 512);
        const double spread_pq = ctx.ini.get_double("sweep", "cloud_spread_pq", 0.5);
        const double spread_f = ctx.ini.get_double("sweep", "cloud_spread_field", 0.3);

        std::vector<TestPoint> panel =
            default_test_panel(cfg, ctx.ini.get_double("sweep", "residual_scale", 0.8), 4, 4,
                               ctx.seed + 1);
        CsvWriter csv(ctx.out_dir + "/residual.csv");
        csv.comment("config_hash", ctx.hash);
        csv.header({"panel_index", "kind", "residual", "mc_stderr", "samples"});
        for (size_t ip = 0; ip < panel.size(); ++ip) {
            ResidualResult dirac =
                characteristic_residual({initial_state(ctx)}, panel[ip], t0, t1, rdt, cfg);
            csv.row({double(ip), 0.0, dirac.residual, dirac.mc_stderr, 1.0});
            std::vector<ClassicalState> cloud =
                gaussian_cloud(initial_state(ctx), spread_pq, spread_f, samples, cfg,
                               ctx.seed + 17);
            ResidualResult mc = characteristic_residual(cloud, panel[ip], t0, t1, rdt, cfg);
            csv.row({double(ip), 1.0, mc.residual, mc.mc_stderr, double(mc.n_samples)});
        }
    }

    std::cout << "correspondence: " << rep.completed_hbars << "/" << hbar_list.size()
              << " hbar values completed, monotone(10%) = "
              << (rep.monotone(0.10) ? "yes" : "no") << "\n";
    const bool complete = rep.completed_hbars == static_cast<int>(hbar_list.size());
    return (complete || rep.completed_hbars >= 2) ? 0 : 3;
}

int cmd_verify(const RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg;
    AssumptionCeilings ceilings;
    ceilings.chi_norm = ctx.ini.get_double("verify", "ceiling_chi_norm", 1e6);
    ceilings.v_sup = ctx.ini.get_double("verify", "ceiling_v_sup", 1e6);
    ceilings.v_grad_sup = ctx.ini.get_double("verify", "ceiling_v_grad_sup", 1e6);
    ceilings.v_hess_sup = ctx.ini.get_double("verify", "ceiling_v_hess_sup", 1e6);
    const AssumptionReport assumptions = check_assumptions(cfg, ceilings);

    EstimateSuiteOptions opts;
    opts.samples = ctx.ini.get_int("verify", "samples", 1000);
    opts.seed = ctx.seed;
    opts.envelope_samples = ctx.ini.get_int("verify", "envelope_samples", 32);
    const auto hbar_list = ctx.ini.get_list("verify", "hbar_list", {0.4, 0.2, 0.1, 0.05});
    ParticleGrid pgrid(ctx.ini.get_int("verify", "n_x", 128),
                       ctx.ini.get_double("verify", "length", 16.0));
    const int n_max = ctx.ini.get_int("verify", "n_max", 8);

    // the quantized suite runs on a coarse subset of field modes; the
    // assumption norms above are judged on the full model grid
    ModelConfig cfg_q = cfg;
    cfg_q.grid = KGrid::symmetric(ctx.ini.get_double("verify", "mode_kmax", 0.5),
                                  ctx.ini.get_int("verify", "mode_points", 3));
    const EstimateSuite suite = run_suite(cfg_q, pgrid, n_max, hbar_list, opts);

    const bool all_pass = assumptions.all_pass && suite.all_pass;
    {
        CsvWriter csv(ctx.out_dir + "/certificates.csv");
        csv.comment("config_hash", ctx.hash);
        csv.comment("seed", std::to_string(ctx.seed));
        csv.header({"name", "samples", "tolerance", "worst_ratio", "pass", "hbar_uniform"});
        for (const auto& it : assumptions.items) {
            csv.raw_row({"assumption_" + it.name, "1", "0",
                         CsvWriter::format(it.value),
                         (it.pass && !it.grid_truncation_dependent) ? "1" : "0", "1"});
        }
        for (const auto& c : suite.cases) {
            csv.raw_row({c.name, std::to_string(c.samples), CsvWriter::format(c.tolerance),
                         CsvWriter::format(c.worst_ratio), c.pass ? "1" : "0",
                         c.hbar_uniform ? "1" : "0"});
            if (!c.pass && c.violating_sample.size() > 0) {
                std::string replay = "# config_hash: " + ctx.hash + "\n";
                replay += "# case: " + c.name + "\n";
                replay += "# hbar_index: " + std::to_string(c.violating_hbar_index) + "\n";
                replay += replay_format(c.violating_sample);
                write_file(ctx.out_dir + "/replay_" + c.name + ".txt", replay);
            }
        }
    }
    std::cout << "verify: " << (all_pass ? "all cases pass" : "FAILURES present") << "\n";
    if (!assumptions.all_pass) std::cout << assumptions.summary();
    for (const auto& c : suite.cases)
        if (!c.pass || !c.hbar_uniform)
            std::cout << "  FAIL " << c.name << " worst_ratio " << c.worst_ratio << "\n";
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Particle-field laboratory: classical flows, quantized evolution, and the "
                 "small-hbar correspondence harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned long seed = 0;
    bool seed_given = false;
    for (const char* name : {"classical", "quantum", "correspondence", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "random seed override")
            ->each([&seed_given](const std::string&) { seed_given = true; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunContext ctx;
        ctx.subcommand = app.get_subcommands()[0]->get_name();
        ctx.config_path = config_path;
        ctx.ini = IniFile::parse_file(config_path);
        ctx.cfg = model_config_from_ini(ctx.ini);
        ctx.out_dir = out_dir;
        ctx.seed = seed_given ? seed
                              : static_cast<unsigned long>(
                                    ctx.ini.get_int("run", "seed", 20240817));
        std::filesystem::create_directories(out_dir);
        // the hash covers the resolved configuration including the seed
        IniFile resolved = ctx.ini;
        resolved.set("run", "seed", std::to_string(ctx.seed));
        ctx.hash = config_hash(resolved);
        write_manifest(ctx);

        if (ctx.subcommand == "classical") return cmd_classical(ctx);
        if (ctx.subcommand == "quantum") return cmd_quantum(ctx);
        if (ctx.subcommand == "correspondence") return cmd_correspondence(ctx);
        if (ctx.subcommand == "verify") return cmd_verify(ctx);
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const shape_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
