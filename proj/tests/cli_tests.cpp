// End-to-end checks of the command-line tool: exit codes, output files, and
// byte-level determinism.  argv[1] is the binary, argv[2] the configs dir.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "pass" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string base_model = R"([model]
d = 1
n = 1
masses = 1.0
relativistic = true
sigma = 0.5
field_mass = 1.0

[grid]
kmax = 8.0
points = 65

[formfactor]
preset = gaussian
amplitude = 0.25
width = 2.0

[potential]
preset = gaussian-well
depth = 0.1
width = 1.5

[state]
p0 = 0.3
q0 = 0.5
alpha_re = 0.2
alpha_im = 0.1
alpha_width = 2.0
)";

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_tests <nkg-binary> <configs-dir>\n";
        return 1;
    }
    const std::string bin = argv[1];
    const std::string configs = argv[2];
    const fs::path work = fs::temp_directory_path() / "nkg_cli_tests";
    fs::remove_all(work);
    fs::create_directories(work);

    // --- classical: shortened default, files appear, drift small -----------
    {
        write((work / "classical.ini").string(),
              base_model + "\n[classical]\nt_end = 2.0\ndt = 0.001\nsave_stride = 20\n"
                           "gronwall_t = 1.0\n");
        const int rc = run(bin + " classical --config " + (work / "classical.ini").string() +
                           " --out " + (work / "cl").string());
        check(rc == 0, "classical run exits 0");
        check(fs::exists(work / "cl/trajectory.csv"), "trajectory.csv written");
        check(fs::exists(work / "cl/energy_drift.txt"), "energy_drift.txt written");
        check(fs::exists(work / "cl/gronwall.csv"), "gronwall.csv written");
        const std::string drift = slurp((work / "cl/energy_drift.txt").string());
        const auto pos = drift.find("relative_energy_drift: ");
        double val = 1.0;
        if (pos != std::string::npos) val = std::atof(drift.c_str() + pos + 23);
        check(val < 1e-6, "energy drift below 1e-6");
        const std::string traj = slurp((work / "cl/trajectory.csv").string());
        check(traj.find("# config_hash: ") != std::string::npos,
              "config hash embedded in trajectory.csv");
    }

    // --- classical: chi = 0, V = 0 matches the free closed form --------------
    {
        std::string free_cfg = base_model;
        auto pos = free_cfg.find("amplitude = 0.25");
        free_cfg.replace(pos, 16, "amplitude = 0.0 ");
        pos = free_cfg.find("preset = gaussian-well");
        free_cfg.replace(pos, 22, "preset = zero         ");
        write((work / "free.ini").string(),
              free_cfg + "\n[classical]\nt_end = 1.0\ndt = 0.001\nsave_stride = 1000\n"
                         "gronwall_t = 0.5\n");
        const int rc = run(bin + " classical --config " + (work / "free.ini").string() +
                           " --out " + (work / "free").string());
        check(rc == 0, "free classical run exits 0");
        std::istringstream is(slurp((work / "free/trajectory.csv").string()));
        std::string line, last;
        while (std::getline(is, line))
            if (!line.empty() && line[0] != '#') last = line;
        check(!last.empty(), "free trajectory has rows");
        // columns: t, p_1, q_1, ...
        double t = 0, p = 0, q = 0;
        std::sscanf(last.c_str(), "%lf,%lf,%lf", &t, &p, &q);
        const double expect = 0.5 + t * 0.3 / std::sqrt(0.3 * 0.3 + 1.0);
        check(std::abs(p - 0.3) < 1e-12, "free momentum conserved");
        check(std::abs(q - expect) < 1e-10, "free position matches the closed form");
    }

    // --- malformed config: exit 2, key named ---------------------------------
    {
        write((work / "bad.ini").string(), "[grid]\nkmax = oops\n");
        const std::string out = (work / "bad").string();
        const int rc = run(bin + " classical --config " + (work / "bad.ini").string() +
                           " --out " + out + " 2> " + (work / "bad.err").string());
        check(rc == 2, "malformed config exits 2");
        const std::string err = slurp((work / "bad.err").string());
        check(err.find("kmax") != std::string::npos, "error message names the key");
    }

    // --- quantum: reduced run writes the observable series -------------------
    {
        std::string qcfg = R"([model]
d = 1
n = 1
masses = 1.0
relativistic = true
sigma = 0.5
field_mass = 1.0

[grid]
kmax = 2.0
points = 3

[formfactor]
preset = gaussian
amplitude = 0.05
width = 2.0

[potential]
preset = gaussian-well
depth = 0.1
width = 1.5

[state]
p0 = 0.1
q0 = 0.3
alpha_re = 0.08
alpha_width = 2.0

[quantum]
hbar = 0.4
n_x = 32
length = 12.0
n_max = 4
t_end = 0.5
save_dt = 0.25
)";
        write((work / "quantum.ini").string(), qcfg);
        const int rc = run(bin + " quantum --config " + (work / "quantum.ini").string() +
                           " --out " + (work / "qu").string());
        check(rc == 0, "quantum run exits 0");
        const std::string obs = slurp((work / "qu/observables.csv").string());
        check(obs.find("t,hbar,q_mean,p_mean,re_a_0") != std::string::npos,
              "observables.csv has the documented columns");
    }

    // --- correspondence: impossible guard -> nonzero exit with hint ----------
    {
        std::string scfg = slurp(configs + "/sweep_default.ini");
        auto pos = scfg.find("hbar_list = 0.4, 0.2, 0.1, 0.05");
        scfg.replace(pos, 31, "hbar_list = 0.002, 0.001      ");
        pos = scfg.find("max_n_x = 256");
        scfg.replace(pos, 13, "max_n_x = 64 ");
        write((work / "impossible.ini").string(), scfg);
        const int rc = run(bin + " correspondence --config " +
                           (work / "impossible.ini").string() + " --out " +
                           (work / "imp").string() + " 2> " + (work / "imp.err").string());
        check(rc == 3, "impossible sweep guard exits 3");
        const std::string err = slurp((work / "imp.err").string());
        check(err.find("skipped") != std::string::npos, "per-hbar guard failure reported");
    }

    // --- verify: reduced suite, seed-pinned reruns byte-identical ------------
    {
        std::string vcfg = slurp(configs + "/verify_default.ini");
        auto rep = [&](const std::string& from, const std::string& to) {
            const auto p = vcfg.find(from);
            if (p != std::string::npos) vcfg.replace(p, from.size(), to);
        };
        rep("samples = 1000", "samples = 60");
        rep("hbar_list = 0.4, 0.2, 0.1, 0.05", "hbar_list = 0.4, 0.2");
        rep("n_x = 128", "n_x = 64");
        rep("length = 16.0", "length = 12.0");
        rep("n_max = 8", "n_max = 5");
        rep("envelope_samples = 32", "envelope_samples = 6");
        write((work / "verify.ini").string(), vcfg);
        const std::string cmd = bin + " verify --config " + (work / "verify.ini").string();
        const int rc1 = run(cmd + " --out " + (work / "v1").string() + " --seed 424242");
        const int rc2 = run(cmd + " --out " + (work / "v2").string() + " --seed 424242");
        check(rc1 == 0 && rc2 == 0, "reduced verify passes twice");
        check(slurp((work / "v1/certificates.csv").string()) ==
                  slurp((work / "v2/certificates.csv").string()),
              "seed-pinned reruns give byte-identical certificate tables");
        check(slurp((work / "v1/certificates.csv").string()).find("form_equivalence_lower") !=
                  std::string::npos,
              "certificate table lists the sandwich case");
    }

    // --- verify: violated assumption ceiling surfaces as failure -------------
    {
        std::string vcfg = slurp((work / "verify.ini").string());
        const auto pos = vcfg.find("ceiling_v_sup = 1e6");
        vcfg.replace(pos, 19, "ceiling_v_sup = 0.01");
        write((work / "verify_fail.ini").string(), vcfg);
        const int rc = run(bin + " verify --config " + (work / "verify_fail.ini").string() +
                           " --out " + (work / "vf").string() + " > " +
                           (work / "vf.out").string());
        check(rc == 1, "violated ceiling exits 1");
        const std::string out = slurp((work / "vf.out").string());
        check(out.find("v_sup") != std::string::npos, "failing assumption is named");
    }

    // --- usage error ----------------------------------------------------------
    {
        const int rc = run(bin + " classical 2> /dev/null");
        check(rc == 2, "missing required flags exit 2");
    }

    std::printf("%s: %d failure(s)\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
