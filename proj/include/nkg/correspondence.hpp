#ifndef NKG_CORRESPONDENCE_HPP
#define NKG_CORRESPONDENCE_HPP

#include <string>
#include <vector>

#include "nkg/classical.hpp"
#include "nkg/nelson.hpp"

namespace nkg {

// Weyl test point xi = (p0, q0, alpha0) with the field part on the quantum
// mode set.
struct TestPoint {
    Eigen::VectorXd p0, q0;   // dn each
    Eigen::VectorXcd alpha0;  // one per retained mode

    static TestPoint zero(int dn, int n_modes);
    double x0_norm(double dk) const;
};

// Q(xi, u) = i Im<z, z0> + sqrt(2) i Re<alpha0, alpha>, with
// Im<z, z'> = q . p' - p . q'.
complexd q_phase(const TestPoint& xi, const ClassicalState& u, const ModelConfig& cfg);

// Re<xi, u>_{X^0} = p0 . p + q0 . q + dk Re sum conj(alpha0) alpha
double re_inner_x0(const TestPoint& xi, const ClassicalState& u, double dk);

// <psi, W1(2 pi i z0) (x) W2(sqrt(2) pi alpha0) psi>: the Weyl characteristic
// function with the test-point scaling (2 pi q0, -2 pi p0, sqrt(2) pi alpha0).
complexd characteristic_quantum(const QuantumState& psi, const TestPoint& xi,
                                const HamiltonianAssembly& h);

// Classical symbol
//   b(s, xi) = - sum_j grad f_j(p_j) . p0_j - sum_j grad_{q_j} V . q0_j
//              + sum_j 2 Re<alpha, b_j0(s)> + sqrt(2) sum_j Im<g_j(s), alpha0>
// with b_j0(s)(k) = 2 pi i k q0_j (chi/sqrt(omega)) e^{-2 pi i k q_j + i s omega}
// and  g_j(s)(k)  =               (chi/sqrt(omega)) e^{-2 pi i k q_j + i s omega}.
double b_symbol(double s, const TestPoint& xi, const ClassicalState& u, const ModelConfig& cfg);

// The same symbol through the identity b(s, xi) = -2 pi Re<v(s, u), xi~>_{X^0}
// with xi~ = (z0 / (2 i pi), alpha0 / (sqrt(2) pi)).
double b_symbol_via_vector_field(double s, const TestPoint& xi, const ClassicalState& u,
                                 const ModelConfig& cfg);

struct ResidualResult {
    complexd residual_mean;   // mean over samples of the per-sample defect
    double residual = 0.0;    // |residual_mean|
    double mc_stderr = 0.0;   // standard error of the complex mean
    int n_samples = 0;
};

// Monte-Carlo defect of the transport identity for the empirical measure:
//   mean_i [ F_i(t) - F_i(t0) - 2 pi i trapz_s F_i(s) Re<v(s,u_i(s)), xi>_{X^sigma} ]
// with F_i(s) = e^{2 pi i Re<xi, u_i(s)>_{X^sigma}} and u_i flowing under the
// rotated-frame field u' = v(t, u) from t0; trapezoid step = RK4 step = dt.
ResidualResult characteristic_residual(const std::vector<ClassicalState>& samples,
                                       const TestPoint& xi, double t0, double t, double dt,
                                       const ModelConfig& cfg, Exec exec = Exec::omp);

// Evaluation-order check of the push-forward bookkeeping: mean over flowed
// samples of e^{2 pi i Re<xi,.>} versus mean of the same function composed
// with the flow, returned as the worst absolute difference over the panel.
// fault_offset shifts the second path's initial states (tests only).
double pushforward_check(const std::vector<ClassicalState>& samples, double t, double dt,
                         const std::vector<TestPoint>& panel, const ModelConfig& cfg,
                         double fault_offset = 0.0);

// Gaussian cloud around `center`: i.i.d. normal in p and q, complex normal in
// each mode amplitude with a chi-shaped envelope so the cloud stays regular.
std::vector<ClassicalState> gaussian_cloud(const ClassicalState& center, double spread_pq,
                                           double spread_field, int count,
                                           const ModelConfig& cfg, unsigned long seed);

std::vector<TestPoint> default_test_panel(const ModelConfig& cfg, double scale, int n_fixed,
                                          int n_random, unsigned long seed);

struct SweepRow {
    double hbar = 0.0;
    double t = 0.0;
    double err_q = 0.0;
    double err_p = 0.0;
    Eigen::VectorXd err_modes;   // per retained mode
    double err_char = 0.0;       // max over the test panel
    double leakage = 0.0;
    int n_x = 0;
    int n_max = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
    std::string centering_note;
    unsigned long seed = 0;
    int completed_hbars = 0;
    // per error column: true when the column is non-increasing along
    // decreasing hbar within the given slack at every t; values below the
    // floor count as zero.  Columns whose classical limit is exact (conserved
    // momenta, the k = 0 mode) carry only propagator and truncation noise,
    // bounded by the leakage budget; genuine error columns sit orders of
    // magnitude above it.
    bool monotone(double slack = 0.10, double floor = 1e-6) const;
};

struct SweepOptions {
    int base_n_x = 64;
    double length = 16.0;
    int max_n_x = 256;
    int base_n_max = 4;
    int max_n_max = 24;
    double leak_threshold = 1e-6;
    double classical_dt = 1e-3;
    double panel_scale = 0.2;
    int panel_fixed = 8;
    int panel_random = 8;
    unsigned long seed = 20240817;
    EvolveOptions evolve;
};

// For each hbar (strictly decreasing): prepare the coherent state on an
// auto-sized grid/cap, evolve to each t, and record observable and Weyl
// characteristic-function errors against the classical flow on the same mode
// set.  Guard failures skip the hbar and are reported as warnings.
SweepReport hbar_sweep(const ClassicalState& u0, const std::vector<double>& hbar_list,
                       const std::vector<double>& t_list, const ModelConfig& cfg,
                       const SweepOptions& opts = {});

} // namespace nkg

#endif
