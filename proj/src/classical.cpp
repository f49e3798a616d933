#include "nkg/classical.hpp"

#include <cmath>
#include <numbers>

namespace nkg {

using std::numbers::pi;

ClassicalState nonlinearity(const ClassicalState& u, const ModelConfig& cfg) {
    ClassicalState out = ClassicalState::zero(cfg.dn(), cfg.grid.size());
    const Eigen::VectorXd grad_v = cfg.potential.gradient(u.q);
    for (int j = 0; j < cfg.n; ++j) {
        out.p[j] = -grad_v[j] - grad_I(u.q, u.alpha, j, cfg);
        out.q[j] = cfg.kinetic_grad(u.p[j], j);
    }
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        const double c = cfg.chi.eval(k) / std::sqrt(cfg.dispersion.omega(k));
        complexd s = 0.0;
        for (int j = 0; j < cfg.n; ++j)
            s += std::polar(1.0, -2.0 * pi * k * u.q[j]);
        out.alpha[i] = complexd(0.0, -1.0) * c * s;
    }
    return out;
}

ClassicalState free_flow(double t, const ClassicalState& u, const ModelConfig& cfg) {
    ClassicalState out = u;
    for (int i = 0; i < cfg.grid.size(); ++i)
        out.alpha[i] *= std::polar(1.0, -t * cfg.dispersion.omega(cfg.grid.points[i]));
    return out;
}

ClassicalState vector_field(double t, const ClassicalState& u, const ModelConfig& cfg) {
    ClassicalState flowed = free_flow(t, u, cfg);
    ClassicalState out = nonlinearity(flowed, cfg);
    for (int i = 0; i < cfg.grid.size(); ++i)
        out.alpha[i] *= std::polar(1.0, t * cfg.dispersion.omega(cfg.grid.points[i]));
    return out;
}

ClassicalState pfe_rhs(const ClassicalState& u, const ModelConfig& cfg) {
    ClassicalState out = nonlinearity(u, cfg);
    for (int i = 0; i < cfg.grid.size(); ++i)
        out.alpha[i] += complexd(0.0, -cfg.dispersion.omega(cfg.grid.points[i])) * u.alpha[i];
    return out;
}

namespace {

// alpha *= e^{-i h omega}, p and q untouched
void half_free(ClassicalState& u, const Eigen::VectorXd& omega, double h) {
    for (int i = 0; i < omega.size(); ++i)
        u.alpha[i] *= std::polar(1.0, -h * omega[i]);
}

void check_blowup(const ClassicalState& u, const ModelConfig& cfg, double t,
                  double limit) {
    if (!u.finite() || xsigma_norm(u, cfg, 0.0) > limit)
        throw blowup_error("integration blew up", t);
}

// One Lawson-RK4 step for u' = L u + N(u) with L = diag(0, 0, -i omega):
// classical RK4 applied to the exactly rotated variable.
ClassicalState step_direct(const ClassicalState& u, double h,
                           const Eigen::VectorXd& omega, const ModelConfig& cfg) {
    ClassicalState k1 = nonlinearity(u, cfg);

    ClassicalState s2 = u + (h / 2.0) * k1;
    half_free(s2, omega, h / 2.0);
    ClassicalState k2 = nonlinearity(s2, cfg);

    ClassicalState uh = u;
    half_free(uh, omega, h / 2.0); // E_{h/2} u
    ClassicalState k3 = nonlinearity(uh + (h / 2.0) * k2, cfg);

    ClassicalState k3r = k3;
    half_free(k3r, omega, h / 2.0);
    ClassicalState uf = uh;
    half_free(uf, omega, h / 2.0); // E_h u
    ClassicalState k4 = nonlinearity(uf + h * k3r, cfg);

    ClassicalState k1r = k1;
    half_free(k1r, omega, h); // E_h k1
    ClassicalState k23 = k2 + k3;
    half_free(k23, omega, h / 2.0); // E_{h/2} (k2 + k3)

    return uf + (h / 6.0) * (k1r + 2.0 * k23 + k4);
}

ClassicalState step_interaction(double t, const ClassicalState& u, double h,
                                const ModelConfig& cfg) {
    ClassicalState k1 = vector_field(t, u, cfg);
    ClassicalState k2 = vector_field(t + h / 2.0, u + (h / 2.0) * k1, cfg);
    ClassicalState k3 = vector_field(t + h / 2.0, u + (h / 2.0) * k2, cfg);
    ClassicalState k4 = vector_field(t + h, u + h * k3, cfg);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

Trajectory integrate(const ClassicalState& u0, double T, double dt, Picture picture,
                     const ModelConfig& cfg, const IntegrateOptions& opts) {
    if (!(dt > 0.0) || T < 0.0)
        throw config_error("integrate: need dt > 0 and T >= 0");
    if (u0.alpha.size() != cfg.grid.size())
        throw shape_error("integrate: initial state does not match grid");

    const Eigen::VectorXd omega = cfg.omega();
    const long n_steps = std::lround(T / dt);

    Trajectory traj;
    traj.picture = picture;
    traj.dt = dt;
    traj.times.push_back(0.0);
    traj.states.push_back(u0);

    ClassicalState u = u0;
    for (long s = 0; s < n_steps; ++s) {
        const double t = s * dt;
        u = (picture == Picture::direct) ? step_direct(u, dt, omega, cfg)
                                         : step_interaction(t, u, dt, cfg);
        check_blowup(u, cfg, t, opts.blowup_norm);
        if ((s + 1) % opts.save_stride == 0 || s + 1 == n_steps) {
            traj.times.push_back((s + 1) * dt);
            traj.states.push_back(u);
        }
    }
    return traj;
}

ClassicalState to_direct_picture(const Trajectory& traj, int index, const ModelConfig& cfg) {
    if (traj.picture == Picture::direct) return traj.states[index];
    return free_flow(traj.times[index], traj.states[index], cfg);
}

double energy_drift(const Trajectory& traj, const ModelConfig& cfg) {
    if (traj.picture != Picture::direct)
        throw config_error("energy_drift expects a direct-picture trajectory");
    if (traj.states.empty()) return 0.0;
    const double h0 = hamiltonian_classical(traj.states.front(), cfg);
    const double scale = std::max(1.0, std::abs(h0));
    double drift = 0.0;
    for (const auto& u : traj.states)
        drift = std::max(drift, std::abs(hamiltonian_classical(u, cfg) - h0) / scale);
    return drift;
}

double duhamel_residual(const Trajectory& traj, const ModelConfig& cfg) {
    if (traj.picture != Picture::direct)
        throw config_error("duhamel_residual expects a direct-picture trajectory");
    const int n = static_cast<int>(traj.states.size()) - 1;
    if (n < 2 || n % 2 != 0)
        throw config_error("duhamel_residual needs an even number of saved intervals");
    const double T = traj.times.back();
    const double h = traj.times[1] - traj.times[0];

    // integral_0^T free_flow(T-s, N(u(s))) ds, composite Simpson
    ClassicalState acc = ClassicalState::zero(cfg.dn(), cfg.grid.size());
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        ClassicalState term =
            free_flow(T - traj.times[i], nonlinearity(traj.states[i], cfg), cfg);
        acc += (w * h / 3.0) * term;
    }

    ClassicalState res = traj.states.back() - free_flow(T, traj.states.front(), cfg) - acc;
    return xsigma_norm(res, cfg);
}

double nonlinearity_lipschitz(const ModelConfig& cfg, double sup_xsigma) {
    const GradILipschitz lip = grad_I_lipschitz(cfg);
    const double rn = std::sqrt(double(cfg.n));
    // p-components: ||dN_p|| <= a_pq |dq| + a_pa ||dalpha||
    const double a_pq = rn * cfg.potential.sup_hessian + lip.q_coeff * sup_xsigma;
    const double a_pa = rn * lip.alpha_coeff;
    // q-components: ||dN_q|| <= L_f |dp|
    const double a_q = cfg.kinetic_grad_lipschitz();
    // alpha component: |e^{ix} - e^{iy}| <= |x - y| and |k| <= omega give
    // ||dN_alpha|| <= 2 pi ||omega^{1/2} chi|| sum_j |dq_j| <= a_a |dq|
    const double a_a =
        2.0 * pi * weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, 0.5) * rn;
    // combine with (x + y)^2 <= 2 x^2 + 2 y^2
    const double c2 = std::max({2.0 * a_pq * a_pq + a_a * a_a, 2.0 * a_pa * a_pa, a_q * a_q});
    return std::sqrt(c2);
}

double nonlinearity_bound(const ModelConfig& cfg, double c0) {
    const double np12 = weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, 0.5);
    const double ns12 = weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, cfg.sigma - 0.5);
    const double mf_sigma = std::pow(cfg.dispersion.mass, cfg.sigma);
    // per-particle p-component, using ||alpha||_{L2} <= ||alpha||_{G^sigma} / m_f^sigma
    const double c2 = cfg.potential.sup_gradient + 4.0 * pi * np12 / mf_sigma * c0;
    // q-components together: |grad f_j(p_j)| <= |p_j| / M_j, so the euclidean
    // norm over j is at most L_f ||p|| <= L_f c0
    const double c4 = cfg.kinetic_grad_lipschitz() * c0;
    const double c5 = cfg.n * ns12; // ||N_alpha||_{G^sigma}
    return std::sqrt(cfg.n * c2 * c2 + c4 * c4 + c5 * c5);
}

double vector_field_bound(const ModelConfig& cfg) {
    const double np12 = weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, 0.5);
    const double ns12 = weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, cfg.sigma - 0.5);
    const double rn = std::sqrt(double(cfg.n));
    // ||v_p||     <= ||grad V||_inf + sqrt(n) 4 pi ||omega^{1/2} chi|| ||alpha||
    // ||v_q||     <= sqrt(n) (semi-relativistic, |grad f| < 1) or L_f ||p||
    // ||v_alpha||_{G^sigma} <= n ||omega^{sigma-1/2} chi||
    // so with ||alpha||, ||p|| <= ||u||_{X^0} <= 1 + ||u||_{X^0}^2 the X^sigma
    // norm of v is at most C (1 + ||u||^2) with
    double c = cfg.potential.sup_gradient + cfg.n * ns12 + rn * 4.0 * pi * np12;
    c += cfg.relativistic ? rn : cfg.kinetic_grad_lipschitz();
    return c;
}

GronwallReport gronwall_divergence(const ClassicalState& u0a, const ClassicalState& u0b,
                                   double T, double dt, const ModelConfig& cfg) {
    if (u0a.alpha.size() != u0b.alpha.size())
        throw shape_error("gronwall_divergence: states on different grids");

    Trajectory ta = integrate(u0a, T, dt, Picture::direct, cfg);
    Trajectory tb = integrate(u0b, T, dt, Picture::direct, cfg);

    double sup_b = 0.0;
    for (const auto& u : tb.states)
        sup_b = std::max(sup_b, xsigma_norm(u, cfg));

    GronwallReport rep;
    rep.rate_constant = nonlinearity_lipschitz(cfg, sup_b);
    const double gap0 = xsigma_norm(u0a - u0b, cfg, 0.0);
    double sxy = 0.0, sxx = 0.0; // least squares for log gap vs t, through t=0
    for (size_t i = 0; i < ta.states.size(); ++i) {
        const double t = ta.times[i];
        const double gap = xsigma_norm(ta.states[i] - tb.states[i], cfg, 0.0);
        const double env = std::exp(rep.rate_constant * t) * gap0;
        rep.times.push_back(t);
        rep.gaps.push_back(gap);
        rep.envelopes.push_back(env);
        if (gap > env * (1.0 + 1e-12)) rep.envelope_ok = false;
        if (gap0 > 0.0 && gap > 0.0 && t > 0.0) {
            sxy += t * std::log(gap / gap0);
            sxx += t * t;
        }
    }
    rep.fitted_rate = sxx > 0.0 ? sxy / sxx : 0.0;
    return rep;
}

} // namespace nkg
