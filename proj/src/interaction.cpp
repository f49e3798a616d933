#include "nkg/interaction.hpp"

#include <cmath>
#include <numbers>

namespace nkg {

using std::numbers::pi;

static void check_args(const Eigen::VectorXd& q, const Eigen::VectorXcd& alpha,
                       int j, const ModelConfig& cfg) {
    if (alpha.size() != cfg.grid.size())
        throw shape_error("interaction: field/grid size mismatch");
    if (j < 0 || j >= static_cast<int>(q.size()))
        throw shape_error("interaction: particle index out of range");
}

double interaction_I(const Eigen::VectorXd& q, const Eigen::VectorXcd& alpha,
                     int j, const ModelConfig& cfg) {
    check_args(q, alpha, j, cfg);
    complexd s = 0.0;
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        const double c = cfg.chi.eval(k) / std::sqrt(cfg.dispersion.omega(k));
        const complexd ph = std::polar(1.0, 2.0 * pi * k * q[j]);
        s += c * (alpha[i] * ph + std::conj(alpha[i]) * std::conj(ph));
    }
    return discard_imag(cfg.grid.dk * s, 1e-12, "interaction_I");
}

double grad_I(const Eigen::VectorXd& q, const Eigen::VectorXcd& alpha,
              int j, const ModelConfig& cfg) {
    check_args(q, alpha, j, cfg);
    complexd s = 0.0;
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double k = cfg.grid.points[i];
        const double c = cfg.chi.eval(k) / std::sqrt(cfg.dispersion.omega(k));
        const complexd ph = std::polar(1.0, 2.0 * pi * k * q[j]);
        s += complexd(0.0, 2.0 * pi * k) * c * (alpha[i] * ph - std::conj(alpha[i]) * std::conj(ph));
    }
    return discard_imag(cfg.grid.dk * s, 1e-12, "grad_I");
}

double hamiltonian_classical(const ClassicalState& u, const ModelConfig& cfg) {
    double h = cfg.potential.value(u.q);
    for (int j = 0; j < cfg.n; ++j)
        h += cfg.kinetic(u.p[j], j);
    for (int i = 0; i < cfg.grid.size(); ++i)
        h += cfg.grid.dk * cfg.dispersion.omega(cfg.grid.points[i]) * std::norm(u.alpha[i]);
    for (int j = 0; j < cfg.n; ++j)
        h += interaction_I(u.q, u.alpha, j, cfg);
    return h;
}

double grad_I_bound(const ModelConfig& cfg, double alpha_l2) {
    return 4.0 * pi * weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, 0.5) * alpha_l2;
}

GradILipschitz grad_I_lipschitz(const ModelConfig& cfg) {
    GradILipschitz l;
    l.alpha_coeff = 4.0 * pi * weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, 0.5);
    l.q_coeff = 8.0 * std::sqrt(2.0) * pi * pi *
                weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, 1.5 - cfg.sigma);
    return l;
}

} // namespace nkg
