#include "nkg/model_config.hpp"

#include <cmath>
#include <string>

namespace nkg {

ClassicalState ClassicalState::zero(int dn, int n_modes) {
    ClassicalState u;
    u.p = Eigen::VectorXd::Zero(dn);
    u.q = Eigen::VectorXd::Zero(dn);
    u.alpha = Eigen::VectorXcd::Zero(n_modes);
    return u;
}

ClassicalState& ClassicalState::operator+=(const ClassicalState& o) {
    p += o.p;
    q += o.q;
    alpha += o.alpha;
    return *this;
}

ClassicalState& ClassicalState::operator-=(const ClassicalState& o) {
    p -= o.p;
    q -= o.q;
    alpha -= o.alpha;
    return *this;
}

ClassicalState& ClassicalState::operator*=(double s) {
    p *= s;
    q *= s;
    alpha *= s;
    return *this;
}

bool ClassicalState::finite() const {
    return p.allFinite() && q.allFinite() && alpha.allFinite();
}

void ModelConfig::validate() const {
    if (d != 1)
        throw config_error("ModelConfig: only d = 1 is supported");
    if (n < 1)
        throw config_error("ModelConfig: particle count n must be >= 1");
    if (masses.size() != n)
        throw config_error("ModelConfig: need one mass per particle");
    for (int j = 0; j < n; ++j)
        if (!(masses[j] > 0.0))
            throw config_error("ModelConfig: particle masses must be positive");
    if (!(dispersion.mass > 0.0))
        throw config_error("ModelConfig: field mass must be positive");
    if (!(sigma >= 0.5 && sigma <= 1.0))
        throw config_error("ModelConfig: sigma must lie in [1/2, 1]");
    grid.validate();
}

double ModelConfig::kinetic(double pj, int j) const {
    const double M = masses[j];
    return relativistic ? std::sqrt(pj * pj + M * M) : pj * pj / (2.0 * M);
}

double ModelConfig::kinetic_grad(double pj, int j) const {
    const double M = masses[j];
    return relativistic ? pj / std::sqrt(pj * pj + M * M) : pj / M;
}

double ModelConfig::kinetic_grad_lipschitz() const {
    // sqrt(p^2+M^2) has f'' = M^2 (p^2+M^2)^{-3/2} <= 1/M; p^2/2M has f'' = 1/M
    double l = 0.0;
    for (int j = 0; j < n; ++j) l = std::max(l, 1.0 / masses[j]);
    return l;
}

static void check_shape(const ClassicalState& u, const ModelConfig& cfg) {
    if (u.alpha.size() != cfg.grid.size())
        throw shape_error("state field has " + std::to_string(u.alpha.size()) +
                          " modes but grid has " + std::to_string(cfg.grid.size()));
    if (u.p.size() != cfg.dn() || u.q.size() != cfg.dn())
        throw shape_error("state particle vectors do not match d*n");
}

double xsigma_norm(const ClassicalState& u, const ModelConfig& cfg, double sigma) {
    check_shape(u, cfg);
    double s = u.p.squaredNorm() + u.q.squaredNorm();
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double w = cfg.dispersion.omega(cfg.grid.points[i]);
        s += cfg.grid.dk * std::pow(w, 2.0 * sigma) * std::norm(u.alpha[i]);
    }
    return std::sqrt(s);
}

double xsigma_norm(const ClassicalState& u, const ModelConfig& cfg) {
    return xsigma_norm(u, cfg, cfg.sigma);
}

double gsigma_norm(const Eigen::VectorXcd& alpha, const ModelConfig& cfg, double sigma) {
    if (alpha.size() != cfg.grid.size())
        throw shape_error("gsigma_norm: field/grid size mismatch");
    double s = 0.0;
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double w = cfg.dispersion.omega(cfg.grid.points[i]);
        s += cfg.grid.dk * std::pow(w, 2.0 * sigma) * std::norm(alpha[i]);
    }
    return std::sqrt(s);
}

double xsigma_real_inner(const ClassicalState& a, const ClassicalState& b,
                         const ModelConfig& cfg, double sigma) {
    check_shape(a, cfg);
    check_shape(b, cfg);
    double s = a.p.dot(b.p) + a.q.dot(b.q);
    for (int i = 0; i < cfg.grid.size(); ++i) {
        const double w = cfg.dispersion.omega(cfg.grid.points[i]);
        s += cfg.grid.dk * std::pow(w, 2.0 * sigma) * std::real(std::conj(a.alpha[i]) * b.alpha[i]);
    }
    return s;
}

double discard_imag(complexd z, double tol, const char* what) {
    const double scale = std::max(1.0, std::abs(z.real()));
    if (std::abs(z.imag()) > tol * scale)
        throw numeric_error(std::string(what) + ": imaginary residue " +
                            std::to_string(z.imag()) + " exceeds tolerance");
    return z.real();
}

} // namespace nkg
