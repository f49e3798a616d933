#include "nkg/particle_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nkg {

using std::numbers::pi;

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

ParticleGrid::ParticleGrid(int n_points, double length) : n_(n_points), length_(length) {
    if (!is_power_of_two(n_points))
        throw config_error("ParticleGrid: n_points must be a power of two");
    if (!(length > 0.0))
        throw config_error("ParticleGrid: length must be positive");
    x_.resize(n_);
    for (int i = 0; i < n_; ++i)
        x_[i] = -length_ / 2.0 + dx() * i;
    dft_.resize(n_, n_);
    const double norm = 1.0 / std::sqrt(double(n_));
    for (int m = 0; m < n_; ++m)
        for (int j = 0; j < n_; ++j)
            dft_(m, j) = norm * std::polar(1.0, -2.0 * pi * double(m) * double(j) / n_);
}

Eigen::VectorXd ParticleGrid::momenta(double hbar) const {
    Eigen::VectorXd p(n_);
    for (int m = 0; m < n_; ++m) {
        const int mm = m < n_ / 2 ? m : m - n_;
        p[m] = hbar * 2.0 * pi / length_ * mm;
    }
    return p;
}

Eigen::MatrixXcd ParticleGrid::fourier_multiplier(const Eigen::VectorXcd& diag) const {
    if (diag.size() != n_) throw shape_error("fourier_multiplier: diagonal size mismatch");
    return dft_.adjoint() * diag.asDiagonal() * dft_;
}

Eigen::MatrixXcd ParticleGrid::kinetic_matrix(const ModelConfig& cfg, int j, double hbar) const {
    const Eigen::VectorXd p = momenta(hbar);
    Eigen::VectorXcd diag(n_);
    for (int m = 0; m < n_; ++m)
        diag[m] = cfg.kinetic(p[m], j);
    return fourier_multiplier(diag);
}

Eigen::MatrixXcd weyl_particle(const ParticleGrid& grid, complexd z, double hbar) {
    if (!(hbar > 0.0 && hbar <= 1.0))
        throw config_error("weyl_particle: hbar must lie in (0, 1]");
    const double qz = z.real();
    const double pz = z.imag();
    // the translation by hbar*qz is realized in Fourier space, which is exact
    // for band-limited states at any shift, sub-grid ones included
    const int n = grid.size();
    const Eigen::VectorXd p = grid.momenta(hbar);
    Eigen::VectorXcd tdiag(n);
    for (int m = 0; m < n; ++m)
        tdiag[m] = std::polar(1.0, -qz * p[m]); // e^{-i q_z phat}
    Eigen::MatrixXcd w = grid.fourier_multiplier(tdiag);
    const complexd bch = std::polar(1.0, -hbar * pz * qz / 2.0);
    for (int i = 0; i < n; ++i) {
        const complexd plane = std::polar(1.0, pz * grid.x()[i]);
        w.row(i) *= bch * plane;
    }
    return w;
}

Eigen::VectorXcd coherent_wavepacket(const ParticleGrid& grid, double q0, double p0,
                                     double hbar) {
    const int n = grid.size();
    Eigen::VectorXcd psi(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x()[i];
        const double g = std::exp(-(x - q0) * (x - q0) / (2.0 * hbar));
        psi[i] = g * std::polar(1.0, p0 * x / hbar - p0 * q0 / (2.0 * hbar));
    }
    psi /= psi.norm(); // unit ell^2 norm replaces the (pi hbar)^{-1/4} sqrt(dx) weight
    return psi;
}

void check_wavepacket_guards(const ParticleGrid& grid, double hbar, double q_abs_max,
                             double p_abs_max, double tail) {
    const double log_tail = -std::log(tail);
    // position window: gaussian mass beyond L/2 is exp(-(L/2-|q|)^2/hbar)
    const double margin = grid.length() / 2.0 - q_abs_max;
    if (margin <= 0.0 || margin * margin / hbar < log_tail)
        throw config_error("particle grid too short for the requested packet center");
    // momentum window: content at the band edge is exp(-(p_edge-|p|)^2/hbar)
    const double p_edge = hbar * pi / grid.dx();
    const double pmargin = p_edge - p_abs_max;
    if (pmargin <= 0.0 || pmargin * pmargin / hbar < log_tail)
        throw config_error("particle grid too coarse: momentum " + std::to_string(p_abs_max) +
                           " does not fit the band edge " + std::to_string(p_edge) +
                           "; increase n_points");
}

} // namespace nkg
