#ifndef NKG_PARTICLE_GRID_HPP
#define NKG_PARTICLE_GRID_HPP

#include <Eigen/Dense>

#include "nkg/model_config.hpp"

namespace nkg {

// Periodic position grid for one particle in one dimension.  States are
// stored as ell^2 coefficient vectors (the sqrt(dx) weight is folded in), so
// every operator is a plain matrix on C^{N_x}.  The momentum operator is the
// discrete Fourier multiplier hbar (2 pi / length) m with m the
// nearest-to-zero mode representative.
class ParticleGrid {
public:
    ParticleGrid(int n_points, double length);

    int size() const { return n_; }
    double length() const { return length_; }
    double dx() const { return length_ / n_; }
    const Eigen::VectorXd& x() const { return x_; } // x_i in [-L/2, L/2)

    // momentum eigenvalue of DFT mode m at the given hbar
    Eigen::VectorXd momenta(double hbar) const;

    // unitary DFT matrix and its adjoint
    const Eigen::MatrixXcd& dft() const { return dft_; }

    // diag(g(p_m)) in the position representation: F^dag diag F
    Eigen::MatrixXcd fourier_multiplier(const Eigen::VectorXcd& diag) const;

    // f(p hat) for the configured kinetic energy of particle j
    Eigen::MatrixXcd kinetic_matrix(const ModelConfig& cfg, int j, double hbar) const;

    Eigen::VectorXcd to_fourier(const Eigen::VectorXcd& psi) const { return dft_ * psi; }
    Eigen::VectorXcd from_fourier(const Eigen::VectorXcd& ph) const {
        return dft_.adjoint() * ph;
    }

private:
    int n_;
    double length_;
    Eigen::VectorXd x_;
    Eigen::MatrixXcd dft_;
};

// W1(z) = e^{i (p_z . qhat - q_z . phat)} for z = q_z + i p_z, realized as
// BCH phase x plane-wave multiplication x Fourier-space translation:
//   W1(z) psi = e^{-i hbar p_z q_z / 2} e^{i p_z x} psi(x - hbar q_z)
Eigen::MatrixXcd weyl_particle(const ParticleGrid& grid, complexd z, double hbar);

// Normalized gaussian wavepacket centered at (q0, p0):
//   (pi hbar)^{-1/4} e^{-(x-q0)^2 / 2 hbar} e^{i p0 x / hbar} e^{-i p0 q0 / (2 hbar)}
// which equals W1((q0 + i p0)/hbar) applied to the centered gaussian.
Eigen::VectorXcd coherent_wavepacket(const ParticleGrid& grid, double q0, double p0,
                                     double hbar);

// Guards for representing a width-sqrt(hbar) packet at momentum p_max:
// spectral tail below `tail` both in position and momentum space.
void check_wavepacket_guards(const ParticleGrid& grid, double hbar, double q_abs_max,
                             double p_abs_max, double tail = 1e-7);

} // namespace nkg

#endif
