#ifndef NKG_MODEL_CONFIG_HPP
#define NKG_MODEL_CONFIG_HPP

#include <complex>

#include <Eigen/Dense>

#include "nkg/errors.hpp"
#include "nkg/grid.hpp"
#include "nkg/potential.hpp"

namespace nkg {

using complexd = std::complex<double>;

// u = (p, q, alpha): particle momenta/positions plus the complex field
// profile sampled on the k-grid.
struct ClassicalState {
    Eigen::VectorXd p;      // dn
    Eigen::VectorXd q;      // dn
    Eigen::VectorXcd alpha; // one value per grid point

    static ClassicalState zero(int dn, int n_modes);

    ClassicalState& operator+=(const ClassicalState& o);
    ClassicalState& operator-=(const ClassicalState& o);
    ClassicalState& operator*=(double s);
    friend ClassicalState operator+(ClassicalState a, const ClassicalState& b) { return a += b; }
    friend ClassicalState operator-(ClassicalState a, const ClassicalState& b) { return a -= b; }
    friend ClassicalState operator*(double s, ClassicalState a) { return a *= s; }

    bool finite() const;
};

// Everything that defines H and its quantization.
struct ModelConfig {
    int d = 1;                 // spatial dimension (only d = 1 is supported)
    int n = 1;                 // particle count
    Eigen::VectorXd masses;    // n entries, all > 0
    bool relativistic = true;  // f_j(p) = sqrt(p^2 + M_j^2) vs p^2 / (2 M_j)
    Dispersion dispersion;
    FormFactor chi = FormFactor::gaussian(0.25, 2.0);
    Potential potential = Potential::zero();
    KGrid grid = KGrid::symmetric(8.0, 129);
    double sigma = 0.5;        // field regularity index, in [1/2, 1]

    void validate() const;
    int dn() const { return d * n; }

    // kinetic energy and its derivative for particle j
    double kinetic(double pj, int j) const;
    double kinetic_grad(double pj, int j) const;
    // Lipschitz bound for grad f_j, i.e. sup |f_j''| = 1 / M_j in both cases
    double kinetic_grad_lipschitz() const;

    Eigen::VectorXd omega() const { return dispersion.omega_on(grid); }
    Eigen::VectorXd chi_values() const { return chi.values_on(grid); }
};

// Discrete X^sigma norm:
//   ||u||^2 = sum_j (|q_j|^2 + |p_j|^2) + dk sum_i omega(k_i)^{2 sigma} |alpha_i|^2
double xsigma_norm(const ClassicalState& u, const ModelConfig& cfg, double sigma);
double xsigma_norm(const ClassicalState& u, const ModelConfig& cfg); // sigma from cfg

// ||alpha||_{G^sigma} alone
double gsigma_norm(const Eigen::VectorXcd& alpha, const ModelConfig& cfg, double sigma);

// X^sigma inner product Re<a, b> (particle part euclidean, field part
// dk-weighted with omega^{2 sigma})
double xsigma_real_inner(const ClassicalState& a, const ClassicalState& b,
                         const ModelConfig& cfg, double sigma);

// Drops an imaginary residue below `tol` from an analytically-real quantity;
// raises numeric_error above it.
double discard_imag(complexd z, double tol = 1e-12, const char* what = "quantity");

} // namespace nkg

#endif
