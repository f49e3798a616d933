#ifndef NKG_NELSON_HPP
#define NKG_NELSON_HPP

#include <memory>
#include <mutex>
#include <vector>

#include "nkg/fock.hpp"
#include "nkg/model_config.hpp"
#include "nkg/particle_grid.hpp"

namespace nkg {

// Execution policy for the product-space kernels.  The serial path is the
// reference implementation; the OpenMP path must produce bit-identical
// results (each output element is written by exactly one thread).
enum class Exec { serial, omp };

// State on (particle grid) x (truncated Fock space), coefficient layout
// g = ifock * N_x + ix, so the vector viewed as an N_x x dim(Fock) matrix has
// one Fock column per field basis state.
struct QuantumState {
    Eigen::VectorXcd c;
    double hbar = 1.0;

    double norm() const { return c.norm(); }
    Eigen::Map<const Eigen::MatrixXcd> matrix(int n_x) const {
        return {c.data(), n_x, static_cast<Eigen::Index>(c.size() / n_x)};
    }
    Eigen::Map<Eigen::MatrixXcd> matrix(int n_x) {
        return {c.data(), n_x, static_cast<Eigen::Index>(c.size() / n_x)};
    }
};

struct EvolveOptions {
    int dense_threshold = 4096; // full eigendecomposition up to this dimension
    double krylov_dt = 0.01;
    double krylov_tol = 1e-10; // per-step error estimate
    int krylov_max_dim = 90;
    bool force_krylov = false;
    Exec exec = Exec::omp;
};

// The discretized Hamiltonian
//   H = f(phat) + V(qhat) + dGamma(omega) + sum_i [ a_i (x) conj(c_i)(qhat) + h.c. ]
// with c_i(x) = sqrt(dk) chi(k_i)/sqrt(omega(k_i)) e^{-2 pi i k_i x}.
// Immutable after construction; the eigendecomposition is computed once on
// demand and cached.
class HamiltonianAssembly {
public:
    HamiltonianAssembly(const ModelConfig& cfg, const ParticleGrid& pgrid,
                        const FockBasis& fbasis, double hbar);

    int dim() const { return pgrid_.size() * fbasis_.dim(); }
    double hbar() const { return hbar_; }
    const ParticleGrid& pgrid() const { return pgrid_; }
    const FockBasis& fbasis() const { return fbasis_; }
    const ModelConfig& cfg() const { return cfg_; }
    double hermiticity_deficit() const { return hermiticity_deficit_; }

    const Eigen::MatrixXcd& kinetic() const { return kinetic_; }
    const Eigen::VectorXd& v_diag() const { return v_diag_; }
    const Eigen::VectorXd& dgamma_omega() const { return dgamma_omega_; }
    const std::vector<Eigen::VectorXcd>& mode_coupling() const { return mode_coupling_; }

    // y = H x (matrix-free)
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y, Exec exec = Exec::omp) const;
    // y = H0 x = (f(phat) + dGamma(omega)) x
    void apply_free(const Eigen::VectorXcd& x, Eigen::VectorXcd& y, Exec exec = Exec::omp) const;
    // y = H1 x (interaction term only)
    void apply_interaction(const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                           Exec exec = Exec::omp) const;

    Eigen::MatrixXcd dense() const;

    struct Eigendecomposition {
        Eigen::VectorXd values;
        Eigen::MatrixXcd vectors;
    };
    const Eigendecomposition& eigendecomposition() const;

private:
    ModelConfig cfg_;
    ParticleGrid pgrid_;
    FockBasis fbasis_;
    double hbar_;
    Eigen::MatrixXcd kinetic_;
    Eigen::VectorXd v_diag_;
    Eigen::VectorXd dgamma_omega_;
    std::vector<Eigen::VectorXcd> mode_coupling_;
    double hermiticity_deficit_ = 0.0;

    struct Cache {
        std::mutex mutex;
        std::unique_ptr<Eigendecomposition> eig;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// psi(t) = e^{-i t H / hbar} psi0, by the cached eigendecomposition when
// dim <= dense_threshold, Lanczos stepping otherwise.
QuantumState evolve(const QuantumState& psi0, const HamiltonianAssembly& h, double t,
                    const EvolveOptions& opts = {});

// e^{+ i t H02 / hbar} psi with H02 = dGamma(omega): exact, diagonal per
// Fock column.
QuantumState interaction_picture(const QuantumState& psi, const HamiltonianAssembly& h,
                                 double t);

// Coherent product state centered on u0 = (p0, q0, alpha0):
// gaussian packet W1(z0/hbar) psi_gauss  (x)  W2(sqrt(2) alpha0/(i hbar)) vacuum.
// The particle displacement z0/hbar is calibrated so the Weyl characteristic
// function tends to e^{2 pi i Re<xi, u0>} as hbar -> 0.
QuantumState coherent_state(const ClassicalState& u0, double hbar, const ParticleGrid& pgrid,
                            const FockBasis& fbasis, const ModelConfig& cfg);

struct ObservableRecord {
    double q_mean = 0.0, p_mean = 0.0;
    double q2 = 0.0, p2 = 0.0;
    Eigen::VectorXcd a_modes;      // <a_hbar(e_i)> per mode, e_i = delta_i / sqrt(dk)
    double n_mean = 0.0;           // <N_hbar>
    double dgamma_sigma = 0.0;     // <dGamma(omega^{2 sigma})>
    double energy = 0.0;           // <H>
    double leakage = 0.0;          // squared norm at the occupation cap
};

ObservableRecord observables(const QuantumState& psi, const HamiltonianAssembly& h);

// expectation helpers
complexd expectation(const QuantumState& psi, const Eigen::VectorXcd& op_applied);
double top_sector_mass(const QuantumState& psi, const ParticleGrid& pgrid,
                       const FockBasis& fbasis);

} // namespace nkg

#endif
