#ifndef NKG_KERNELS_HPP
#define NKG_KERNELS_HPP

#include "nkg/nelson.hpp"

namespace nkg {
namespace kernels {

// Product-space Hamiltonian application, gather form: each Fock column of the
// output is assembled independently (kinetic gemv + diagonal terms + mode
// hops that read neighbouring columns), so the OpenMP variant parallelizes
// over columns without write conflicts and matches the serial variant
// bit for bit.

struct HamiltonianTerms {
    const Eigen::MatrixXcd* kinetic;                      // N_x x N_x, may be null
    const Eigen::VectorXd* v_diag;                        // N_x, may be null
    const Eigen::VectorXd* fock_diag;                     // dim(Fock), may be null
    const std::vector<Eigen::VectorXcd>* mode_coupling;   // per mode, N_x, may be null
    const FockBasis* basis;
    double hbar;
};

void apply_product_hamiltonian(const HamiltonianTerms& terms, int n_x,
                               const Eigen::VectorXcd& x, Eigen::VectorXcd& y, Exec exec);

// Independent classical trajectories (one RK4 integration per slot), used by
// the Monte-Carlo harness; slot-indexed output keeps the result deterministic
// for any thread count.
void map_indexed(int count, Exec exec, const std::function<void(int)>& work);

} // namespace kernels
} // namespace nkg

#endif
