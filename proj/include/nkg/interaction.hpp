#ifndef NKG_INTERACTION_HPP
#define NKG_INTERACTION_HPP

#include "nkg/model_config.hpp"

namespace nkg {

// I_j(q, alpha) = dk sum_i (chi/sqrt(omega)) [alpha e^{2 pi i k q_j} + c.c.]
double interaction_I(const Eigen::VectorXd& q, const Eigen::VectorXcd& alpha,
                     int j, const ModelConfig& cfg);

// d/dq_j I_j = dk sum_i 2 pi i k (chi/sqrt(omega)) [alpha e^{2 pi i k q_j} - c.c.]
double grad_I(const Eigen::VectorXd& q, const Eigen::VectorXcd& alpha,
              int j, const ModelConfig& cfg);

// H(u) = sum_j f_j(p_j) + V(q) + dk sum_i omega |alpha_i|^2 + sum_j I_j
double hamiltonian_classical(const ClassicalState& u, const ModelConfig& cfg);

// |grad_I| <= 4 pi ||omega^{1/2} chi|| ||alpha||    (discrete norms)
double grad_I_bound(const ModelConfig& cfg, double alpha_l2);

// Lipschitz bound for grad_I:
//   |grad_I(q1,a1) - grad_I(q2,a2)|
//     <= 4 pi ||omega^{1/2} chi|| ||a1 - a2||
//      + 8 sqrt(2) pi^2 ||omega^{3/2-sigma} chi|| |q1j - q2j| ||a2||_{G^sigma}
struct GradILipschitz {
    double alpha_coeff; // 4 pi ||omega^{1/2} chi||
    double q_coeff;     // 8 sqrt(2) pi^2 ||omega^{3/2-sigma} chi||
};
GradILipschitz grad_I_lipschitz(const ModelConfig& cfg);

} // namespace nkg

#endif
