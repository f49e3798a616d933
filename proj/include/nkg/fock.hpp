#ifndef NKG_FOCK_HPP
#define NKG_FOCK_HPP

#include <vector>

#include <Eigen/Dense>

#include "nkg/grid.hpp"
#include "nkg/model_config.hpp"

namespace nkg {

// Truncated symmetric Fock space over M discrete field modes with a cap on
// the total occupation.  Occupation vectors (m_1..m_M) with sum <= n_max are
// enumerated lexicographically; raised/lowered neighbour indices are
// precomputed.  dim = C(M + n_max, n_max).
class FockBasis {
public:
    FockBasis(Eigen::VectorXd mode_k, double dk, int n_max);
    static FockBasis from_grid(const KGrid& grid, int n_max);

    int dim() const { return static_cast<int>(occ_.size()); }
    int modes() const { return static_cast<int>(mode_k_.size()); }
    int cap() const { return n_max_; }
    double dk() const { return dk_; }
    const Eigen::VectorXd& mode_wavenumbers() const { return mode_k_; }

    int occupation(int idx, int mode) const { return occ_[idx][mode]; }
    int total(int idx) const { return total_[idx]; }
    const std::vector<int>& occupations(int idx) const { return occ_[idx]; }

    // index of the state with mode occupation changed by +-1, or -1 if the
    // result leaves the truncated space
    int raised(int idx, int mode) const { return raised_[idx][mode]; }
    int lowered(int idx, int mode) const { return lowered_[idx][mode]; }

    int index_of(const std::vector<int>& occ) const; // -1 if absent

private:
    Eigen::VectorXd mode_k_;
    double dk_;
    int n_max_;
    std::vector<std::vector<int>> occ_;
    std::vector<int> total_;
    std::vector<std::vector<int>> raised_, lowered_;
};

struct FockVector {
    Eigen::VectorXcd c;
    double hbar = 1.0;

    double norm() const { return c.norm(); }
    static FockVector vacuum(const FockBasis& basis, double hbar);
};

// a_hbar(f) psi with a_hbar(f) = sum_i sqrt(dk) conj(f_i) a_i and a_i
// lowering mode i with factor sqrt(hbar m_i).  Vacuum maps to zero.
FockVector annihilate(const FockBasis& basis, const Eigen::VectorXcd& f, const FockVector& psi);

// Adjoint of annihilate.  Components that would exceed the occupation cap
// are dropped; their squared norm is accumulated into *leakage if given.
FockVector create(const FockBasis& basis, const Eigen::VectorXcd& f, const FockVector& psi,
                  double* leakage = nullptr);

// Diagonal second quantization: coefficient at (m_1..m_M) is multiplied by
// hbar sum_i m_i weight_i.  weight = 1 gives the scaled number operator.
FockVector dgamma(const FockBasis& basis, const Eigen::VectorXd& weights, const FockVector& psi);

Eigen::VectorXd dgamma_diagonal(const FockBasis& basis, const Eigen::VectorXd& weights,
                                double hbar);

// Dense matrices of a_hbar(f) and its adjoint on the truncated basis.
Eigen::MatrixXcd annihilator_matrix(const FockBasis& basis, const Eigen::VectorXcd& f,
                                    double hbar);

// W2(alpha) = exp((i/sqrt(2)) (a_hbar(alpha) + a*_hbar(alpha))), computed by
// diagonalizing the Hermitian generator; exactly unitary on the truncated
// space.
Eigen::MatrixXcd weyl_field(const FockBasis& basis, const Eigen::VectorXcd& alpha, double hbar);

// W2(sqrt(2) alpha0 / (i hbar)) applied to the vacuum.  Guarded by
// ||alpha0||^2 / hbar <= cap/4 so the displaced state fits the truncation.
FockVector coherent_field(const FockBasis& basis, const Eigen::VectorXcd& alpha0, double hbar);

// dk-weighted mode inner product <f, g> = dk sum conj(f_i) g_i
complexd mode_inner(const FockBasis& basis, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

} // namespace nkg

#endif
