#include "nkg/kernels.hpp"

#include <cmath>

namespace nkg {
namespace kernels {

namespace {

inline void apply_column(const HamiltonianTerms& t, int col,
                         const Eigen::Map<const Eigen::MatrixXcd>& in,
                         Eigen::Map<Eigen::MatrixXcd>& out) {
    auto y = out.col(col);
    if (t.kinetic)
        y.noalias() = (*t.kinetic) * in.col(col);
    else
        y.setZero();
    if (t.v_diag)
        y.array() += t.v_diag->array().cast<complexd>() * in.col(col).array();
    if (t.fock_diag)
        y += (*t.fock_diag)[col] * in.col(col);
    if (t.mode_coupling) {
        const FockBasis& b = *t.basis;
        for (int i = 0; i < b.modes(); ++i) {
            const int mi = b.occupation(col, i);
            const Eigen::VectorXcd& c = (*t.mode_coupling)[i];
            // annihilation part reads the raised neighbour
            const int up = b.raised(col, i);
            if (up >= 0) {
                const double f = std::sqrt(t.hbar * (mi + 1));
                y.array() += f * c.conjugate().array() * in.col(up).array();
            }
            // creation part reads the lowered neighbour
            if (mi > 0) {
                const int dn = b.lowered(col, i);
                const double f = std::sqrt(t.hbar * mi);
                y.array() += f * c.array() * in.col(dn).array();
            }
        }
    }
}

} // namespace

void apply_product_hamiltonian(const HamiltonianTerms& t, int n_x,
                               const Eigen::VectorXcd& x, Eigen::VectorXcd& y, Exec exec) {
    const int n_fock = t.basis->dim();
    if (x.size() != static_cast<Eigen::Index>(n_x) * n_fock)
        throw shape_error("apply_product_hamiltonian: state size mismatch");
    y.resize(x.size());
    Eigen::Map<const Eigen::MatrixXcd> in(x.data(), n_x, n_fock);
    Eigen::Map<Eigen::MatrixXcd> out(y.data(), n_x, n_fock);

    if (exec == Exec::omp) {
#pragma omp parallel for schedule(static)
        for (int col = 0; col < n_fock; ++col)
            apply_column(t, col, in, out);
    } else {
        for (int col = 0; col < n_fock; ++col)
            apply_column(t, col, in, out);
    }
}

void map_indexed(int count, Exec exec, const std::function<void(int)>& work) {
    if (exec == Exec::omp) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i)
            work(i);
    } else {
        for (int i = 0; i < count; ++i)
            work(i);
    }
}

} // namespace kernels
} // namespace nkg
