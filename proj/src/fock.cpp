#include "nkg/fock.hpp"

#include <algorithm>
#include <cmath>

namespace nkg {

FockBasis::FockBasis(Eigen::VectorXd mode_k, double dk, int n_max)
    : mode_k_(std::move(mode_k)), dk_(dk), n_max_(n_max) {
    if (modes() < 1) throw config_error("FockBasis: need at least one mode");
    if (n_max_ < 1) throw config_error("FockBasis: occupation cap must be >= 1");
    if (!(dk_ > 0.0)) throw config_error("FockBasis: dk must be positive");

    const int m = modes();
    std::vector<int> occ(m, 0);
    // lexicographic enumeration of all occupation vectors with total <= n_max
    while (true) {
        occ_.push_back(occ);
        int i = m - 1;
        while (i >= 0) {
            ++occ[i];
            int tot = 0;
            for (int v : occ) tot += v;
            if (tot <= n_max_) break;
            occ[i] = 0;
            --i;
        }
        if (i < 0) break;
    }

    total_.resize(occ_.size());
    for (size_t s = 0; s < occ_.size(); ++s) {
        int tot = 0;
        for (int v : occ_[s]) tot += v;
        total_[s] = tot;
    }

    raised_.assign(occ_.size(), std::vector<int>(m, -1));
    lowered_.assign(occ_.size(), std::vector<int>(m, -1));
    std::vector<int> tmp(m);
    for (size_t s = 0; s < occ_.size(); ++s) {
        for (int i = 0; i < m; ++i) {
            tmp = occ_[s];
            ++tmp[i];
            raised_[s][i] = index_of(tmp);
            tmp[i] -= 2;
            lowered_[s][i] = tmp[i] >= 0 ? index_of(tmp) : -1;
        }
    }
}

FockBasis FockBasis::from_grid(const KGrid& grid, int n_max) {
    return FockBasis(grid.points, grid.dk, n_max);
}

int FockBasis::index_of(const std::vector<int>& occ) const {
    auto it = std::lower_bound(occ_.begin(), occ_.end(), occ);
    if (it == occ_.end() || *it != occ) return -1;
    return static_cast<int>(it - occ_.begin());
}

FockVector FockVector::vacuum(const FockBasis& basis, double hbar) {
    FockVector v;
    v.c = Eigen::VectorXcd::Zero(basis.dim());
    v.c[0] = 1.0;
    v.hbar = hbar;
    return v;
}

static void check_mode_fn(const FockBasis& basis, const Eigen::VectorXcd& f) {
    if (f.size() != basis.modes())
        throw shape_error("mode function does not match basis mode count");
}

FockVector annihilate(const FockBasis& basis, const Eigen::VectorXcd& f, const FockVector& psi) {
    check_mode_fn(basis, f);
    if (psi.c.size() != basis.dim()) throw shape_error("annihilate: state/basis mismatch");
    FockVector out;
    out.hbar = psi.hbar;
    out.c = Eigen::VectorXcd::Zero(basis.dim());
    const double rdk = std::sqrt(basis.dk());
    for (int s = 0; s < basis.dim(); ++s) {
        if (psi.c[s] == complexd(0.0)) continue;
        for (int i = 0; i < basis.modes(); ++i) {
            const int mi = basis.occupation(s, i);
            if (mi == 0) continue;
            const int t = basis.lowered(s, i);
            out.c[t] += rdk * std::conj(f[i]) * std::sqrt(psi.hbar * mi) * psi.c[s];
        }
    }
    return out;
}

FockVector create(const FockBasis& basis, const Eigen::VectorXcd& f, const FockVector& psi,
                  double* leakage) {
    check_mode_fn(basis, f);
    if (psi.c.size() != basis.dim()) throw shape_error("create: state/basis mismatch");
    FockVector out;
    out.hbar = psi.hbar;
    out.c = Eigen::VectorXcd::Zero(basis.dim());
    const double rdk = std::sqrt(basis.dk());
    double leaked = 0.0;
    for (int s = 0; s < basis.dim(); ++s) {
        if (psi.c[s] == complexd(0.0)) continue;
        for (int i = 0; i < basis.modes(); ++i) {
            const int mi = basis.occupation(s, i);
            const complexd coeff = rdk * f[i] * std::sqrt(psi.hbar * (mi + 1)) * psi.c[s];
            const int t = basis.raised(s, i);
            if (t >= 0)
                out.c[t] += coeff;
            else
                leaked += std::norm(coeff);
        }
    }
    if (leakage) *leakage += leaked;
    return out;
}

Eigen::VectorXd dgamma_diagonal(const FockBasis& basis, const Eigen::VectorXd& weights,
                                double hbar) {
    if (weights.size() != basis.modes())
        throw shape_error("dgamma: weights do not match mode count");
    Eigen::VectorXd diag(basis.dim());
    for (int s = 0; s < basis.dim(); ++s) {
        double e = 0.0;
        for (int i = 0; i < basis.modes(); ++i)
            e += basis.occupation(s, i) * weights[i];
        diag[s] = hbar * e;
    }
    return diag;
}

FockVector dgamma(const FockBasis& basis, const Eigen::VectorXd& weights, const FockVector& psi) {
    if (psi.c.size() != basis.dim()) throw shape_error("dgamma: state/basis mismatch");
    FockVector out = psi;
    const Eigen::VectorXd diag = dgamma_diagonal(basis, weights, psi.hbar);
    out.c.array() *= diag.array().cast<complexd>();
    return out;
}

Eigen::MatrixXcd annihilator_matrix(const FockBasis& basis, const Eigen::VectorXcd& f,
                                    double hbar) {
    check_mode_fn(basis, f);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    const double rdk = std::sqrt(basis.dk());
    for (int s = 0; s < basis.dim(); ++s) {
        for (int i = 0; i < basis.modes(); ++i) {
            const int mi = basis.occupation(s, i);
            if (mi == 0) continue;
            a(basis.lowered(s, i), s) += rdk * std::conj(f[i]) * std::sqrt(hbar * mi);
        }
    }
    return a;
}

Eigen::MatrixXcd weyl_field(const FockBasis& basis, const Eigen::VectorXcd& alpha, double hbar) {
    if (!(hbar > 0.0 && hbar <= 1.0))
        throw config_error("weyl_field: hbar must lie in (0, 1]");
    const Eigen::MatrixXcd a = annihilator_matrix(basis, alpha, hbar);
    const Eigen::MatrixXcd s = (a + a.adjoint()) / std::sqrt(2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    if (es.info() != Eigen::Success)
        throw numeric_error("weyl_field: generator diagonalization failed");
    Eigen::VectorXcd phase(basis.dim());
    for (int i = 0; i < basis.dim(); ++i)
        phase[i] = std::polar(1.0, es.eigenvalues()[i]);
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

FockVector coherent_field(const FockBasis& basis, const Eigen::VectorXcd& alpha0, double hbar) {
    check_mode_fn(basis, alpha0);
    if (!(hbar > 0.0 && hbar <= 1.0))
        throw config_error("coherent_field: hbar must lie in (0, 1]");
    double n2 = 0.0; // ||alpha0||^2, dk-weighted
    for (int i = 0; i < basis.modes(); ++i) n2 += basis.dk() * std::norm(alpha0[i]);
    if (n2 / hbar > basis.cap() / 4.0)
        throw config_error("coherent_field: ||alpha0||^2/hbar = " + std::to_string(n2 / hbar) +
                           " exceeds cap/4; raise the occupation cap or hbar");
    // W2(sqrt(2)/(i hbar) alpha0) = W2(-i sqrt(2)/hbar alpha0)
    const Eigen::VectorXcd arg = complexd(0.0, -1.0) * std::sqrt(2.0) / hbar * alpha0;
    const Eigen::MatrixXcd w = weyl_field(basis, arg, hbar);
    FockVector out = FockVector::vacuum(basis, hbar);
    out.c = w * out.c;
    return out;
}

complexd mode_inner(const FockBasis& basis, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
    check_mode_fn(basis, f);
    check_mode_fn(basis, g);
    return basis.dk() * f.dot(g); // Eigen dot conjugates the first argument
}

} // namespace nkg
