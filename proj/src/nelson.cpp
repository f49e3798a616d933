#include "nkg/nelson.hpp"

#include <cmath>
#include <numbers>

#include <lapacke.h>

#include "nkg/kernels.hpp"

namespace nkg {

using std::numbers::pi;

HamiltonianAssembly::HamiltonianAssembly(const ModelConfig& cfg, const ParticleGrid& pgrid,
                                         const FockBasis& fbasis, double hbar)
    : cfg_(cfg), pgrid_(pgrid), fbasis_(fbasis), hbar_(hbar) {
    cfg_.validate();
    if (!(hbar_ > 0.0 && hbar_ <= 1.0))
        throw config_error("HamiltonianAssembly: hbar must lie in (0, 1]");
    if (cfg_.n != 1)
        throw config_error("HamiltonianAssembly: quantized runs support a single particle");
    if (fbasis_.modes() != cfg_.grid.size())
        throw config_error("HamiltonianAssembly: Fock modes must match the config k-grid");

    kinetic_ = pgrid_.kinetic_matrix(cfg_, 0, hbar_);
    v_diag_.resize(pgrid_.size());
    Eigen::VectorXd q1(1);
    for (int i = 0; i < pgrid_.size(); ++i) {
        q1[0] = pgrid_.x()[i];
        v_diag_[i] = cfg_.potential.value(q1);
    }

    Eigen::VectorXd omega(fbasis_.modes());
    for (int i = 0; i < fbasis_.modes(); ++i)
        omega[i] = cfg_.dispersion.omega(fbasis_.mode_wavenumbers()[i]);
    dgamma_omega_ = dgamma_diagonal(fbasis_, omega, hbar_);

    mode_coupling_.resize(fbasis_.modes());
    const double rdk = std::sqrt(fbasis_.dk());
    for (int i = 0; i < fbasis_.modes(); ++i) {
        const double k = fbasis_.mode_wavenumbers()[i];
        const double c = cfg_.chi.eval(k) / std::sqrt(cfg_.dispersion.omega(k));
        mode_coupling_[i].resize(pgrid_.size());
        for (int j = 0; j < pgrid_.size(); ++j)
            mode_coupling_[i][j] = rdk * c * std::polar(1.0, -2.0 * pi * k * pgrid_.x()[j]);
    }

    // the diagonal terms and the hop pairs are Hermitian by construction;
    // only the Fourier-assembled kinetic block can drift
    hermiticity_deficit_ = (kinetic_ - kinetic_.adjoint()).cwiseAbs().maxCoeff();
    if (hermiticity_deficit_ > 1e-12)
        throw assembly_error("kinetic block Hermiticity deficit " +
                             std::to_string(hermiticity_deficit_));
}

void HamiltonianAssembly::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y, Exec exec) const {
    kernels::HamiltonianTerms t{&kinetic_, &v_diag_, &dgamma_omega_, &mode_coupling_,
                                &fbasis_, hbar_};
    kernels::apply_product_hamiltonian(t, pgrid_.size(), x, y, exec);
}

void HamiltonianAssembly::apply_free(const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                                     Exec exec) const {
    kernels::HamiltonianTerms t{&kinetic_, nullptr, &dgamma_omega_, nullptr, &fbasis_, hbar_};
    kernels::apply_product_hamiltonian(t, pgrid_.size(), x, y, exec);
}

void HamiltonianAssembly::apply_interaction(const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                                            Exec exec) const {
    kernels::HamiltonianTerms t{nullptr, nullptr, nullptr, &mode_coupling_, &fbasis_, hbar_};
    kernels::apply_product_hamiltonian(t, pgrid_.size(), x, y, exec);
}

Eigen::MatrixXcd HamiltonianAssembly::dense() const {
    const int nx = pgrid_.size();
    const int nf = fbasis_.dim();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim(), dim());
    for (int f = 0; f < nf; ++f) {
        h.block(f * nx, f * nx, nx, nx) = kinetic_;
        for (int i = 0; i < nx; ++i)
            h(f * nx + i, f * nx + i) += v_diag_[i] + dgamma_omega_[f];
        for (int m = 0; m < fbasis_.modes(); ++m) {
            const int dn = fbasis_.lowered(f, m);
            if (dn < 0) continue;
            const double fac = std::sqrt(hbar_ * fbasis_.occupation(f, m));
            for (int i = 0; i < nx; ++i) {
                h(f * nx + i, dn * nx + i) += fac * mode_coupling_[m][i];
                h(dn * nx + i, f * nx + i) += fac * std::conj(mode_coupling_[m][i]);
            }
        }
    }
    return h;
}

const HamiltonianAssembly::Eigendecomposition& HamiltonianAssembly::eigendecomposition() const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (!cache_->eig) {
        auto eig = std::make_unique<Eigendecomposition>();
        eig->vectors = dense();
        eig->values.resize(dim());
        const int info = LAPACKE_zheevd(
            LAPACK_COL_MAJOR, 'V', 'L', dim(),
            reinterpret_cast<lapack_complex_double*>(eig->vectors.data()), dim(),
            eig->values.data());
        if (info != 0)
            throw numeric_error("zheevd failed with info = " + std::to_string(info));
        cache_->eig = std::move(eig);
    }
    return *cache_->eig;
}

namespace {

// One Lanczos step: psi <- exp(-i dt H / hbar) psi with an a posteriori
// error estimate from the last tridiagonal component.
void lanczos_step(const HamiltonianAssembly& h, Eigen::VectorXcd& psi, double dt,
                  const EvolveOptions& opts) {
    const double scale = psi.norm();
    if (scale == 0.0) return;
    const int max_m = std::min<int>(opts.krylov_max_dim, static_cast<int>(psi.size()));

    std::vector<Eigen::VectorXcd> basis;
    basis.reserve(max_m);
    basis.push_back(psi / scale);
    std::vector<double> alpha, beta;
    Eigen::VectorXcd w;

    auto propagate = [&](int m, double* err) -> Eigen::VectorXcd {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        Eigen::VectorXcd phase(m);
        for (int i = 0; i < m; ++i)
            phase[i] = std::polar(1.0, -dt * es.eigenvalues()[i] / h.hbar());
        Eigen::VectorXcd small = es.eigenvectors().cast<complexd>() *
                                 (phase.array() *
                                  es.eigenvectors().row(0).transpose().cast<complexd>().array())
                                     .matrix();
        if (err) {
            const double bm = beta.size() >= static_cast<size_t>(m) ? beta[m - 1] : 0.0;
            *err = bm * std::abs(small[m - 1]) * dt / h.hbar();
        }
        return small;
    };

    for (int m = 1; m <= max_m; ++m) {
        h.apply(basis[m - 1], w, opts.exec);
        complexd a = basis[m - 1].dot(w);
        alpha.push_back(a.real());
        w -= a * basis[m - 1];
        if (m >= 2) w -= complexd(beta[m - 2]) * basis[m - 2];
        // full reorthogonalization; the bases are small
        for (const auto& v : basis)
            w -= v.dot(w) * v;
        const double b = w.norm();

        if (m >= 2 || b < 1e-14) {
            double err = 0.0;
            if (b < 1e-14) {
                // happy breakdown: the Krylov space is invariant, result exact
                Eigen::VectorXcd small = propagate(m, nullptr);
                psi.setZero();
                for (int i = 0; i < m; ++i)
                    psi += small[i] * basis[i];
                psi *= scale;
                return;
            }
            beta.push_back(b);
            Eigen::VectorXcd small = propagate(m, &err);
            if (err < opts.krylov_tol || m == max_m) {
                if (err >= opts.krylov_tol)
                    throw evolution_error("Lanczos did not reach tolerance " +
                                          std::to_string(opts.krylov_tol) + " at dimension " +
                                          std::to_string(max_m) + " (estimate " +
                                          std::to_string(err) + "); reduce krylov_dt");
                psi.setZero();
                for (int i = 0; i < m; ++i)
                    psi += small[i] * basis[i];
                psi *= scale;
                return;
            }
            basis.push_back(w / b);
        } else {
            beta.push_back(b);
            basis.push_back(w / b);
        }
    }
}

} // namespace

QuantumState evolve(const QuantumState& psi0, const HamiltonianAssembly& h, double t,
                    const EvolveOptions& opts) {
    if (psi0.c.size() != h.dim())
        throw shape_error("evolve: state dimension mismatch");
    if (psi0.hbar != h.hbar())
        throw config_error("evolve: state and Hamiltonian disagree on hbar");

    QuantumState out = psi0;
    if (t == 0.0) return out;

    if (!opts.force_krylov && h.dim() <= opts.dense_threshold) {
        const auto& eig = h.eigendecomposition();
        Eigen::VectorXcd coeffs = eig.vectors.adjoint() * psi0.c;
        for (int i = 0; i < h.dim(); ++i)
            coeffs[i] *= std::polar(1.0, -t * eig.values[i] / h.hbar());
        out.c = eig.vectors * coeffs;
        return out;
    }

    const double step = std::min(opts.krylov_dt, std::abs(t));
    const long n_steps = std::lround(std::ceil(std::abs(t) / step - 1e-12));
    const double dt = t / double(n_steps);
    for (long s = 0; s < n_steps; ++s)
        lanczos_step(h, out.c, dt, opts);
    return out;
}

QuantumState interaction_picture(const QuantumState& psi, const HamiltonianAssembly& h,
                                 double t) {
    if (psi.c.size() != h.dim())
        throw shape_error("interaction_picture: state dimension mismatch");
    QuantumState out = psi;
    const int nx = h.pgrid().size();
    auto m = out.matrix(nx);
    for (int f = 0; f < h.fbasis().dim(); ++f)
        m.col(f) *= std::polar(1.0, t * h.dgamma_omega()[f] / h.hbar());
    return out;
}

QuantumState coherent_state(const ClassicalState& u0, double hbar, const ParticleGrid& pgrid,
                            const FockBasis& fbasis, const ModelConfig& cfg) {
    if (u0.p.size() != 1 || u0.q.size() != 1)
        throw config_error("coherent_state: quantized runs support a single particle");
    if (u0.alpha.size() != fbasis.modes() || fbasis.modes() != cfg.grid.size())
        throw shape_error("coherent_state: field profile does not match the mode set");

    check_wavepacket_guards(pgrid, hbar, std::abs(u0.q[0]), std::abs(u0.p[0]));
    const Eigen::VectorXcd packet = coherent_wavepacket(pgrid, u0.q[0], u0.p[0], hbar);
    const FockVector field = coherent_field(fbasis, u0.alpha, hbar);

    QuantumState psi;
    psi.hbar = hbar;
    psi.c.resize(static_cast<Eigen::Index>(pgrid.size()) * fbasis.dim());
    auto m = psi.matrix(pgrid.size());
    for (int f = 0; f < fbasis.dim(); ++f)
        m.col(f) = field.c[f] * packet;
    psi.c /= psi.c.norm();
    return psi;
}

complexd expectation(const QuantumState& psi, const Eigen::VectorXcd& op_applied) {
    return psi.c.dot(op_applied);
}

double top_sector_mass(const QuantumState& psi, const ParticleGrid& pgrid,
                       const FockBasis& fbasis) {
    auto m = psi.matrix(pgrid.size());
    double s = 0.0;
    for (int f = 0; f < fbasis.dim(); ++f)
        if (fbasis.total(f) == fbasis.cap())
            s += m.col(f).squaredNorm();
    return s;
}

ObservableRecord observables(const QuantumState& psi, const HamiltonianAssembly& h) {
    if (psi.c.size() != h.dim())
        throw shape_error("observables: state dimension mismatch");
    const ParticleGrid& g = h.pgrid();
    const FockBasis& b = h.fbasis();
    const int nx = g.size();
    const int nf = b.dim();
    auto m = psi.matrix(nx);

    ObservableRecord rec;

    // particle moments: position diagonal, momentum via the Fourier side
    const Eigen::VectorXd p = g.momenta(psi.hbar);
    for (int f = 0; f < nf; ++f) {
        const Eigen::VectorXcd col = m.col(f);
        rec.q_mean += (col.cwiseAbs2().array() * g.x().array()).sum();
        rec.q2 += (col.cwiseAbs2().array() * g.x().array().square()).sum();
        const Eigen::VectorXcd ph = g.to_fourier(col);
        rec.p_mean += (ph.cwiseAbs2().array() * p.array()).sum();
        rec.p2 += (ph.cwiseAbs2().array() * p.array().square()).sum();
    }

    // field mode amplitudes <a_hbar(e_i)>, e_i(k_j) = delta_ij / sqrt(dk)
    rec.a_modes = Eigen::VectorXcd::Zero(b.modes());
    for (int f = 0; f < nf; ++f) {
        for (int i = 0; i < b.modes(); ++i) {
            const int up = b.raised(f, i);
            if (up < 0) continue;
            const double fac = std::sqrt(psi.hbar * (b.occupation(f, i) + 1));
            rec.a_modes[i] += fac * m.col(f).dot(m.col(up));
        }
    }

    Eigen::VectorXd ones = Eigen::VectorXd::Ones(b.modes());
    const Eigen::VectorXd n_diag = dgamma_diagonal(b, ones, psi.hbar);
    Eigen::VectorXd w2s(b.modes());
    for (int i = 0; i < b.modes(); ++i)
        w2s[i] = std::pow(h.cfg().dispersion.omega(b.mode_wavenumbers()[i]),
                          2.0 * h.cfg().sigma);
    const Eigen::VectorXd dg_diag = dgamma_diagonal(b, w2s, psi.hbar);
    for (int f = 0; f < nf; ++f) {
        const double w = m.col(f).squaredNorm();
        rec.n_mean += n_diag[f] * w;
        rec.dgamma_sigma += dg_diag[f] * w;
    }

    Eigen::VectorXcd hpsi;
    h.apply(psi.c, hpsi);
    rec.energy = std::real(psi.c.dot(hpsi));
    rec.leakage = top_sector_mass(psi, g, b);
    return rec;
}

} // namespace nkg
