#ifndef NKG_CLASSICAL_HPP
#define NKG_CLASSICAL_HPP

#include <vector>

#include "nkg/interaction.hpp"
#include "nkg/model_config.hpp"

namespace nkg {

enum class Picture { direct, interaction };

// Nonlinear part of the equations of motion:
//   p_j' component: -grad V - grad_I
//   q_j' component:  grad f_j(p_j)
//   alpha component: -i sum_j (chi/sqrt(omega)) e^{-2 pi i k q_j}
ClassicalState nonlinearity(const ClassicalState& u, const ModelConfig& cfg);

// (p, q, alpha) -> (p, q, e^{-i t omega} alpha)
ClassicalState free_flow(double t, const ClassicalState& u, const ModelConfig& cfg);

// v(t, u) = free_flow(-t) . nonlinearity . free_flow(t), in the explicit
// component form (particle parts evaluated on the flowed state, alpha part
// rotated back by e^{+ i t omega}).
ClassicalState vector_field(double t, const ClassicalState& u, const ModelConfig& cfg);

// Full right-hand side L(u) + N(u) with L(u) = (0, 0, -i omega alpha).
ClassicalState pfe_rhs(const ClassicalState& u, const ModelConfig& cfg);

struct Trajectory {
    std::vector<double> times;
    std::vector<ClassicalState> states;
    Picture picture = Picture::direct;
    double dt = 0.0;
};

struct IntegrateOptions {
    int save_stride = 1;
    double blowup_norm = 1e12; // X^0 norm above which integration aborts
};

// Fixed-step integration from t = 0 to T.  Direct picture uses RK4 with the
// exact e^{-i omega dt} factor absorbing the stiff linear field rotation
// (Lawson scheme); interaction picture is plain RK4 on u' = v(t, u) and the
// stored states are the interaction-picture ones.
Trajectory integrate(const ClassicalState& u0, double T, double dt, Picture picture,
                     const ModelConfig& cfg, const IntegrateOptions& opts = {});

// Maps an interaction-picture trajectory state back to the direct picture.
ClassicalState to_direct_picture(const Trajectory& traj, int index, const ModelConfig& cfg);

// max_t |H(u(t)) - H(u(0))| / max(1, |H(u(0))|) over a direct-picture trajectory
double energy_drift(const Trajectory& traj, const ModelConfig& cfg);

// || u(T) - free_flow(T, u0) - integral_0^T free_flow(T-s, N(u(s))) ds ||_{X^sigma}
// with the time integral done by composite Simpson on the saved steps.
// Requires a direct-picture trajectory saved at every step with an even
// number of intervals.
double duhamel_residual(const Trajectory& traj, const ModelConfig& cfg);

// Lipschitz constant C with ||N(u1) - N(u2)||_{X^0} <= C ||u1 - u2||_{X^0}
// valid whenever ||u2||_{X^sigma} stays below sup_xsigma, assembled from the
// potential/kinetic/coupling bounds.
double nonlinearity_lipschitz(const ModelConfig& cfg, double sup_xsigma);

// c1 with ||N(u)||_{X^sigma} <= c1 whenever ||u||_{X^sigma} <= c0
double nonlinearity_bound(const ModelConfig& cfg, double c0);

// C with ||v(t, u)||_{X^sigma} <= C (||u||_{X^0}^2 + 1) for all t, u
double vector_field_bound(const ModelConfig& cfg);

struct GronwallReport {
    std::vector<double> times;
    std::vector<double> gaps;      // ||u1(t) - u2(t)||_{X^0}
    std::vector<double> envelopes; // e^{C t} * gap(0)
    double rate_constant = 0.0;    // the assembled C
    double fitted_rate = 0.0;      // least-squares growth rate of log gap
    bool envelope_ok = true;       // gaps never exceed envelopes
};

// Integrates both states in the direct picture and compares the divergence
// of nearby solutions against the Gronwall envelope with the assembled C.
GronwallReport gronwall_divergence(const ClassicalState& u0a, const ClassicalState& u0b,
                                   double T, double dt, const ModelConfig& cfg);

} // namespace nkg

#endif
