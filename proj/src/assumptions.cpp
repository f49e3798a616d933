#include "nkg/assumptions.hpp"

#include <cmath>
#include <sstream>

namespace nkg {

std::string AssumptionReport::summary() const {
    std::ostringstream os;
    for (const auto& it : items) {
        os << (it.pass ? "[pass] " : "[FAIL] ") << it.name << " = " << it.value;
        if (it.grid_truncation_dependent) os << "  (grid-truncation-dependent)";
        os << "\n";
    }
    return os.str();
}

AssumptionReport check_assumptions(const ModelConfig& cfg, const AssumptionCeilings& c) {
    AssumptionReport rep;

    auto add = [&rep](const std::string& name, double value, bool pass, bool trunc = false) {
        rep.items.push_back({name, value, pass, trunc});
        rep.all_pass = rep.all_pass && pass && !trunc;
    };

    const KGrid wide = cfg.grid.extended(2);
    const double powers[3] = {1.5 - cfg.sigma, 0.5, -0.5};
    const char* names[3] = {"chi_norm_omega_3/2-sigma", "chi_norm_omega_1/2",
                            "chi_norm_omega_-1/2"};
    for (int i = 0; i < 3; ++i) {
        const double v = weighted_chi_norm(cfg.chi, cfg.dispersion, cfg.grid, powers[i]);
        const double v_wide = weighted_chi_norm(cfg.chi, cfg.dispersion, wide, powers[i]);
        const bool finite = std::isfinite(v) && v <= c.chi_norm;
        // if the norm keeps growing when the grid is extended the continuum
        // integral diverges and the on-grid value is meaningless
        const bool trunc = v > 0.0 && (v_wide - v) / v > c.truncation_growth;
        add(names[i], v, finite, trunc);
    }

    add("v_sup", cfg.potential.sup_value,
        std::isfinite(cfg.potential.sup_value) && cfg.potential.sup_value <= c.v_sup);
    add("v_grad_sup", cfg.potential.sup_gradient,
        std::isfinite(cfg.potential.sup_gradient) && cfg.potential.sup_gradient <= c.v_grad_sup);
    add("v_hess_sup", cfg.potential.sup_hessian,
        std::isfinite(cfg.potential.sup_hessian) && cfg.potential.sup_hessian <= c.v_hess_sup);

    return rep;
}

} // namespace nkg
