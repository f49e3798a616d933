#ifndef NKG_ASSUMPTIONS_HPP
#define NKG_ASSUMPTIONS_HPP

#include <string>
#include <vector>

#include "nkg/model_config.hpp"

namespace nkg {

// Ceilings against which the standing-assumption norms are judged.
struct AssumptionCeilings {
    double chi_norm = 1e6; // applies to all weighted chi norms
    double v_sup = 1e6;
    double v_grad_sup = 1e6;
    double v_hess_sup = 1e6;
    // relative growth of a chi norm under doubling of the grid extent above
    // which the value is declared an artifact of the truncation
    double truncation_growth = 0.01;
};

struct AssumptionItem {
    std::string name;
    double value = 0.0;
    bool pass = false;
    bool grid_truncation_dependent = false;
};

struct AssumptionReport {
    std::vector<AssumptionItem> items;
    bool all_pass = true;
    std::string summary() const;
};

// Diagnostic only: reports the weighted chi norms and the potential bounds
// with pass/fail flags, plus a grid-extension check that flags chi norms that
// are only finite because the grid is truncated.
AssumptionReport check_assumptions(const ModelConfig& cfg,
                                   const AssumptionCeilings& ceilings = {});

} // namespace nkg

#endif
