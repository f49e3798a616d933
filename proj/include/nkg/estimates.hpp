#ifndef NKG_ESTIMATES_HPP
#define NKG_ESTIMATES_HPP

#include <string>
#include <vector>

#include "nkg/nelson.hpp"

namespace nkg {

// One numerically certified operator inequality: both sides evaluated on
// randomized states for every hbar in the sweep, worst LHS/RHS ratio
// recorded.  Constants are assembled from the model bounds, never fitted
// (the two exponential-envelope constants are the documented exception).
struct EstimateCase {
    std::string name;
    std::string statement;         // the inequality being certified
    std::string constants;         // how the RHS constants were assembled
    int samples = 0;
    double tolerance = 0.0;        // ratio may reach 1 + tolerance
    double worst_ratio = 0.0;      // max over samples and hbar of LHS/RHS
    std::vector<double> worst_per_hbar;
    bool pass = false;
    bool hbar_uniform = true;      // worst ratio trend flat within 20%
    int violating_hbar_index = -1; // first hbar with a violation, or -1
    Eigen::VectorXcd violating_sample;
};

struct EstimateSuiteOptions {
    int samples = 1000;
    int envelope_samples = 64;       // time points for the exponential envelopes
    double envelope_t_end = 2.0;
    unsigned long seed = 1234;
    double identity_tolerance = 1e-9; // exact-identity cases
    double trend_slack = 0.20;
    Exec exec = Exec::omp;
};

struct EstimateSuite {
    std::vector<EstimateCase> cases;
    bool all_pass = true;
};

// Runs every inequality case on the given configuration for each hbar.
// pgrid/fbasis describe the quantum discretization used for the
// product-space cases.
EstimateSuite run_suite(const ModelConfig& cfg, const ParticleGrid& pgrid, int n_max,
                        const std::vector<double>& hbar_list,
                        const EstimateSuiteOptions& opts = {});

// Serializes a violating state in the replay format (index:re,im lines).
std::string replay_format(const Eigen::VectorXcd& v);
Eigen::VectorXcd parse_replay(const std::string& text);

} // namespace nkg

#endif
