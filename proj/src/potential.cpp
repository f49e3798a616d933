#include "nkg/potential.hpp"

#include <cmath>

#include "nkg/errors.hpp"

namespace nkg {

Potential Potential::zero() {
    Potential p;
    p.preset = Preset::zero;
    p.value = [](const Eigen::VectorXd&) { return 0.0; };
    p.gradient = [](const Eigen::VectorXd& q) { return Eigen::VectorXd::Zero(q.size()).eval(); };
    p.sup_value = 0.0;
    p.sup_gradient = 0.0;
    p.sup_hessian = 0.0;
    return p;
}

Potential Potential::gaussian_well(double depth, double width, int dn) {
    if (!(width > 0.0)) throw config_error("Potential::gaussian_well: width must be positive");
    if (dn < 1) throw config_error("Potential::gaussian_well: dn must be >= 1");
    Potential p;
    p.preset = Preset::gaussian_well;
    p.depth = depth;
    p.width = width;
    const double w2 = width * width;
    p.value = [depth, w2](const Eigen::VectorXd& q) {
        double s = 0.0;
        for (int j = 0; j < q.size(); ++j) s += std::exp(-q[j] * q[j] / w2);
        return -depth * s;
    };
    p.gradient = [depth, w2](const Eigen::VectorXd& q) {
        Eigen::VectorXd g(q.size());
        for (int j = 0; j < q.size(); ++j)
            g[j] = 2.0 * depth * q[j] / w2 * std::exp(-q[j] * q[j] / w2);
        return g;
    };
    // per-coordinate extrema of the separable well:
    //   |d/dx exp(-x^2/w^2)|    <= sqrt(2/e)/w   at x = w/sqrt(2)
    //   |d2/dx2 exp(-x^2/w^2)|  <= 2/w^2         at x = 0
    p.sup_value = std::abs(depth) * dn;
    p.sup_gradient = std::abs(depth) * std::sqrt(2.0 / std::exp(1.0)) / width * std::sqrt(double(dn));
    p.sup_hessian = 2.0 * std::abs(depth) / w2; // Hessian is diagonal
    return p;
}

Potential Potential::custom(std::function<double(const Eigen::VectorXd&)> v,
                            std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g,
                            double sup_v, double sup_g, double sup_h) {
    Potential p;
    p.preset = Preset::custom;
    p.value = std::move(v);
    p.gradient = std::move(g);
    p.sup_value = sup_v;
    p.sup_gradient = sup_g;
    p.sup_hessian = sup_h;
    return p;
}

std::string Potential::preset_name() const {
    switch (preset) {
        case Preset::zero: return "zero";
        case Preset::gaussian_well: return "gaussian-well";
        default: return "custom";
    }
}

} // namespace nkg
