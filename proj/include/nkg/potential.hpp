#ifndef NKG_POTENTIAL_HPP
#define NKG_POTENTIAL_HPP

#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace nkg {

// External potential V: R^{dn} -> R together with its gradient and the
// sup bounds that enter every Lipschitz/Gronwall constant.  The bounds are
// supplied per preset in closed form; infinite bounds mark a potential that
// violates the C^2_b requirement.
struct Potential {
    enum class Preset { zero, gaussian_well, custom };

    Preset preset = Preset::zero;
    double depth = 0.0; // V0
    double width = 1.0; // w

    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;

    double sup_value = 0.0;    // ||V||_inf
    double sup_gradient = 0.0; // ||grad V||_inf (euclidean norm of the full gradient)
    double sup_hessian = 0.0;  // ||hess V||_inf (operator norm)

    static Potential zero();
    // V(q) = -V0 sum_j exp(-q_j^2 / w^2)
    static Potential gaussian_well(double depth, double width, int dn);
    static Potential custom(std::function<double(const Eigen::VectorXd&)> v,
                            std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g,
                            double sup_v, double sup_g, double sup_h);

    std::string preset_name() const;
};

} // namespace nkg

#endif
