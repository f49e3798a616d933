#ifndef NKG_GRID_HPP
#define NKG_GRID_HPP

#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "nkg/errors.hpp"

namespace nkg {

// Uniform, symmetric wavenumber grid on [-kmax, kmax].  All L2(dk) integrals
// of the model become dk-weighted sums over these points.
struct KGrid {
    Eigen::VectorXd points; // strictly increasing, symmetric about 0
    double dk = 0.0;

    int size() const { return static_cast<int>(points.size()); }

    // n_points odd so k = 0 is a grid point.
    static KGrid symmetric(double kmax, int n_points);

    // grid with same extent, ratio x the resolution (for quadrature oracles)
    KGrid refined(int ratio) const;
    // grid with same spacing, ratio x the extent (for tail detection)
    KGrid extended(int ratio) const;

    void validate() const;
};

// omega(k) = sqrt(k^2 + m_f^2) >= m_f > 0.
double omega_eval(double k, double m_f);

struct Dispersion {
    double mass = 1.0; // m_f

    double omega(double k) const { return omega_eval(k, mass); }
    Eigen::VectorXd omega_on(const KGrid& grid) const;
};

// Coupling form factor chi(k).  Presets are closed-form so that refined and
// extended grids can re-evaluate it; custom takes any callable.
struct FormFactor {
    enum class Preset { gaussian, bump, custom };

    Preset preset = Preset::gaussian;
    double amplitude = 0.25;
    double width = 2.0;
    std::function<double(double)> eval; // always callable

    static FormFactor gaussian(double amplitude, double width);
    // compactly supported: amplitude * exp(-w^2/(w^2-k^2)) * e on |k| < w
    static FormFactor bump(double amplitude, double width);
    static FormFactor custom(std::function<double(double)> f);

    Eigen::VectorXd values_on(const KGrid& grid) const;
    std::string preset_name() const;
};

// dk-weighted norm ||omega^w chi||_{L2} on a grid.
double weighted_chi_norm(const FormFactor& chi, const Dispersion& disp,
                         const KGrid& grid, double omega_power);

} // namespace nkg

#endif
