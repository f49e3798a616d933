#include "nkg/grid.hpp"

namespace nkg {

KGrid KGrid::symmetric(double kmax, int n_points) {
    if (kmax <= 0.0)
        throw config_error("KGrid: kmax must be positive");
    if (n_points < 3 || n_points % 2 == 0)
        throw config_error("KGrid: n_points must be odd and >= 3 so that k = 0 is a grid point");
    KGrid g;
    g.points.resize(n_points);
    g.dk = 2.0 * kmax / (n_points - 1);
    for (int i = 0; i < n_points; ++i)
        g.points[i] = -kmax + g.dk * i;
    g.points[(n_points - 1) / 2] = 0.0; // exact zero at the center
    return g;
}

KGrid KGrid::refined(int ratio) const {
    if (ratio < 1) throw config_error("KGrid::refined: ratio must be >= 1");
    const double kmax = points[size() - 1];
    return symmetric(kmax, (size() - 1) * ratio + 1);
}

KGrid KGrid::extended(int ratio) const {
    if (ratio < 1) throw config_error("KGrid::extended: ratio must be >= 1");
    const double kmax = points[size() - 1];
    return symmetric(kmax * ratio, (size() - 1) * ratio + 1);
}

void KGrid::validate() const {
    const int n = size();
    if (n < 3 || dk <= 0.0)
        throw config_error("KGrid: empty or non-positive spacing");
    for (int i = 1; i < n; ++i) {
        if (!(points[i] > points[i - 1]))
            throw config_error("KGrid: points must be strictly increasing");
        if (std::abs((points[i] - points[i - 1]) - dk) > 1e-12 * std::max(1.0, dk))
            throw config_error("KGrid: spacing must be uniform");
    }
    for (int i = 0; i < n; ++i) {
        if (std::abs(points[i] + points[n - 1 - i]) > 1e-12)
            throw config_error("KGrid: grid must be symmetric about 0");
    }
}

double omega_eval(double k, double m_f) {
    if (!(m_f > 0.0))
        throw config_error("omega_eval: field mass m_f must be positive");
    return std::sqrt(k * k + m_f * m_f);
}

Eigen::VectorXd Dispersion::omega_on(const KGrid& grid) const {
    Eigen::VectorXd w(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        w[i] = omega(grid.points[i]);
    return w;
}

FormFactor FormFactor::gaussian(double amplitude, double width) {
    if (!(width > 0.0)) throw config_error("FormFactor::gaussian: width must be positive");
    FormFactor f;
    f.preset = Preset::gaussian;
    f.amplitude = amplitude;
    f.width = width;
    f.eval = [amplitude, width](double k) { return amplitude * std::exp(-k * k / (width * width)); };
    return f;
}

FormFactor FormFactor::bump(double amplitude, double width) {
    if (!(width > 0.0)) throw config_error("FormFactor::bump: width must be positive");
    FormFactor f;
    f.preset = Preset::bump;
    f.amplitude = amplitude;
    f.width = width;
    // normalized so that the value at k = 0 is `amplitude`
    f.eval = [amplitude, width](double k) {
        const double r = k / width;
        if (std::abs(r) >= 1.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
    };
    return f;
}

FormFactor FormFactor::custom(std::function<double(double)> fn) {
    FormFactor f;
    f.preset = Preset::custom;
    f.amplitude = 0.0;
    f.width = 0.0;
    f.eval = std::move(fn);
    return f;
}

Eigen::VectorXd FormFactor::values_on(const KGrid& grid) const {
    Eigen::VectorXd v(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        v[i] = eval(grid.points[i]);
    return v;
}

std::string FormFactor::preset_name() const {
    switch (preset) {
        case Preset::gaussian: return "gaussian";
        case Preset::bump: return "bump";
        default: return "custom";
    }
}

double weighted_chi_norm(const FormFactor& chi, const Dispersion& disp,
                         const KGrid& grid, double omega_power) {
    double s = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double w = disp.omega(grid.points[i]);
        const double c = chi.eval(grid.points[i]);
        s += std::pow(w, 2.0 * omega_power) * c * c;
    }
    return std::sqrt(grid.dk * s);
}

} // namespace nkg
