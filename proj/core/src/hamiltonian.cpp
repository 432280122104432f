#include "ofr/hamiltonian.hpp"

#include <cmath>
#include <complex>

#include "ofr/error.hpp"
#include "ofr/units.hpp"

namespace ofr {

Eigen::MatrixXd assemble_channel(const RadialGrid& grid, const Eigen::MatrixXd& kinetic,
                                 const std::function<double(double)>& potential,
                                 const TrapConfig& trap, int sign, double mass) {
    const int n = grid.size();
    if (kinetic.rows() != n || kinetic.cols() != n)
        throw ConfigError("kinetic operator does not match the grid size");
    Eigen::MatrixXd h = kinetic;
    for (int i = 0; i < n; ++i) {
        double r = grid.r[i];
        double v = potential ? potential(r) : 0.0;
        if (trap.nu_khz > 0.0) v += trap_potential(trap, r, sign, mass);
        h(i, i) += v;
    }
    return h;
}

double LaserConfig::field() const { return units::intensity_to_field(intensity_kw_cm2 * 1e3); }

double LaserConfig::rabi() const { return field() * dipole_au; }

double LaserConfig::detuning() const { return units::cm_to_hartree(detuning_cm); }

DressedSystem assemble_dressed(const Eigen::MatrixXd& hg, const Eigen::MatrixXd& he,
                               const LaserConfig& laser, double gamma) {
    if (hg.rows() != he.rows() || hg.cols() != he.cols() || hg.rows() != hg.cols())
        throw ConfigError("channel blocks must be square and of equal size");
    if (gamma < 0.0) throw ConfigError("decay rate must be nonnegative");
    const int n = static_cast<int>(hg.rows());
    DressedSystem s;
    s.laser = laser;
    s.gamma = gamma;
    s.matrix = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    s.matrix.topLeftCorner(n, n) = hg.cast<std::complex<double>>();
    s.matrix.bottomRightCorner(n, n) = he.cast<std::complex<double>>();
    const std::complex<double> shift(laser.detuning(), -0.5 * gamma);
    const double omega = laser.rabi();
    for (int i = 0; i < n; ++i) {
        s.matrix(n + i, n + i) += shift;
        s.matrix(i, n + i) = omega;
        s.matrix(n + i, i) = omega;
    }
    return s;
}

double dressed_threshold(const LaserConfig& laser) {
    const double d = laser.detuning();
    const double w = laser.rabi();
    return 0.5 * (d - std::sqrt(d * d + 4.0 * w * w));
}

}  // namespace ofr
