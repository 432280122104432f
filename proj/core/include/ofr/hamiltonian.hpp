#pragma once

#include <functional>

#include <Eigen/Dense>

#include "ofr/grid.hpp"
#include "ofr/potentials.hpp"

namespace ofr {

// T + V(R) + sign * V_trap(R) on the grid nodes.
Eigen::MatrixXd assemble_channel(const RadialGrid& grid, const Eigen::MatrixXd& kinetic,
                                 const std::function<double(double)>& potential,
                                 const TrapConfig& trap, int sign, double mass);

struct LaserConfig {
    double intensity_kw_cm2 = 0.0;
    double detuning_cm = 4.0;  // positive = red detuning
    double dipole_au = 2.0;    // D.eps, placeholder magnitude

    double field() const;      // E0, atomic units
    double rabi() const;       // Omega = E0 D.eps, hartree
    double detuning() const;   // hartree
};

// Blocks [[H_g, Omega 1], [Omega 1, H_e + Delta - i Gamma/2]], ground first.
struct DressedSystem {
    Eigen::MatrixXcd matrix;
    LaserConfig laser;
    double gamma = 0.0;

    int channel_size() const { return static_cast<int>(matrix.rows() / 2); }
};

// `he` is measured from the excited asymptote; the detuning shift and the
// decay term are added here.
DressedSystem assemble_dressed(const Eigen::MatrixXd& hg, const Eigen::MatrixXd& he,
                               const LaserConfig& laser, double gamma);

// Energy of the light-shifted ground asymptote, (Delta - sqrt(Delta^2 + 4 Omega^2)) / 2.
double dressed_threshold(const LaserConfig& laser);

}  // namespace ofr
