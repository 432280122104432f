#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ofr/grid.hpp"
#include "ofr/hamiltonian.hpp"
#include "ofr/potentials.hpp"
#include "ofr/spectrum.hpp"
#include "ofr/units.hpp"

namespace ofr {

struct GridSettings {
    RadialGrid::Kind kind = RadialGrid::Kind::mapped;
    int points = 0;                    // uniform only, boundaries included
    double r_min = 9.5;
    double r_max = 0.0;                // 0 = 1.5 x turning point of the 10th trap state
    double beta = 0.7;
    double e_max_hw = 50.0;            // envelope energy above the ground asymptote, in hbar w
    double e_max = 0.0;                // hartree, overrides e_max_hw when > 0
    double envelope_detuning_cm = 3.0; // excited-channel envelope sits this far below its asymptote
    double tail_energy = 4e-8;         // extra ground resolution for the dispersion tail, hartree
};

struct ModelConfig {
    ChannelParams ground{1e-3, 14.0, 0.5, 1.0, 0.0, 4698.0, 5.77e5};
    ChannelParams excited{1e-3, 25.0, 0.3, 1.0, 8.0, 1e4, 1e6};
    bool ground_interaction = true;    // false = bare trap in the ground channel
    bool excited_channel = true;
    std::optional<double> a_target = 100.0;
    CalibrationOptions calibration{};
    TrapConfig trap{11800.0};
    GridSettings grid{};
    double dipole_au = 2.0;
    double tau_at_ns = 26.24;
    double mass = units::rb87_pair_mass;
};

// Everything that does not depend on the laser: calibrated potentials, grid,
// channel Hamiltonians and their field-free spectra.
class Model {
public:
    explicit Model(const ModelConfig& cfg);

    const ModelConfig& config() const { return cfg_; }
    const ChannelPotential& ground() const { return ground_; }
    const ChannelPotential& excited() const { return excited_; }
    const RadialGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& ground_hamiltonian() const { return hg_; }
    const Eigen::MatrixXd& excited_hamiltonian() const { return he_; }
    const ChannelSpectrum& ground_spectrum() const { return sg_; }
    const ChannelSpectrum& excited_spectrum() const { return se_; }

    double mass() const { return cfg_.mass; }
    double hbar_omega() const;
    double gamma() const;
    double scattering_length() const { return a_; }

    // bound/trap separator below the (dressed) threshold
    double classification_tol() const { return 0.5 * hbar_omega(); }
    int last_bound() const { return last_bound_; }
    int first_trap() const { return last_bound_ + 1; }
    Eigen::VectorXd last_bound_vector() const { return sg_.vectors.col(last_bound_); }

    // period of the lowest trap-ladder spacing, ns
    double t_vib_ns() const;

    LaserConfig laser(double intensity_kw_cm2, double detuning_cm) const;
    DressedSystem dressed(double intensity_kw_cm2, double detuning_cm, double gamma) const;

private:
    double envelope_momentum(double r, double e_max) const;

    ModelConfig cfg_;
    ChannelPotential ground_;
    ChannelPotential excited_;
    RadialGrid grid_;
    Eigen::MatrixXd hg_, he_;
    ChannelSpectrum sg_, se_;
    double a_ = 0.0;
    int last_bound_ = -1;
};

// default outer box edge for a trap: 1.5 x turning point of the n = 10 state
double default_r_max(double nu_khz, double mass);

}  // namespace ofr
