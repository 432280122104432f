#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ofr {

// Morse core with multiplicative wall scale on alpha, C1-matched to
// -C3/R^3 - C6/R^6 - C8/R^8.  Energies in hartree relative to the
// channel asymptote, lengths in bohr.
struct ChannelParams {
    double depth = 1e-3;     // D_e
    double r_eq = 14.0;      // R_e
    double alpha = 0.5;      // Morse range parameter
    double wall_scale = 1.0; // lambda, multiplies alpha
    double c3 = 0.0;
    double c6 = 0.0;
    double c8 = 0.0;
};

class ChannelPotential {
public:
    explicit ChannelPotential(const ChannelParams& p);

    double operator()(double r) const;
    double derivative(double r) const;

    double tail(double r) const;
    double r_match() const { return r_match_; }
    double shift() const { return shift_; }
    // position of the potential minimum
    double r_min() const;
    const ChannelParams& params() const { return p_; }

    // plain callable, handy for integrators
    std::function<double(double)> as_function() const;

private:
    double morse(double r) const;
    double morse_derivative(double r) const;
    double tail_derivative(double r) const;

    ChannelParams p_;
    double r_match_ = 0.0;
    double shift_ = 0.0;
};

struct TrapConfig {
    double nu_khz = 250.0;
};

// sign * m w^2 R^2 / 2, sign = +1 ground, -1 excited
double trap_potential(const TrapConfig& trap, double r, int sign, double mass);

struct ScatteringOptions {
    double r_start = 0.0;   // 0 = pick automatically deep inside the wall
    double r_far = 1000.0;  // first outer radius, doubled until stable
    double r_far_max = 128000.0;
    double step = 0.0;      // 0 = lambda_dB/40 at the well bottom, capped at 0.01
    double tolerance = 0.01;
    double mass = 0.0;      // 0 = 87Rb pair
};

// Zero-energy s-wave scattering length from outward Numerov integration.
double scattering_length(const std::function<double(double)>& v, double v_min,
                         const ScatteringOptions& opt);
double scattering_length(const ChannelPotential& p, ScatteringOptions opt = {});

struct CalibrationOptions {
    double lambda_lo = 0.97;
    double lambda_hi = 1.08;
    int samples = 56;
    double tolerance = 0.02;  // bohr
    ScatteringOptions scattering{};
};

// Adjusts wall_scale so the scattering length hits a_target. The root
// closest to the current wall_scale wins.
ChannelPotential calibrate_wall(const ChannelPotential& p, double a_target,
                                const CalibrationOptions& opt = {});

// number of zero-energy nodes of the radial solution, i.e. bound states
int count_bound_states(const ChannelPotential& p, ScatteringOptions opt = {});

}  // namespace ofr
