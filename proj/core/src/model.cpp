#include "ofr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ofr/error.hpp"

namespace ofr {

namespace {

// V flattened to its minimum inside the well, so the envelope does not ask
// for resolution on the repulsive wall
double flattened(const ChannelPotential& p, double r) {
    const double rm = p.r_min();
    return r < rm ? p(rm) : p(r);
}

}  // namespace

double default_r_max(double nu_khz, double mass) {
    if (!(nu_khz > 0.0)) throw ConfigError("automatic R_max needs a trap; set grid.R_max_a0");
    const double w = units::trap_omega(nu_khz);
    const double length = std::sqrt(1.0 / (mass * w));
    return 1.5 * std::sqrt(43.0) * length;
}

double Model::hbar_omega() const { return units::trap_omega(cfg_.trap.nu_khz); }

double Model::gamma() const {
    if (std::isinf(cfg_.tau_at_ns)) return 0.0;
    return units::decay_rate(cfg_.tau_at_ns);
}

double Model::envelope_momentum(double r, double e_max) const {
    const auto& gs = cfg_.grid;
    const double m = cfg_.mass;
    const double vtr = cfg_.trap.nu_khz > 0.0 ? trap_potential(cfg_.trap, r, 1, m) : 0.0;
    double tail_boost = 0.0;
    if (gs.tail_energy > 0.0 && cfg_.ground_interaction && ground_.params().c6 > 0.0) {
        const double kappa = std::sqrt(2.0 * m * gs.tail_energy);
        const double r_cut = std::pow(ground_.params().c6 / gs.tail_energy, 1.0 / 6.0) + 12.0 / kappa;
        tail_boost = gs.tail_energy / (1.0 + std::pow(r / r_cut, 6));
    }
    const double vg = cfg_.ground_interaction ? flattened(ground_, r) : 0.0;
    const double kg = std::max(e_max + tail_boost - vg - vtr, 0.0);
    double ke = 0.0;
    if (cfg_.excited_channel) {
        const double ee = std::max(e_max - units::cm_to_hartree(gs.envelope_detuning_cm), 0.0);
        ke = std::max(ee - flattened(excited_, r) + vtr, 0.0);
    }
    return std::sqrt(2.0 * m * std::hypot(kg, ke));
}

Model::Model(const ModelConfig& cfg) : cfg_(cfg), ground_(cfg.ground), excited_(cfg.excited) {
    if (!(cfg_.mass > 0.0)) throw ConfigError("reduced mass must be positive");
    if (cfg_.trap.nu_khz < 0.0) throw ConfigError("trap frequency must be nonnegative");
    if (cfg_.ground_interaction && cfg_.a_target) {
        CalibrationOptions copt = cfg_.calibration;
        copt.scattering.mass = cfg_.mass;
        ground_ = calibrate_wall(ground_, *cfg_.a_target, copt);
        cfg_.ground = ground_.params();
    }
    if (cfg_.ground_interaction) {
        ScatteringOptions sopt = cfg_.calibration.scattering;
        sopt.mass = cfg_.mass;
        a_ = ofr::scattering_length(ground_, sopt);
    }

    auto& gs = cfg_.grid;
    if (gs.r_max <= 0.0) gs.r_max = default_r_max(cfg_.trap.nu_khz, cfg_.mass);
    if (gs.kind == RadialGrid::Kind::uniform) {
        grid_ = build_uniform_grid(gs.r_min, gs.r_max, gs.points);
    } else {
        double e_max = gs.e_max;
        if (e_max <= 0.0) {
            if (!(cfg_.trap.nu_khz > 0.0))
                throw ConfigError("mapped grid without a trap needs an explicit E_max");
            e_max = gs.e_max_hw * hbar_omega();
        }
        grid_ = build_mapped_grid([&](double r) { return envelope_momentum(r, e_max); }, gs.beta,
                                  gs.r_min, gs.r_max);
        grid_.e_max = e_max;
    }

    const Eigen::MatrixXd t = kinetic_operator(grid_, cfg_.mass);
    std::function<double(double)> vg;
    if (cfg_.ground_interaction) vg = ground_.as_function();
    hg_ = assemble_channel(grid_, t, vg, cfg_.trap, +1, cfg_.mass);
    sg_ = diagonalize_channel(hg_, grid_);
    if (cfg_.excited_channel) {
        he_ = assemble_channel(grid_, t, excited_.as_function(), cfg_.trap, -1, cfg_.mass);
        se_ = diagonalize_channel(he_, grid_);
    }

    // a bare trap has no molecular level; leave last_bound_ at -1
    const double tol = cfg_.trap.nu_khz > 0.0 ? classification_tol() : 0.0;
    if (sg_.energies.size() > 0 && sg_.energies[0] < -tol) last_bound_ = last_bound_level(sg_, tol);
}

double Model::t_vib_ns() const {
    const int t0 = first_trap();
    if (t0 + 1 >= sg_.energies.size()) throw NumericalError("fewer than two trap states resolved");
    const double spacing = sg_.energies[t0 + 1] - sg_.energies[t0];
    return units::au_to_ns(2.0 * std::numbers::pi / spacing);
}

LaserConfig Model::laser(double intensity_kw_cm2, double detuning_cm) const {
    LaserConfig l;
    l.intensity_kw_cm2 = intensity_kw_cm2;
    l.detuning_cm = detuning_cm;
    l.dipole_au = cfg_.dipole_au;
    return l;
}

DressedSystem Model::dressed(double intensity_kw_cm2, double detuning_cm, double gamma) const {
    if (!cfg_.excited_channel) throw ConfigError("dressed system needs the excited channel");
    return assemble_dressed(hg_, he_, laser(intensity_kw_cm2, detuning_cm), gamma);
}

}  // namespace ofr
