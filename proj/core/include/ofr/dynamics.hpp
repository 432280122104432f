#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ofr/model.hpp"

namespace ofr {

// How the intensity is interpolated inside a segment: linear in E0 (and so
// in Omega), or linear in I.
enum class RampMode { field, intensity };

struct Segment {
    double duration_ns = 0.0;
    double intensity_from = 0.0;  // kW/cm^2
    double intensity_to = 0.0;
    double detuning_from = 0.0;   // cm^-1
    double detuning_to = 0.0;
};

struct RampProtocol {
    std::vector<Segment> segments;
    RampMode mode = RampMode::field;
    double dt_ns = 0.025;
    int min_steps = 100;  // per segment

    void validate() const;
    double duration_ns() const;
    // (intensity, detuning) at time t
    std::pair<double, double> at(double t_ns) const;
    std::pair<double, double> detuning_range() const;

    // Appends a ramp of the intensity to zero at the final detuning. A zero
    // duration leaves the protocol unchanged (sudden switch-off).
    RampProtocol with_switch_off(double t_switch_ns) const;
    // every segment stretched or squeezed to `segment_ns`
    RampProtocol scaled_to(double segment_ns) const;
};

struct ContractionOptions {
    double ground_window = 1e-5;    // keep ground levels with |E| below this, hartree
    double excited_window = 1e-6;   // margin around the detuning range, hartree
    bool eliminate = true;          // fold the remaining excited levels into H_gg
};

// Dressed Hamiltonian in the field-free channel eigenbases. Ground levels
// near threshold and excited levels near resonance are explicit; the other
// excited levels are adiabatically eliminated, which adds
// -Omega^2 S_f (eps_f + Delta - i Gamma/2)^-1 S_f^T to the ground block.
class ContractedSystem {
public:
    ContractedSystem(const Model& model, double detuning_lo_cm, double detuning_hi_cm,
                     const ContractionOptions& opt = {});

    int size() const { return ng_ + ne_; }
    int ground_size() const { return ng_; }
    int excited_size() const { return ne_; }
    int eliminated_size() const { return static_cast<int>(far_energies_.size()); }

    int last_bound() const { return last_bound_; }
    // k-th field-free trap state, -1 if it lies outside the window
    int trap(int k) const;
    Eigen::VectorXcd basis_state(int i) const;

    // Delta- and Gamma-dependent pieces; rebuilt only when the detuning moves
    struct Blocks {
        double detuning_cm = 0.0;
        double gamma = 0.0;
        Eigen::VectorXcd diagonal;
        Eigen::MatrixXcd elimination;  // ground block, per unit Omega^2
        Eigen::VectorXcd resolvent;    // 1 / (eps_f + Delta - i Gamma/2)
    };
    Blocks blocks(double detuning_cm, double gamma) const;

    double rabi(double intensity_kw_cm2) const;
    Eigen::MatrixXcd hamiltonian(const Blocks& b, double rabi) const;
    Eigen::MatrixXcd hamiltonian(double intensity_kw_cm2, double detuning_cm, double gamma) const;
    // explicit excited norm plus the eliminated admixture
    double excited_population(const Blocks& b, double rabi, const Eigen::VectorXcd& psi) const;

private:
    const Model* model_;
    int ng_ = 0, ne_ = 0;
    int last_bound_ = -1;
    int first_trap_ = -1;
    Eigen::VectorXd ground_energies_;
    Eigen::VectorXd excited_energies_;
    Eigen::VectorXd far_energies_;
    Eigen::MatrixXd coupling_;      // ground x explicit excited overlaps
    Eigen::MatrixXd far_coupling_;  // ground x eliminated overlaps
};

// exp(-i H dt) through a Chebyshev series on the interval [e_lo, e_hi],
// which must contain the spectrum of the Hermitian part of H.
class ChebyshevPropagator {
public:
    ChebyshevPropagator(double e_lo, double e_hi, double dt, double tolerance = 1e-14,
                        int max_order = 200000);
    // bounds from the Hermitian part of h, widened by `padding` x range on each side
    static ChebyshevPropagator for_matrix(const Eigen::MatrixXcd& h, double dt, double padding = 0.1,
                                          double tolerance = 1e-14);

    Eigen::VectorXcd apply(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi) const;
    int order() const { return static_cast<int>(coef_.size()) - 1; }

private:
    double center_ = 0.0, radius_ = 1.0, dt_ = 0.0;
    std::vector<double> coef_;
};

// Dense oracle: V exp(-i E dt) V^-1 psi from the full eigendecomposition.
// Limited to dimension 1024.
Eigen::VectorXcd reference_propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double dt);

struct PropagationOptions {
    int record_stride = 1;
    int trap_states = 5;
    int bound_samples = 17;  // per segment, for the spectral bounds
    double padding = 0.1;
    double tolerance = 1e-14;
    double norm_check = 1e-10;  // per-step drift allowed at Gamma = 0
};

struct Sample {
    double t_ns = 0.0;
    double norm = 1.0;
    double p_exc = 0.0;  // fraction of the current norm
    double p_mol = 0.0;
    double loss = 0.0;   // Simpson integral of Gamma p_exc norm
    std::vector<double> trap;
};

struct DynamicsResult {
    std::vector<Sample> samples;
    Eigen::VectorXcd state;
    double norm = 1.0;
    double p_mol = 0.0;
    double loss = 0.0;
    long steps = 0;
    int max_order = 0;
};

// Fourth-order commutator-free Magnus steps (two exponentials per step, H
// sampled at the Gauss nodes). Step counts per segment are rounded up to even.
DynamicsResult propagate(const ContractedSystem& sys, const Eigen::VectorXcd& psi0,
                         const RampProtocol& protocol, double gamma,
                         const PropagationOptions& opt = {});

struct TrackedPath {
    Eigen::VectorXcd state;
    std::complex<double> energy;
    double min_overlap = 1.0;
};

// Follows the dressed state that starts as `start` along the protocol path.
TrackedPath track_along(const ContractedSystem& sys, const RampProtocol& protocol, double gamma,
                        const Eigen::VectorXcd& start, int points_per_segment = 40);

struct AdiabaticityEntry {
    double ramp_ns = 0.0;
    double fidelity = 0.0;
    double p_mol = 0.0;
    double loss = 0.0;
};

std::vector<AdiabaticityEntry> adiabaticity_study(const ContractedSystem& sys, const RampProtocol& protocol,
                                                  const std::vector<double>& ramp_ns, double gamma,
                                                  const Eigen::VectorXcd& psi0, int workers = 1,
                                                  const PropagationOptions& opt = {});

struct SwitchoffEntry {
    double t_switch_ns = 0.0;
    double p_mol = 0.0;
    double norm = 0.0;
};

struct SwitchoffResult {
    DynamicsResult ramp;
    std::vector<SwitchoffEntry> entries;
};

SwitchoffResult switchoff_study(const ContractedSystem& sys, const RampProtocol& protocol,
                                const std::vector<double>& t_switch_ns, double gamma,
                                const Eigen::VectorXcd& psi0, int workers = 1,
                                const PropagationOptions& opt = {});

}  // namespace ofr
