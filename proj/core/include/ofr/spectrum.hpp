#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ofr/grid.hpp"
#include "ofr/hamiltonian.hpp"

namespace ofr {

struct ChannelSpectrum {
    Eigen::VectorXd energies;  // ascending, hartree
    Eigen::MatrixXd vectors;   // columns
    Eigen::VectorXd mean_r;    // <R> per state
};

ChannelSpectrum diagonalize_channel(const Eigen::MatrixXd& h, const RadialGrid& grid);

struct DressedState {
    std::complex<double> energy;
    Eigen::VectorXcd vector;  // ground block first, unit norm
    double p_exc = 0.0;
    double p_mol = 0.0;
    double mean_r = 0.0;
    bool box_edge = false;    // excited-channel state sitting at the outer wall
    int label = 0;            // position in the Re E ordering
};

struct DiagonalizeOptions {
    const Eigen::VectorXd* last_bound = nullptr;  // field-free target for P_mol
    const RadialGrid* grid = nullptr;             // enables <R> and the box-edge filter
    bool left_vectors = false;
};

struct DressedSpectrum {
    std::vector<DressedState> states;  // sorted by Re E
    Eigen::MatrixXcd left;             // left eigenvectors in the same order, if requested
};

DressedSpectrum diagonalize(const DressedSystem& system, const DiagonalizeOptions& opt = {});

// max |(U^H V)_ij - delta_ij| after pairing each right vector with its left
// partner, skipping pairs whose eigenvalue gap is below `gap`
double biorthogonality_defect(const DressedSpectrum& s, double gap = 1e-9);

enum class StateClass { molecular_bound, trap, excited_dominated };

struct Classification {
    std::vector<StateClass> kinds;
    std::vector<int> ambiguous;  // indices close to the bound/trap boundary
};

// bound: Re E < threshold - tol; excited-dominated (checked first): p_exc > 0.5.
Classification classify_states(const std::vector<DressedState>& states, double threshold, double tol);

// Index of the highest ground level below -tol; throws if there is none.
int last_bound_level(const ChannelSpectrum& ground, double tol);

// tau_at / (sqrt(2) p_exc); +inf when p_exc is zero
double lifetime(const DressedState& state, double tau_at_ns);

struct TrackResult {
    int index = -1;
    double overlap = 0.0;
    Eigen::VectorXcd vector;
};

// Follows `previous` into `states` by maximal overlap; near-degenerate
// partners are merged into a projected vector.
TrackResult track_state(const Eigen::VectorXcd& previous, const std::vector<DressedState>& states,
                        double degeneracy_gap = 1e-12);

}  // namespace ofr
