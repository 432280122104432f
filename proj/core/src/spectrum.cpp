#include "ofr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ofr/error.hpp"
#include "ofr/linalg.hpp"

namespace ofr {

ChannelSpectrum diagonalize_channel(const Eigen::MatrixXd& h, const RadialGrid& grid) {
    if (h.rows() != grid.size()) throw ConfigError("channel Hamiltonian does not match the grid");
    auto eig = linalg::symmetric_eigen(h, true);
    ChannelSpectrum s;
    s.energies = std::move(eig.values);
    s.vectors = std::move(eig.vectors);
    // fix the sign so the first large component is positive
    for (int k = 0; k < s.vectors.cols(); ++k) {
        Eigen::Index imax;
        s.vectors.col(k).cwiseAbs().maxCoeff(&imax);
        if (s.vectors(imax, k) < 0.0) s.vectors.col(k) *= -1.0;
    }
    s.mean_r = (s.vectors.array().square().colwise() * grid.r.array()).colwise().sum().transpose();
    return s;
}

DressedSpectrum diagonalize(const DressedSystem& system, const DiagonalizeOptions& opt) {
    const int n = system.channel_size();
    auto eig = linalg::general_eigen(system.matrix, opt.left_vectors);
    const int dim = 2 * n;

    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ea = eig.values[a], eb = eig.values[b];
        if (ea.real() != eb.real()) return ea.real() < eb.real();
        return ea.imag() < eb.imag();
    });

    DressedSpectrum out;
    out.states.reserve(dim);
    if (opt.left_vectors) out.left.resize(dim, dim);
    for (int pos = 0; pos < dim; ++pos) {
        const int k = order[pos];
        DressedState s;
        s.energy = eig.values[k];
        Eigen::VectorXcd v = eig.right.col(k);
        v /= v.norm();
        // deterministic phase: largest component real and positive
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        v *= std::conj(v[imax]) / std::abs(v[imax]);
        s.p_exc = v.tail(n).squaredNorm();
        if (opt.last_bound) s.p_mol = std::norm(opt.last_bound->cast<std::complex<double>>().dot(v.head(n)));
        if (opt.grid) {
            const auto& r = opt.grid->r;
            s.mean_r = (v.head(n).cwiseAbs2().cwiseProduct(r) + v.tail(n).cwiseAbs2().cwiseProduct(r)).sum();
            s.box_edge = s.p_exc > 0.5 && s.mean_r > 0.9 * opt.grid->r_max;
        }
        s.label = pos;
        if (opt.left_vectors) {
            Eigen::VectorXcd u = eig.left.col(k);
            const std::complex<double> d = u.dot(v);
            if (std::abs(d) == 0.0) throw NumericalError("left and right eigenvectors are orthogonal");
            out.left.col(pos) = u / std::conj(d);
        }
        s.vector = std::move(v);
        out.states.push_back(std::move(s));
    }
    return out;
}

double biorthogonality_defect(const DressedSpectrum& s, double gap) {
    const int dim = static_cast<int>(s.states.size());
    if (s.left.cols() != dim) throw ConfigError("biorthogonality check needs left eigenvectors");
    Eigen::MatrixXcd right(s.left.rows(), dim);
    for (int k = 0; k < dim; ++k) right.col(k) = s.states[k].vector;
    const Eigen::MatrixXcd m = s.left.adjoint() * right;
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (i != j && std::abs(s.states[i].energy - s.states[j].energy) < gap) continue;
            const double target = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(m(i, j) - target));
        }
    }
    return worst;
}

Classification classify_states(const std::vector<DressedState>& states, double threshold, double tol) {
    Classification c;
    c.kinds.reserve(states.size());
    const double edge = threshold - tol;
    for (int i = 0; i < static_cast<int>(states.size()); ++i) {
        const auto& s = states[i];
        const double e = s.energy.real();
        if (s.p_exc > 0.5)
            c.kinds.push_back(StateClass::excited_dominated);
        else if (e < edge)
            c.kinds.push_back(StateClass::molecular_bound);
        else
            c.kinds.push_back(StateClass::trap);
        if (std::abs(e - edge) < 0.5 * tol) c.ambiguous.push_back(i);
    }
    return c;
}

int last_bound_level(const ChannelSpectrum& ground, double tol) {
    int best = -1;
    for (int i = 0; i < ground.energies.size(); ++i)
        if (ground.energies[i] < -tol) best = i;
    if (best < 0) throw NumericalError("no bound level below the ground asymptote");
    return best;
}

double lifetime(const DressedState& state, double tau_at_ns) {
    if (state.p_exc <= 0.0) return std::numeric_limits<double>::infinity();
    return tau_at_ns / (std::sqrt(2.0) * state.p_exc);
}

TrackResult track_state(const Eigen::VectorXcd& previous, const std::vector<DressedState>& states,
                        double degeneracy_gap) {
    if (states.empty()) throw ConfigError("no states to track into");
    TrackResult r;
    double best = -1.0;
    for (int k = 0; k < static_cast<int>(states.size()); ++k) {
        double ov = std::abs(states[k].vector.dot(previous));
        if (ov > best) {
            best = ov;
            r.index = k;
        }
    }
    std::vector<int> cluster;
    const auto e0 = states[r.index].energy;
    for (int k = 0; k < static_cast<int>(states.size()); ++k)
        if (std::abs(states[k].energy - e0) < degeneracy_gap) cluster.push_back(k);
    if (cluster.size() <= 1) {
        r.vector = states[r.index].vector;
        r.overlap = best;
        return r;
    }
    Eigen::MatrixXcd basis(previous.size(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t c = 0; c < cluster.size(); ++c) basis.col(c) = states[cluster[c]].vector;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(basis.rows(), basis.cols());
    Eigen::VectorXcd proj = q * (q.adjoint() * previous);
    r.overlap = proj.norm();
    r.vector = r.overlap > 0.0 ? Eigen::VectorXcd(proj / r.overlap) : states[r.index].vector;
    return r;
}

}  // namespace ofr
