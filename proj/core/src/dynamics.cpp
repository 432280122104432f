#include "ofr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "ofr/error.hpp"
#include "ofr/linalg.hpp"
#include "ofr/parallel.hpp"
#include "ofr/spectrum.hpp"

namespace ofr {

using cd = std::complex<double>;

// --- protocol ---------------------------------------------------------------

void RampProtocol::validate() const {
    if (segments.empty()) throw ConfigError("protocol has no segments");
    if (!(dt_ns > 0.0)) throw ConfigError("protocol time step must be positive");
    if (min_steps < 1) throw ConfigError("protocol needs at least one step per segment");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!(s.duration_ns > 0.0))
            throw ConfigError("segment " + std::to_string(i) + " needs a positive duration");
        if (s.intensity_from < 0.0 || s.intensity_to < 0.0)
            throw ConfigError("segment " + std::to_string(i) + " has a negative intensity");
        if (i > 0) {
            const auto& p = segments[i - 1];
            const double tol = 1e-12;
            if (std::abs(p.intensity_to - s.intensity_from) > tol * std::max(1.0, p.intensity_to) ||
                std::abs(p.detuning_to - s.detuning_from) > tol * std::max(1.0, std::abs(p.detuning_to)))
                throw ConfigError("segment " + std::to_string(i) + " does not continue the previous one");
        }
    }
}

double RampProtocol::duration_ns() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration_ns;
    return t;
}

namespace {

std::pair<double, double> segment_at(const Segment& s, double f, RampMode mode) {
    f = std::clamp(f, 0.0, 1.0);
    double intensity;
    if (mode == RampMode::field) {
        const double a = std::sqrt(s.intensity_from), b = std::sqrt(s.intensity_to);
        const double e = a + f * (b - a);
        intensity = e * e;
    } else {
        intensity = s.intensity_from + f * (s.intensity_to - s.intensity_from);
    }
    return {intensity, s.detuning_from + f * (s.detuning_to - s.detuning_from)};
}

}  // namespace

std::pair<double, double> RampProtocol::at(double t_ns) const {
    if (segments.empty()) throw ConfigError("protocol has no segments");
    double t0 = 0.0;
    for (const auto& s : segments) {
        if (t_ns <= t0 + s.duration_ns) return segment_at(s, (t_ns - t0) / s.duration_ns, mode);
        t0 += s.duration_ns;
    }
    return segment_at(segments.back(), 1.0, mode);
}

std::pair<double, double> RampProtocol::detuning_range() const {
    double lo = segments.front().detuning_from, hi = lo;
    for (const auto& s : segments) {
        lo = std::min({lo, s.detuning_from, s.detuning_to});
        hi = std::max({hi, s.detuning_from, s.detuning_to});
    }
    return {lo, hi};
}

RampProtocol RampProtocol::with_switch_off(double t_switch_ns) const {
    if (t_switch_ns < 0.0) throw ConfigError("switch-off time must be nonnegative");
    RampProtocol p = *this;
    if (t_switch_ns == 0.0) return p;
    const auto& last = segments.back();
    p.segments.push_back({t_switch_ns, last.intensity_to, 0.0, last.detuning_to, last.detuning_to});
    return p;
}

RampProtocol RampProtocol::scaled_to(double segment_ns) const {
    if (!(segment_ns > 0.0)) throw ConfigError("segment duration must be positive");
    RampProtocol p = *this;
    for (auto& s : p.segments) s.duration_ns = segment_ns;
    return p;
}

// --- contracted system ------------------------------------------------------

ContractedSystem::ContractedSystem(const Model& model, double detuning_lo_cm, double detuning_hi_cm,
                                   const ContractionOptions& opt)
    : model_(&model) {
    if (!model.config().excited_channel) throw ConfigError("dynamics needs the excited channel");
    if (detuning_hi_cm < detuning_lo_cm) std::swap(detuning_lo_cm, detuning_hi_cm);
    const auto& sg = model.ground_spectrum();
    const auto& se = model.excited_spectrum();

    std::vector<int> gsel, esel, far;
    for (int i = 0; i < sg.energies.size(); ++i)
        if (std::abs(sg.energies[i]) < opt.ground_window) gsel.push_back(i);
    const double lo = -units::cm_to_hartree(detuning_hi_cm) - opt.excited_window;
    const double hi = -units::cm_to_hartree(detuning_lo_cm) + opt.excited_window;
    for (int j = 0; j < se.energies.size(); ++j) {
        if (se.energies[j] > lo && se.energies[j] < hi)
            esel.push_back(j);
        else if (opt.eliminate)
            far.push_back(j);
    }
    ng_ = static_cast<int>(gsel.size());
    ne_ = static_cast<int>(esel.size());
    if (ng_ == 0) throw ConfigError("ground window holds no levels");

    auto pos = [&](int level) {
        auto it = std::find(gsel.begin(), gsel.end(), level);
        return it == gsel.end() ? -1 : static_cast<int>(it - gsel.begin());
    };
    last_bound_ = model.last_bound() >= 0 ? pos(model.last_bound()) : -1;
    first_trap_ = pos(model.first_trap());
    if (first_trap_ < 0) throw ConfigError("ground window misses the lowest trap state");

    Eigen::MatrixXd ug(sg.vectors.rows(), ng_), ue(se.vectors.rows(), ne_), uf(se.vectors.rows(), far.size());
    ground_energies_.resize(ng_);
    excited_energies_.resize(ne_);
    far_energies_.resize(far.size());
    for (int i = 0; i < ng_; ++i) {
        ug.col(i) = sg.vectors.col(gsel[i]);
        ground_energies_[i] = sg.energies[gsel[i]];
    }
    for (int j = 0; j < ne_; ++j) {
        ue.col(j) = se.vectors.col(esel[j]);
        excited_energies_[j] = se.energies[esel[j]];
    }
    for (std::size_t j = 0; j < far.size(); ++j) {
        uf.col(j) = se.vectors.col(far[j]);
        far_energies_[j] = se.energies[far[j]];
    }
    coupling_ = ug.transpose() * ue;
    far_coupling_ = ug.transpose() * uf;
}

int ContractedSystem::trap(int k) const {
    const int i = first_trap_ + k;
    return i < ng_ ? i : -1;
}

Eigen::VectorXcd ContractedSystem::basis_state(int i) const {
    if (i < 0 || i >= size()) throw ConfigError("basis index outside the contracted space");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size());
    v[i] = 1.0;
    return v;
}

double ContractedSystem::rabi(double intensity_kw_cm2) const {
    return model_->laser(intensity_kw_cm2, 0.0).rabi();
}

ContractedSystem::Blocks ContractedSystem::blocks(double detuning_cm, double gamma) const {
    Blocks b;
    b.detuning_cm = detuning_cm;
    b.gamma = gamma;
    const cd shift(units::cm_to_hartree(detuning_cm), -0.5 * gamma);
    b.diagonal.resize(size());
    for (int i = 0; i < ng_; ++i) b.diagonal[i] = ground_energies_[i];
    for (int j = 0; j < ne_; ++j) b.diagonal[ng_ + j] = excited_energies_[j] + shift;
    const int nf = eliminated_size();
    b.resolvent.resize(nf);
    for (int j = 0; j < nf; ++j) b.resolvent[j] = 1.0 / (far_energies_[j] + shift);
    if (nf > 0) {
        // two real products instead of one complex one
        const Eigen::MatrixXd re = far_coupling_ * b.resolvent.real().asDiagonal() * far_coupling_.transpose();
        const Eigen::MatrixXd im = far_coupling_ * b.resolvent.imag().asDiagonal() * far_coupling_.transpose();
        b.elimination.resize(ng_, ng_);
        b.elimination.real() = -re;
        b.elimination.imag() = -im;
    } else {
        b.elimination = Eigen::MatrixXcd::Zero(ng_, ng_);
    }
    return b;
}

Eigen::MatrixXcd ContractedSystem::hamiltonian(const Blocks& b, double rabi) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size(), size());
    h.diagonal() = b.diagonal;
    h.topLeftCorner(ng_, ng_) += (rabi * rabi) * b.elimination;
    h.topRightCorner(ng_, ne_) = (rabi * coupling_).cast<cd>();
    h.bottomLeftCorner(ne_, ng_) = (rabi * coupling_.transpose()).cast<cd>();
    return h;
}

Eigen::MatrixXcd ContractedSystem::hamiltonian(double intensity_kw_cm2, double detuning_cm, double gamma) const {
    return hamiltonian(blocks(detuning_cm, gamma), rabi(intensity_kw_cm2));
}

double ContractedSystem::excited_population(const Blocks& b, double rabi, const Eigen::VectorXcd& psi) const {
    double p = psi.tail(ne_).squaredNorm();
    if (eliminated_size() > 0 && rabi != 0.0) {
        const Eigen::VectorXcd proj = far_coupling_.transpose().cast<cd>() * psi.head(ng_);
        p += rabi * rabi * b.resolvent.cwiseProduct(proj).squaredNorm();
    }
    return p;
}

// --- Chebyshev --------------------------------------------------------------

ChebyshevPropagator::ChebyshevPropagator(double e_lo, double e_hi, double dt, double tolerance,
                                         int max_order)
    : dt_(dt) {
    if (!(e_hi > e_lo)) throw ConfigError("Chebyshev interval must have positive width");
    center_ = 0.5 * (e_hi + e_lo);
    radius_ = 0.5 * (e_hi - e_lo);
    const double alpha = radius_ * dt;
    if (alpha > max_order) {
        std::ostringstream msg;
        msg << "spectral bound overflow: radius x dt = " << alpha << " needs more than " << max_order
            << " Chebyshev terms";
        throw NumericalError(msg.str());
    }
    for (int k = 0;; ++k) {
        const double j = boost::math::cyl_bessel_j(k, alpha);
        coef_.push_back(k == 0 ? j : 2.0 * j);
        if (k > alpha && std::abs(coef_.back()) < tolerance) break;
        if (k > max_order) throw NumericalError("Chebyshev series did not reach the truncation threshold");
    }
}

ChebyshevPropagator ChebyshevPropagator::for_matrix(const Eigen::MatrixXcd& h, double dt, double padding,
                                                    double tolerance) {
    auto [lo, hi] = linalg::hermitian_bounds(h);
    double pad = padding * (hi - lo);
    if (pad == 0.0) pad = padding * std::max(1e-300, std::abs(hi)) + 1e-300;
    return ChebyshevPropagator(lo - pad, hi + pad, dt, tolerance);
}

Eigen::VectorXcd ChebyshevPropagator::apply(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi) const {
    auto scaled = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
        return (h * v - center_ * v) / radius_;
    };
    Eigen::VectorXcd prev = psi;
    Eigen::VectorXcd result = coef_[0] * psi;
    if (coef_.size() > 1) {
        Eigen::VectorXcd cur = scaled(psi);
        cd phase(0.0, -1.0);
        result += coef_[1] * phase * cur;
        for (std::size_t k = 2; k < coef_.size(); ++k) {
            Eigen::VectorXcd next = 2.0 * scaled(cur) - prev;
            phase *= cd(0.0, -1.0);
            result += (coef_[k] * phase) * next;
            prev.swap(cur);
            cur.swap(next);
        }
    }
    return std::exp(cd(0.0, -center_ * dt_)) * result;
}

Eigen::VectorXcd reference_propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double dt) {
    if (h.rows() > 1024) throw ConfigError("dense reference propagation is limited to dimension 1024");
    if (dt == 0.0) return psi;
    auto eig = linalg::general_eigen(h, false);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(eig.right);
    Eigen::VectorXcd c = lu.solve(psi);
    for (int k = 0; k < c.size(); ++k) c[k] *= std::exp(cd(0.0, -1.0) * eig.values[k] * dt);
    return eig.right * c;
}

// --- propagation ------------------------------------------------------------

DynamicsResult propagate(const ContractedSystem& sys, const Eigen::VectorXcd& psi0, const RampProtocol& protocol,
                         double gamma, const PropagationOptions& opt) {
    protocol.validate();
    if (psi0.size() != sys.size()) throw ConfigError("initial state does not match the contracted basis");
    if (gamma < 0.0) throw ConfigError("decay rate must be nonnegative");

    DynamicsResult res;
    Eigen::VectorXcd psi = psi0;
    ContractedSystem::Blocks blk = sys.blocks(protocol.segments.front().detuning_from, gamma);
    auto refresh = [&](double detuning) {
        if (detuning != blk.detuning_cm) blk = sys.blocks(detuning, gamma);
    };
    const int lb = sys.last_bound();

    auto record = [&](double t_ns, double p_abs, double loss) {
        Sample s;
        s.t_ns = t_ns;
        s.norm = psi.squaredNorm();
        s.p_exc = s.norm > 0.0 ? p_abs / s.norm : 0.0;
        s.p_mol = lb >= 0 ? std::norm(psi[lb]) : 0.0;
        s.loss = loss;
        for (int k = 0; k < opt.trap_states; ++k) {
            const int i = sys.trap(k);
            s.trap.push_back(i >= 0 ? std::norm(psi[i]) : 0.0);
        }
        res.samples.push_back(std::move(s));
    };

    {
        auto [i0, d0] = protocol.at(0.0);
        refresh(d0);
        record(0.0, sys.excited_population(blk, sys.rabi(i0), psi), 0.0);
    }

    // Fourth-order commutator-free Magnus step: two exponentials with
    // Hamiltonians mixed from the Gauss-Legendre nodes. Loss uses composite
    // Simpson over step pairs with p_exc at the exact step-end parameters.
    const double gauss = std::sqrt(3.0) / 6.0;
    const double a1 = 0.5 + 2.0 * gauss, a2 = 0.5 - 2.0 * gauss;  // weights per half step
    double t0 = 0.0;
    double loss = 0.0;
    long step = 0;
    double f_prev = gamma * sys.excited_population(blk, sys.rabi(protocol.at(0.0).first), psi);
    for (const auto& seg : protocol.segments) {
        long nsteps =
            std::max<long>(protocol.min_steps, static_cast<long>(std::ceil(seg.duration_ns / protocol.dt_ns - 1e-9)));
        nsteps += nsteps % 2;
        const double dt_ns = seg.duration_ns / nsteps;
        const double dt = units::ns_to_au(dt_ns);

        // spectral bounds of the Hermitian part over the whole segment
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        const int nb = std::max(2, opt.bound_samples);
        for (int k = 0; k < nb; ++k) {
            auto [ik, dk] = segment_at(seg, static_cast<double>(k) / (nb - 1), protocol.mode);
            auto [l, h] = linalg::hermitian_bounds(sys.hamiltonian(sys.blocks(dk, gamma), sys.rabi(ik)));
            lo = std::min(lo, l);
            hi = std::max(hi, h);
        }
        // a1 H1 + a2 H2 with a2 < 0 can leave [lo, hi] by -a2 (hi - lo) on each side
        const double widen = -a2 * (hi - lo);
        const double pad = opt.padding * std::max(hi - lo, 1e-300);
        const ChebyshevPropagator prop(lo - widen - pad, hi + widen + pad, 0.5 * dt, opt.tolerance);
        res.max_order = std::max(res.max_order, prop.order());

        auto hamiltonian_at = [&](double f) {
            auto [i, d] = segment_at(seg, f, protocol.mode);
            refresh(d);
            return sys.hamiltonian(blk, sys.rabi(i));
        };
        auto checked = [&](const Eigen::VectorXcd& next, double before, long n) {
            const double after = next.squaredNorm();
            if (gamma == 0.0 && std::abs(after - before) > opt.norm_check) {
                std::ostringstream msg;
                msg << "step rejected: norm changed by " << after - before << " at t = " << t0 + (n + 1) * dt_ns
                    << " ns with no decay; reduce dt_ns";
                throw NumericalError(msg.str());
            }
        };

        double pair_loss = loss;  // loss at the start of the current step pair
        double f_pair = f_prev;
        std::optional<std::size_t> pending;  // sample at mid pair waiting for its loss
        for (long n = 0; n < nsteps; ++n) {
            const Eigen::MatrixXcd h1 = hamiltonian_at((n + 0.5 - gauss) / nsteps);
            const Eigen::MatrixXcd h2 = hamiltonian_at((n + 0.5 + gauss) / nsteps);
            const double before = psi.squaredNorm();
            Eigen::VectorXcd next = prop.apply(a1 * h1 + a2 * h2, psi);
            next = prop.apply(a2 * h1 + a1 * h2, next);
            checked(next, before, n);
            psi = std::move(next);

            auto [ie, de] = segment_at(seg, static_cast<double>(n + 1) / nsteps, protocol.mode);
            refresh(de);
            const double p_end = sys.excited_population(blk, sys.rabi(ie), psi);
            const double f_end = gamma * p_end;
            ++step;
            const bool want = step % std::max(1, opt.record_stride) == 0 || n + 1 == nsteps;
            if (n % 2 == 0) {
                f_prev = f_end;
                if (want) {
                    record(t0 + (n + 1) * dt_ns, p_end, 0.0);
                    pending = res.samples.size() - 1;
                }
            } else {
                const double f_mid = f_prev;
                loss = pair_loss + dt / 3.0 * (f_pair + 4.0 * f_mid + f_end);
                if (pending) {
                    res.samples[*pending].loss = pair_loss + dt / 12.0 * (5.0 * f_pair + 8.0 * f_mid - f_end);
                    pending.reset();
                }
                if (want) record(t0 + (n + 1) * dt_ns, p_end, loss);
                pair_loss = loss;
                f_pair = f_end;
                f_prev = f_end;
            }
        }
        t0 += seg.duration_ns;
    }
    res.steps = step;
    res.state = psi;
    res.norm = psi.squaredNorm();
    res.p_mol = lb >= 0 ? std::norm(psi[lb]) : 0.0;
    res.loss = loss;
    return res;
}

namespace {

std::vector<DressedState> eigenstates(const Eigen::MatrixXcd& h) {
    auto eig = linalg::general_eigen(h, false);
    std::vector<DressedState> out(eig.values.size());
    for (int k = 0; k < eig.values.size(); ++k) {
        out[k].energy = eig.values[k];
        out[k].vector = eig.right.col(k).normalized();
        out[k].label = k;
    }
    return out;
}

}  // namespace

TrackedPath track_along(const ContractedSystem& sys, const RampProtocol& protocol, double gamma,
                        const Eigen::VectorXcd& start, int points_per_segment) {
    protocol.validate();
    TrackedPath path;
    Eigen::VectorXcd prev = start.normalized();
    bool first = true;
    for (const auto& seg : protocol.segments) {
        for (int k = first ? 0 : 1; k <= points_per_segment; ++k) {
            auto [i, d] = segment_at(seg, static_cast<double>(k) / points_per_segment, protocol.mode);
            const auto states = eigenstates(sys.hamiltonian(i, d, gamma));
            const TrackResult r = track_state(prev, states);
            path.min_overlap = std::min(path.min_overlap, r.overlap);
            prev = r.vector;
            path.energy = states[r.index].energy;
        }
        first = false;
    }
    path.state = prev;
    return path;
}

std::vector<AdiabaticityEntry> adiabaticity_study(const ContractedSystem& sys, const RampProtocol& protocol,
                                                  const std::vector<double>& ramp_ns, double gamma,
                                                  const Eigen::VectorXcd& psi0, int workers,
                                                  const PropagationOptions& opt) {
    for (std::size_t i = 1; i < ramp_ns.size(); ++i)
        if (!(ramp_ns[i] > ramp_ns[i - 1])) throw ConfigError("ramp times must increase");
    const TrackedPath target = track_along(sys, protocol, gamma, psi0);
    std::vector<AdiabaticityEntry> out(ramp_ns.size());
    parallel_for(ramp_ns.size(), workers, [&](std::size_t k) {
        PropagationOptions o = opt;
        o.record_stride = std::numeric_limits<int>::max();
        const auto r = propagate(sys, psi0, protocol.scaled_to(ramp_ns[k]), gamma, o);
        out[k].ramp_ns = ramp_ns[k];
        out[k].fidelity = std::norm(target.state.dot(r.state));
        out[k].p_mol = r.p_mol;
        out[k].loss = 1.0 - r.norm;
    });
    return out;
}

SwitchoffResult switchoff_study(const ContractedSystem& sys, const RampProtocol& protocol,
                                const std::vector<double>& t_switch_ns, double gamma,
                                const Eigen::VectorXcd& psi0, int workers, const PropagationOptions& opt) {
    SwitchoffResult out;
    out.ramp = propagate(sys, psi0, protocol, gamma, opt);
    out.entries.resize(t_switch_ns.size());
    const auto& last = protocol.segments.back();
    parallel_for(t_switch_ns.size(), workers, [&](std::size_t k) {
        const double ts = t_switch_ns[k];
        if (ts < 0.0) throw ConfigError("switch-off time must be nonnegative");
        auto& e = out.entries[k];
        e.t_switch_ns = ts;
        if (ts == 0.0) {
            e.p_mol = out.ramp.p_mol;
            e.norm = out.ramp.norm;
            return;
        }
        RampProtocol off;
        off.mode = protocol.mode;
        off.min_steps = protocol.min_steps;
        off.dt_ns = std::min(protocol.dt_ns, ts / protocol.min_steps);
        off.segments.push_back({ts, last.intensity_to, 0.0, last.detuning_to, last.detuning_to});
        PropagationOptions o = opt;
        o.record_stride = std::numeric_limits<int>::max();
        const auto r = propagate(sys, out.ramp.state, off, gamma, o);
        e.p_mol = r.p_mol;
        e.norm = r.norm;
    });
    return out;
}

}  // namespace ofr
