#include "ofr/scan.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ofr/error.hpp"
#include "ofr/parallel.hpp"

namespace ofr {

namespace {

struct CellStates {
    DressedSpectrum spectrum;
    Classification classes;
    double threshold = 0.0;
};

CellStates solve_cell(const Model& model, double intensity, double detuning, double gamma) {
    CellStates c;
    const DressedSystem sys = model.dressed(intensity, detuning, gamma);
    const Eigen::VectorXd last = model.last_bound_vector();
    DiagonalizeOptions opt;
    opt.last_bound = &last;
    opt.grid = &model.grid();
    c.spectrum = diagonalize(sys, opt);
    c.threshold = dressed_threshold(sys.laser);
    c.classes = classify_states(c.spectrum.states, c.threshold, model.classification_tol());
    return c;
}

int bound_count(const Classification& c) {
    int n = 0;
    for (auto k : c.kinds) n += k == StateClass::molecular_bound;
    return n;
}

}  // namespace

ScanCell evaluate_cell(const Model& model, double intensity_kw_cm2, double detuning_cm, double gamma) {
    ScanCell cell;
    cell.intensity_kw_cm2 = intensity_kw_cm2;
    cell.detuning_cm = detuning_cm;
    const CellStates c = solve_cell(model, intensity_kw_cm2, detuning_cm, gamma);
    cell.n_bound = bound_count(c.classes);
    int top = -1;
    for (int i = 0; i < static_cast<int>(c.classes.kinds.size()); ++i)
        if (c.classes.kinds[i] == StateClass::molecular_bound) top = i;
    if (top < 0) {
        cell.e_bind_cm = std::numeric_limits<double>::quiet_NaN();
        return cell;
    }
    const auto& s = c.spectrum.states[top];
    cell.e_bind_cm = units::hartree_to_cm(s.energy.real() - c.threshold);
    cell.p_mol = s.p_mol;
    cell.p_exc = s.p_exc;
    return cell;
}

int count_bound(const Model& model, double intensity_kw_cm2, double detuning_cm, double gamma) {
    return bound_count(solve_cell(model, intensity_kw_cm2, detuning_cm, gamma).classes);
}

ResonanceMap scan_map(const Model& model, const std::vector<double>& intensities,
                      const std::vector<double>& detunings, double gamma, int workers) {
    if (intensities.empty() || detunings.empty()) throw ConfigError("scan ranges must be nonempty");
    ResonanceMap map;
    map.intensities = intensities;
    map.detunings = detunings;
    const std::size_t ni = intensities.size();
    map.cells.resize(ni * detunings.size());
    parallel_for(map.cells.size(), workers, [&](std::size_t k) {
        const double di = detunings[k / ni];
        const double ii = intensities[k % ni];
        try {
            map.cells[k] = evaluate_cell(model, ii, di, gamma);
        } catch (const Error& e) {
            ScanCell bad;
            bad.intensity_kw_cm2 = ii;
            bad.detuning_cm = di;
            bad.ok = false;
            bad.error = e.what();
            bad.e_bind_cm = bad.p_mol = bad.p_exc = std::numeric_limits<double>::quiet_NaN();
            bad.n_bound = -1;
            map.cells[k] = bad;
        }
    });
    return map;
}

std::vector<double> find_resonances(std::span<const double> axis, std::span<const int> counts,
                                    const std::function<int(double)>& count_at, double resolution) {
    std::vector<double> out;
    if (axis.size() != counts.size()) throw ConfigError("axis and counts differ in length");
    if (axis.size() < 2) return out;
    const double width = std::abs(axis.back() - axis.front()) * resolution;
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
        const int jump = counts[i + 1] - counts[i];
        if (jump == 0) continue;
        if (jump != 1) {
            std::ostringstream msg;
            msg << "bound-state count jumps by " << jump << " between " << axis[i] << " and "
                << axis[i + 1] << "; refine the sampling";
            throw NumericalError(msg.str());
        }
        double lo = axis[i], hi = axis[i + 1];
        while (std::abs(hi - lo) > width) {
            const double mid = 0.5 * (lo + hi);
            const int c = count_at(mid);
            if (c == counts[i])
                lo = mid;
            else if (c == counts[i + 1])
                hi = mid;
            else {
                std::ostringstream msg;
                msg << "non-monotone bound-state count near " << mid;
                throw NumericalError(msg.str());
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

std::vector<double> linspace(double from, double to, int count) {
    if (count < 1) throw ConfigError("sample count must be positive");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = from;
        return v;
    }
    for (int i = 0; i < count; ++i) v[i] = from + (to - from) * i / (count - 1);
    v.back() = to;
    return v;
}

}  // namespace ofr
