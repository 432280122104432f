#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ofr/model.hpp"

namespace ofr {

struct ScanCell {
    double intensity_kw_cm2 = 0.0;
    double detuning_cm = 0.0;
    double e_bind_cm = 0.0;  // last bound dressed level below the dressed threshold
    double p_mol = 0.0;
    double p_exc = 0.0;
    int n_bound = 0;
    bool ok = true;
    std::string error;
};

// Detuning is the slow index: cells[d * intensities.size() + i].
struct ResonanceMap {
    std::vector<double> intensities;
    std::vector<double> detunings;
    std::vector<ScanCell> cells;
};

// Full dressed diagonalization at one (I, Delta). A state counts as bound
// when it lies more than hbar w / 2 below the dressed threshold and is not
// excited-dominated.
ScanCell evaluate_cell(const Model& model, double intensity_kw_cm2, double detuning_cm, double gamma);

int count_bound(const Model& model, double intensity_kw_cm2, double detuning_cm, double gamma);

// Cells are independent; a failing cell is recorded and the scan goes on.
ResonanceMap scan_map(const Model& model, const std::vector<double>& intensities,
                      const std::vector<double>& detunings, double gamma, int workers = 1);

// Positions where `counts` step up along `axis`, bisected with `count_at`
// down to resolution x (axis range). A jump other than +1 inside one
// sampling interval is an aliasing error.
std::vector<double> find_resonances(std::span<const double> axis, std::span<const int> counts,
                                    const std::function<int(double)>& count_at,
                                    double resolution = 1e-3);

std::vector<double> linspace(double from, double to, int count);

}  // namespace ofr
