#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace ofr {

// Sine-basis radial grid. u vanishes at r_min and r_max; `r` holds the
// interior nodes only. `r_ext`/`j_ext` add the two boundary points, which the
// mapped kinetic operator needs.
struct RadialGrid {
    enum class Kind { uniform, mapped };
    Kind kind = Kind::uniform;
    double r_min = 0.0;
    double r_max = 0.0;
    double beta = 1.0;
    double e_max = 0.0;
    double dx = 1.0;           // spacing of the underlying uniform coordinate
    Eigen::VectorXd r;
    Eigen::VectorXd jacobian;  // dR/dx with unit spacing in x
    Eigen::VectorXd r_ext;
    Eigen::VectorXd j_ext;

    int size() const { return static_cast<int>(r.size()); }
    // quadrature weight of node i, so that u(R_i) * sqrt(weight) are the
    // vector components of a normalized state
    double weight(int i) const { return dx * jacobian[i]; }
};

// `points` counts both boundary points, so (3, 103, 101) has unit spacing and
// 99 interior nodes.
RadialGrid build_uniform_grid(double r_min, double r_max, int points);

// Node density proportional to local_momentum(R) / (beta pi), i.e. spacing
// beta * lambda_dB / 2.
RadialGrid build_mapped_grid(const std::function<double(double)>& local_momentum, double beta,
                             double r_min, double r_max);

// Symmetric kinetic-energy matrix for mass m.
Eigen::MatrixXd kinetic_operator(const RadialGrid& grid, double mass);

}  // namespace ofr
