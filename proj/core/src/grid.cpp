#include "ofr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ofr/error.hpp"

namespace ofr {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kFinePoints = 200001;
}  // namespace

RadialGrid build_uniform_grid(double r_min, double r_max, int points) {
    if (!(r_min >= 0.0) || !(r_max > r_min)) throw ConfigError("grid bounds must satisfy 0 <= R_min < R_max");
    if (points < 10) throw ConfigError("uniform grid needs at least 8 interior nodes");
    RadialGrid g;
    g.kind = RadialGrid::Kind::uniform;
    g.r_min = r_min;
    g.r_max = r_max;
    const int m = points - 1;
    const int n = points - 2;
    g.dx = (r_max - r_min) / m;
    g.r_ext.resize(n + 2);
    for (int i = 0; i <= m; ++i) g.r_ext[i] = r_min + g.dx * i;
    g.r_ext[m] = r_max;
    g.r = g.r_ext.segment(1, n);
    g.jacobian = Eigen::VectorXd::Ones(n);
    g.j_ext = Eigen::VectorXd::Ones(n + 2);
    return g;
}

RadialGrid build_mapped_grid(const std::function<double(double)>& local_momentum, double beta,
                             double r_min, double r_max) {
    if (!(r_min >= 0.0) || !(r_max > r_min)) throw ConfigError("grid bounds must satisfy 0 <= R_min < R_max");
    if (!(beta > 0.0) || beta > 1.0) throw ConfigError("mapping parameter beta must lie in (0, 1]");

    std::vector<double> rf(kFinePoints), dens(kFinePoints), cum(kFinePoints);
    for (int i = 0; i < kFinePoints; ++i) {
        rf[i] = r_min + (r_max - r_min) * i / (kFinePoints - 1);
        double p = local_momentum(rf[i]);
        if (!(p > 0.0) || !std::isfinite(p))
            throw ConfigError("envelope lies above E_max at R = " + std::to_string(rf[i]) + " a0");
        dens[i] = p / (beta * kPi);
    }
    cum[0] = 0.0;
    for (int i = 1; i < kFinePoints; ++i)
        cum[i] = cum[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * (rf[i] - rf[i - 1]);
    const double total = cum.back();
    const int n = std::max(8, static_cast<int>(std::ceil(total)));
    const int m = n + 1;

    RadialGrid g;
    g.kind = RadialGrid::Kind::mapped;
    g.r_min = r_min;
    g.r_max = r_max;
    g.beta = beta;
    g.dx = 1.0;
    g.r_ext.resize(n + 2);
    g.j_ext.resize(n + 2);
    const double per_step = total / m;
    std::size_t pos = 0;
    for (int k = 0; k <= m; ++k) {
        double target = per_step * k;
        while (pos + 1 < cum.size() - 1 && cum[pos + 1] < target) ++pos;
        double t = (target - cum[pos]) / (cum[pos + 1] - cum[pos]);
        double r = rf[pos] + t * (rf[pos + 1] - rf[pos]);
        if (k == 0) r = r_min;
        if (k == m) r = r_max;
        g.r_ext[k] = r;
        g.j_ext[k] = per_step * beta * kPi / local_momentum(r);
    }
    g.r = g.r_ext.segment(1, n);
    g.jacobian = g.j_ext.segment(1, n);
    return g;
}

Eigen::MatrixXd kinetic_operator(const RadialGrid& grid, double mass) {
    const int n = grid.size();
    const int m = n + 1;
    Eigen::MatrixXd t(n, n);
    if (grid.kind == RadialGrid::Kind::uniform) {
        // closed-form sine DVR
        const double length = grid.r_max - grid.r_min;
        const double pref = kPi * kPi / (2.0 * length * length) / (2.0 * mass);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (i == j) {
                    double s = std::sin(kPi * i / m);
                    t(i - 1, j - 1) = pref * ((2.0 * m * m + 1.0) / 3.0 - 1.0 / (s * s));
                } else {
                    double a = std::sin(kPi * (i - j) / (2.0 * m));
                    double b = std::sin(kPi * (i + j) / (2.0 * m));
                    double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
                    t(i - 1, j - 1) = pref * sign * (1.0 / (a * a) - 1.0 / (b * b));
                }
            }
        }
    } else {
        // derivative of the sine interpolant at all m+1 points, endpoints included
        Eigen::MatrixXd c(n + 2, n), s(n, n);
        for (int k = 1; k <= n; ++k) {
            for (int i = 0; i <= m; ++i) c(i, k - 1) = std::cos(kPi * i * k / m) * (kPi * k / m);
            for (int j = 1; j <= n; ++j) s(j - 1, k - 1) = std::sin(kPi * j * k / m);
        }
        Eigen::MatrixXd d = c * ((2.0 / m) * s);
        Eigen::VectorXd inv_sqrt_j = grid.jacobian.array().rsqrt();
        Eigen::MatrixXd a = d * inv_sqrt_j.asDiagonal();
        Eigen::VectorXd w = grid.j_ext.cwiseInverse();
        w[0] *= 0.5;
        w[m] *= 0.5;
        t = (a.transpose() * w.asDiagonal() * a) / (2.0 * mass);
    }
    Eigen::MatrixXd sym = 0.5 * (t + t.transpose());
    return sym;
}

}  // namespace ofr
