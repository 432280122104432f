#include "ofr/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "ofr/error.hpp"
#include "ofr/units.hpp"

namespace ofr {

namespace {

double find_root(const std::function<double(double)>& f, double a, double b) {
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, tol, iters);
    return 0.5 * (lo + hi);
}

}  // namespace

ChannelPotential::ChannelPotential(const ChannelParams& p) : p_(p) {
    if (!(p.depth > 0.0) || !(p.r_eq > 0.0) || !(p.alpha > 0.0) || !(p.wall_scale > 0.0))
        throw ConfigError("Morse depth, R_e, alpha and wall scale must be positive");
    if (p.c3 == 0.0 && p.c6 == 0.0 && p.c8 == 0.0) {
        r_match_ = std::numeric_limits<double>::infinity();
        return;
    }
    // outermost point where the Morse slope comes back down to the tail slope
    const double a = p.alpha * p.wall_scale;
    const double r_peak = p.r_eq + std::log(2.0) / a;
    const double r_end = r_peak + 60.0 / a;
    auto f = [this](double r) { return morse_derivative(r) - tail_derivative(r); };
    const int n = 20000;
    double found = -1.0;
    double prev_r = r_peak, prev_f = f(r_peak);
    for (int i = 1; i <= n; ++i) {
        double r = r_peak + (r_end - r_peak) * i / n;
        double fr = f(r);
        if ((prev_f > 0.0) != (fr > 0.0)) found = find_root(f, prev_r, r);
        prev_r = r;
        prev_f = fr;
    }
    if (found < 0.0)
        throw ConfigError("Morse core and dispersion tail slopes never cross; "
                          "increase the depth or R_e");
    r_match_ = found;
    shift_ = tail(r_match_) - morse(r_match_);
}

double ChannelPotential::morse(double r) const {
    double e = std::exp(-p_.alpha * p_.wall_scale * (r - p_.r_eq));
    return p_.depth * (1.0 - e) * (1.0 - e) - p_.depth;
}

double ChannelPotential::morse_derivative(double r) const {
    const double a = p_.alpha * p_.wall_scale;
    double e = std::exp(-a * (r - p_.r_eq));
    return 2.0 * p_.depth * a * e * (1.0 - e);
}

double ChannelPotential::tail(double r) const {
    double r3 = r * r * r;
    double r6 = r3 * r3;
    return -p_.c3 / r3 - p_.c6 / r6 - p_.c8 / (r6 * r * r);
}

double ChannelPotential::tail_derivative(double r) const {
    double r2 = r * r;
    double r4 = r2 * r2;
    double r7 = r4 * r2 * r;
    return 3.0 * p_.c3 / r4 + 6.0 * p_.c6 / r7 + 8.0 * p_.c8 / (r7 * r2);
}

double ChannelPotential::operator()(double r) const {
    if (!(r > 0.0)) throw ConfigError("potential evaluated at nonpositive R");
    return r < r_match_ ? morse(r) + shift_ : tail(r);
}

double ChannelPotential::derivative(double r) const {
    if (!(r > 0.0)) throw ConfigError("potential evaluated at nonpositive R");
    return r < r_match_ ? morse_derivative(r) : tail_derivative(r);
}

double ChannelPotential::r_min() const { return p_.r_eq; }

std::function<double(double)> ChannelPotential::as_function() const {
    return [p = *this](double r) { return p(r); };
}

double trap_potential(const TrapConfig& trap, double r, int sign, double mass) {
    double w = units::trap_omega(trap.nu_khz);
    return sign * 0.5 * mass * w * w * r * r;
}

namespace {

struct NumerovRun {
    double a = 0.0;
    int nodes = 0;
};

// Outward Numerov for u'' = 2m V u at zero energy.
NumerovRun numerov_zero_energy(const std::function<double(double)>& v, double v_min,
                               ScatteringOptions opt) {
    const double m = opt.mass > 0.0 ? opt.mass : units::rb87_pair_mass;
    double h = opt.step;
    if (h <= 0.0) {
        double lam = v_min < 0.0 ? 2.0 * std::numbers::pi / std::sqrt(-2.0 * m * v_min) : 1.0;
        h = std::min(0.01, lam / 40.0);
    }
    const double c = h * h / 12.0;
    double r0 = opt.r_start;
    auto f = [&](double r) { return 2.0 * m * v(r); };

    double um = 0.0, u = 1e-30;
    double fm = f(r0), f0 = f(r0 + h);
    double r = r0 + h;
    int nodes = 0;
    double target = opt.r_far;
    double last_a = std::numeric_limits<double>::quiet_NaN();
    for (;;) {
        double rp = r + h;
        double fp = f(rp);
        double up = ((2.0 + 10.0 * c * f0) * u - (1.0 - c * fm) * um) / (1.0 - c * fp);
        if ((up > 0.0) != (u > 0.0) && up != 0.0) ++nodes;
        um = u;
        u = up;
        fm = f0;
        f0 = fp;
        r = rp;
        if (std::abs(u) > 1e100) {
            u *= 1e-100;
            um *= 1e-100;
        }
        if (r >= target) {
            // derivative at the previous node from the symmetric difference
            // would need one more point; step once more
            double rn = r + h;
            double fn = f(rn);
            double un = ((2.0 + 10.0 * c * f0) * u - (1.0 - c * fm) * um) / (1.0 - c * fn);
            double du = (un - um) / (2.0 * h);
            double a = r - u / du;
            if (!std::isnan(last_a) && std::abs(a - last_a) < opt.tolerance) {
                int extra = (a > r) ? 1 : 0;  // asymptotic node not reached yet
                return {a, nodes + extra};
            }
            last_a = a;
            target *= 2.0;
            if (target > opt.r_far_max) {
                std::ostringstream msg;
                msg << "scattering length not stable under doubling of R_far (last a = " << a
                    << " a0 at R = " << r << ")";
                throw NumericalError(msg.str());
            }
        }
    }
}

double auto_start(const std::function<double(double)>& v, double r_inner, double m) {
    // walk inward from the well until the wall tunnelling integral is large
    double h = 0.005;
    double r = r_inner;
    while (r > h && v(r) < 0.0) r -= h;
    double integral = 0.0;
    while (r > 2.0 * h && integral < 40.0) {
        double vr = v(r);
        if (vr > 0.0) integral += std::sqrt(2.0 * m * vr) * h;
        r -= h;
    }
    return r;
}

}  // namespace

double scattering_length(const std::function<double(double)>& v, double v_min,
                         const ScatteringOptions& opt) {
    if (!(opt.r_start > 0.0)) throw ConfigError("scattering length needs r_start > 0");
    return numerov_zero_energy(v, v_min, opt).a;
}

double scattering_length(const ChannelPotential& p, ScatteringOptions opt) {
    const double m = opt.mass > 0.0 ? opt.mass : units::rb87_pair_mass;
    opt.mass = m;
    if (opt.r_start <= 0.0) opt.r_start = auto_start(p.as_function(), p.r_min(), m);
    return numerov_zero_energy(p.as_function(), p(p.r_min()), opt).a;
}

int count_bound_states(const ChannelPotential& p, ScatteringOptions opt) {
    const double m = opt.mass > 0.0 ? opt.mass : units::rb87_pair_mass;
    opt.mass = m;
    if (opt.r_start <= 0.0) opt.r_start = auto_start(p.as_function(), p.r_min(), m);
    return numerov_zero_energy(p.as_function(), p(p.r_min()), opt).nodes;
}

ChannelPotential calibrate_wall(const ChannelPotential& p, double a_target,
                                const CalibrationOptions& opt) {
    if (!(opt.lambda_hi > opt.lambda_lo) || opt.samples < 2)
        throw ConfigError("calibration bracket must be increasing with >= 2 samples");
    auto with_scale = [&](double s) {
        ChannelParams q = p.params();
        q.wall_scale = s;
        return ChannelPotential(q);
    };
    auto a_of = [&](double s) {
        try {
            return scattering_length(with_scale(s), opt.scattering);
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    const double current = p.params().wall_scale;
    if (std::abs(a_of(current) - a_target) <= opt.tolerance) return p;

    std::vector<double> s(opt.samples), g(opt.samples);
    for (int i = 0; i < opt.samples; ++i) {
        s[i] = opt.lambda_lo + (opt.lambda_hi - opt.lambda_lo) * i / (opt.samples - 1);
        g[i] = a_of(s[i]) - a_target;
    }
    double best = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i + 1 < opt.samples; ++i) {
        if (std::isnan(g[i]) || std::isnan(g[i + 1]) || (g[i] > 0.0) == (g[i + 1] > 0.0)) continue;
        auto fn = [&](double x) {
            double v = a_of(x) - a_target;
            return std::isnan(v) ? 1e30 : v;
        };
        double root;
        try {
            root = find_root(fn, s[i], s[i + 1]);
        } catch (const std::exception&) {
            continue;
        }
        // a pole also flips the sign; only accept genuine zeros
        if (std::abs(fn(root)) > opt.tolerance) continue;
        if (std::isnan(best) || std::abs(root - current) < std::abs(best - current)) best = root;
    }
    if (std::isnan(best)) {
        std::ostringstream msg;
        msg << "no wall scale in [" << opt.lambda_lo << ", " << opt.lambda_hi
            << "] reaches a = " << a_target << " a0; samples (lambda, a):";
        for (int i = 0; i < opt.samples; ++i) msg << " (" << s[i] << ", " << g[i] + a_target << ")";
        throw NumericalError(msg.str());
    }
    return with_scale(best);
}

}  // namespace ofr
