#include "ofr/units.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ofr/error.hpp"

namespace ofr::units {

namespace {

struct Tag {
    std::string_view name;
    Dimension dim;
    double to_atomic;  // multiply a value in this unit to get atomic units
};

constexpr std::array<Tag, 18> kTags{{
    {"hartree", Dimension::energy, 1.0},
    {"cm-1", Dimension::energy, 1.0 / hartree_cm},
    {"Hz", Dimension::energy, 1.0 / hartree_hz},
    {"kHz", Dimension::energy, 1e3 / hartree_hz},
    {"MHz", Dimension::energy, 1e6 / hartree_hz},
    {"GHz", Dimension::energy, 1e9 / hartree_hz},
    {"a0", Dimension::length, 1.0},
    {"m", Dimension::length, 1.0 / bohr_m},
    {"nm", Dimension::length, 1e-9 / bohr_m},
    {"au_time", Dimension::time, 1.0},
    {"s", Dimension::time, 1.0 / time_s},
    {"ns", Dimension::time, 1e-9 / time_s},
    {"us", Dimension::time, 1e-6 / time_s},
    {"au_field", Dimension::field, 1.0},
    {"V/m", Dimension::field, 1.0 / field_v_m},
    {"me", Dimension::mass, 1.0},
    {"u", Dimension::mass, dalton_me},
    {"W/cm2", Dimension::intensity, 1.0},
}};

// intensity has no atomic unit of its own here; W/cm2 is the base
constexpr Tag kKilowatt{"kW/cm2", Dimension::intensity, 1e3};

const Tag& find(std::string_view name) {
    if (name == kKilowatt.name) return kKilowatt;
    for (const auto& t : kTags)
        if (t.name == name) return t;
    throw ConfigError("unknown unit tag '" + std::string(name) + "'");
}

}  // namespace

Dimension dimension_of(std::string_view tag) { return find(tag).dim; }

double convert(double value, std::string_view from, std::string_view to) {
    const Tag& a = find(from);
    const Tag& b = find(to);
    if (a.dim != b.dim)
        throw ConfigError("cannot convert '" + std::string(from) + "' to '" +
                          std::string(to) + "': dimension mismatch");
    if (a.name == b.name) return value;
    return value * a.to_atomic / b.to_atomic;
}

double intensity_to_field(double intensity_w_cm2) {
    if (intensity_w_cm2 < 0.0) throw ConfigError("negative intensity");
    const double si = intensity_w_cm2 * 1e4;  // W/m^2
    return std::sqrt(2.0 * si / (epsilon0 * light_speed)) / field_v_m;
}

double decay_rate(double tau_at_ns) {
    if (!(tau_at_ns > 0.0)) throw ConfigError("lifetime must be positive");
    if (std::isinf(tau_at_ns)) return 0.0;
    return std::numbers::sqrt2 / ns_to_au(tau_at_ns);
}

}  // namespace ofr::units
