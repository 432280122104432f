#include <doctest.h>

#include <cmath>
#include <random>

#include <ofr/error.hpp>
#include <ofr/units.hpp>

using namespace ofr;

TEST_SUITE("units") {

TEST_CASE("round trips stay within 1e-12") {
    const char* groups[][6] = {
        {"hartree", "cm-1", "Hz", "kHz", "MHz", "GHz"},
        {"a0", "m", "nm", "a0", "m", "nm"},
        {"au_time", "s", "ns", "us", "s", "ns"},
    };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mag(-6.0, 6.0);
    for (auto& g : groups)
        for (const char* a : g)
            for (const char* b : g)
                for (int k = 0; k < 20; ++k) {
                    const double x = std::pow(10.0, mag(rng));
                    const double back = units::convert(units::convert(x, a, b), b, a);
                    CHECK(std::abs(back / x - 1.0) < 1e-12);
                }
    CHECK(units::convert(units::convert(3.5, "kW/cm2", "W/cm2"), "W/cm2", "kW/cm2") == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(units::convert(units::convert(2.0, "au_field", "V/m"), "V/m", "au_field") == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("known conversions") {
    CHECK(units::convert(1.0, "hartree", "cm-1") == doctest::Approx(219474.6313632));
    CHECK(units::convert(1.0, "cm-1", "MHz") == doctest::Approx(29979.2458).epsilon(1e-9));
    CHECK(units::convert(1.0, "nm", "a0") == doctest::Approx(18.8972612).epsilon(1e-8));
    CHECK(units::ns_to_au(1.0) == doctest::Approx(41341373.3).epsilon(1e-9));
    CHECK(units::convert(1.0, "kW/cm2", "W/cm2") == 1000.0);
}

TEST_CASE("mismatched or unknown tags") {
    CHECK_THROWS_AS(units::convert(1.0, "hartree", "a0"), ConfigError);
    CHECK_THROWS_AS(units::convert(1.0, "furlong", "a0"), ConfigError);
    CHECK_THROWS_AS(units::dimension_of("parsec"), ConfigError);
}

TEST_CASE("field from intensity") {
    // E0 = sqrt(2 I / (eps0 c)) with I in W/m^2
    const double i_w_cm2 = 4000.0;
    const double e_si = std::sqrt(2.0 * i_w_cm2 * 1e4 / (8.8541878128e-12 * 299792458.0));
    CHECK(units::intensity_to_field(i_w_cm2) == doctest::Approx(e_si / 5.14220674763e11).epsilon(1e-12));
    CHECK(units::intensity_to_field(0.0) == 0.0);
    CHECK_THROWS_AS(units::intensity_to_field(-1.0), ConfigError);
}

TEST_CASE("decay rate and trap frequency") {
    const double tau = 26.24e-9 / 2.4188843265857e-17;
    CHECK(units::decay_rate(26.24) == doctest::Approx(std::sqrt(2.0) / tau).epsilon(1e-12));
    CHECK_THROWS_AS(units::decay_rate(0.0), ConfigError);
    // hbar w as E/h in MHz equals nu in MHz
    CHECK(units::hartree_to_mhz(units::trap_omega(250.0)) == doctest::Approx(0.25).epsilon(1e-10));
}

}
