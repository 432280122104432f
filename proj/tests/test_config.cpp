#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <string>

#include <ofr/config.hpp>
#include <ofr/error.hpp>

using namespace ofr;

namespace {

std::string error_of(std::string_view text, const std::vector<std::string>& overrides = {}) {
    try {
        parse_config(text, overrides);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("packaged configs load and match the files on disk") {
    const auto names = preset_names();
    for (const char* n : {"tight", "loose", "fig2", "fig3"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    for (const auto& n : names) {
        const auto a = load_preset(n);
        const auto b = load_config(std::filesystem::path(OFR_CONFIG_DIR) / (n + ".json"));
        CHECK(a.canonical == b.canonical);
        CHECK(a.name == n);
    }
    const auto t = load_preset("tight");
    CHECK(t.model.trap.nu_khz == 11800.0);
    CHECK(t.model.a_target.value() == 100.0);
    CHECK(t.protocol.segments.size() == 2);
    CHECK(t.protocol.segments[0].duration_t_vib == 2.0);
    CHECK(t.protocol.segments[1].segment.detuning_to == doctest::Approx(4.1));
    CHECK(t.scan.intensities.size() == 11);
    CHECK(load_preset("loose").model.trap.nu_khz == 1850.0);
    CHECK_THROWS_AS(load_preset("nope"), ConfigError);
}

TEST_CASE("units in key suffixes") {
    const auto c = parse_config(R"({
        "trap": {"nu_MHz": 0.25},
        "laser": {"detuning_GHz": 120.0, "intensity_W_cm2": 2500, "tau_at_us": 0.02624},
        "grid": {"R_min_nm": 0.5, "E_max_cm-1": 0.01},
        "potentials": {"ground": {"depth_cm-1": 219.4746313632}}
    })");
    CHECK(c.model.trap.nu_khz == doctest::Approx(250.0));
    CHECK(c.detuning_cm == doctest::Approx(120e9 / 29979245800.0).epsilon(1e-12));
    CHECK(c.intensity_kw_cm2 == doctest::Approx(2.5));
    CHECK(c.model.tau_at_ns == doctest::Approx(26.24));
    CHECK(c.model.grid.r_min == doctest::Approx(9.448630623));
    CHECK(c.model.grid.e_max == doctest::Approx(0.01 / 219474.6313632));
    CHECK(c.model.ground.depth == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("schema errors name the field") {
    CHECK(contains(error_of(R"({"trap": {"nu_kHz": 250, "depth": 3}})"), "trap.depth: unknown key"));
    CHECK(contains(error_of(R"({"bogus": 1})"), "bogus: unknown key"));
    CHECK(contains(error_of(R"({"trap": {"nu_furlong": 3}})"), "trap.nu_furlong: unknown unit tag 'furlong'"));
    CHECK(contains(error_of(R"({"trap": {"nu_a0": 3}})"), "wrong dimension"));
    CHECK(contains(error_of(R"({"trap": {"nu_kHz": 1, "nu_MHz": 1}})"), "given twice"));
    CHECK(contains(error_of(R"({"grid": {"type": "log"}})"), "grid.type"));
    CHECK(contains(error_of(R"({"grid": {"points": 1.5}})"), "grid.points: expected an integer"));
    CHECK(contains(error_of(R"({"protocol": {"segments": [{"intensity_kW_cm2": [0, 1], "detuning_cm-1": 4}]}})"),
                   "protocol.segments[0]: duration is required"));
    CHECK(contains(error_of(R"({"protocol": {"segments": [{"duration_ns": 5, "intensity_kW_cm2": [0, 1, 2], "detuning_cm-1": 4}]}})"),
                   "expected [from, to]"));
    CHECK(contains(error_of(R"({"laser": {"intensity_kW_cm2": -1}})"), "laser.intensity"));
    CHECK(contains(error_of("[1, 2]"), "root"));
    CHECK(contains(error_of("{"), "not valid JSON"));
}

TEST_CASE("overrides") {
    const auto t = std::string(preset_text("tight"));
    const auto c = parse_config(t, {"trap.nu_kHz=1850", "protocol.segments.1.detuning_cm-1=[4.2,4.05]",
                                    "name=custom", "potentials.ground.a_target_a0=null"});
    CHECK(c.model.trap.nu_khz == 1850.0);
    CHECK(c.protocol.segments[1].segment.detuning_to == doctest::Approx(4.05));
    CHECK(c.name == "custom");
    CHECK_FALSE(c.model.a_target.has_value());
    CHECK(c.protocol.resolve(33.5).segments[0].duration_ns == doctest::Approx(67.0));
    const auto fixed = parse_config(t, {"protocol.T_vib_us=0.05"});
    CHECK(fixed.protocol.resolve(33.5).segments[0].duration_ns == doctest::Approx(100.0));
    CHECK(contains(error_of(t, {"protocol.T_vib_ns=-1"}), "protocol.T_vib"));
    CHECK(contains(error_of(t, {"trap"}), "key.path=value"));
    CHECK(contains(error_of(t, {"protocol.segments.7.dt_ns=1"}), "index out of range"));
    CHECK(contains(error_of(t, {"trap.colour=3"}), "trap.colour: unknown key"));
}

TEST_CASE("scan ranges") {
    const auto c = parse_config(R"({"scan": {"intensity_kW_cm2": {"from": 0, "to": 2, "count": 5}, "detuning_cm-1": 4.1}})");
    CHECK(c.scan.intensities == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK(c.scan.detunings == std::vector<double>{4.1});
    CHECK(contains(error_of(R"({"scan": {"intensity_kW_cm2": {"from": 0, "count": 0}}})"), "count: must be positive"));
    CHECK(contains(error_of(R"({"scan": {"intensity_kW_cm2": "x"}})"), "scan.intensity_kW_cm2"));
}

TEST_CASE("identical input gives identical canonical text") {
    const auto a = load_preset("fig3");
    const auto b = parse_config(preset_text("fig3"));
    CHECK(a.canonical == b.canonical);
    CHECK_THROWS_AS(load_config("/nonexistent/x.json"), IoError);
}

}
