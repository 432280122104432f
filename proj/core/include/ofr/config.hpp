#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ofr/dynamics.hpp"
#include "ofr/model.hpp"

namespace ofr {

// A segment whose duration may be given in units of T_vib; resolved once the
// model is built.
struct SegmentSpec {
    Segment segment;
    double duration_t_vib = 0.0;  // > 0 overrides segment.duration_ns
};

struct ProtocolSpec {
    std::vector<SegmentSpec> segments;
    RampMode mode = RampMode::field;
    double dt_ns = 0.025;
    int min_steps = 100;
    std::vector<double> switch_off_ns{0.0, 1.0, 5.0, 10.0};
    std::vector<double> ramp_t_vib{1.0, 2.0, 3.0, 5.0, 8.0};
    double t_vib_ns = 0.0;  // > 0 replaces the computed T_vib

    double vib_period(double computed_ns) const { return t_vib_ns > 0.0 ? t_vib_ns : computed_ns; }
    // `computed_ns` is the model's T_vib; the override above wins when set
    RampProtocol resolve(double computed_ns) const;
};

struct DynamicsSettings {
    ContractionOptions contraction{};
    PropagationOptions propagation{};
    bool decay = true;
};

struct ScanSettings {
    std::vector<double> intensities{0.0};
    std::vector<double> detunings{4.0};
    bool decay = true;
};

struct RunConfig {
    std::string name;
    ModelConfig model;
    double intensity_kw_cm2 = 0.0;  // static laser point for dump-hamiltonian
    double detuning_cm = 4.0;
    ProtocolSpec protocol;
    DynamicsSettings dynamics;
    ScanSettings scan;
    std::string canonical;  // normalized JSON text of the accepted input
};

// Parses a JSON document. Quantities carry their unit in the key suffix
// (`detuning_cm-1`, `duration_ns`, `nu_kHz`, ...); any unit of the right
// dimension is accepted. Unknown keys and bad tags raise ConfigError with
// the field path.
RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

// packaged configs: tight, loose, fig2, fig3
std::vector<std::string> preset_names();
std::string_view preset_text(std::string_view name);
RunConfig load_preset(std::string_view name, const std::vector<std::string>& overrides = {});

}  // namespace ofr
