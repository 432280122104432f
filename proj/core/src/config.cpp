#include "ofr/config.hpp"

#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ofr/error.hpp"
#include "ofr_presets.hpp"

namespace ofr {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// unit tag as written in a key; '/' is not allowed there, so kW_cm2 -> kW/cm2
std::optional<std::string> unit_from_key_tag(const std::string& tag) {
    for (std::string t : {tag, [&] {
             std::string s = tag;
             for (auto& c : s)
                 if (c == '_') c = '/';
             return s;
         }()}) {
        try {
            units::dimension_of(t);
            return t;
        } catch (const ConfigError&) {
        }
    }
    return std::nullopt;
}

class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    std::string where() const { return path_.empty() ? "<root>" : path_; }
    std::string field(const std::string& key) const { return join(path_, key); }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json* raw(const std::string& key) {
        if (!j_.contains(key)) return nullptr;
        used_.insert(key);
        return &j_.at(key);
    }

    double number(const std::string& key, double def) {
        const json* v = raw(key);
        if (!v) return def;
        return as_number(*v, field(key));
    }

    int integer(const std::string& key, int def) {
        const json* v = raw(key);
        if (!v) return def;
        if (!v->is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
        return v->get<int>();
    }

    bool boolean(const std::string& key, bool def) {
        const json* v = raw(key);
        if (!v) return def;
        if (!v->is_boolean()) throw ConfigError(field(key) + ": expected true or false");
        return v->get<bool>();
    }

    std::string text(const std::string& key, const std::string& def) {
        const json* v = raw(key);
        if (!v) return def;
        if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
        return v->get<std::string>();
    }

    struct Quantity {
        std::string key;
        std::string tag;  // unit tag or one of the special tags
        const json* value = nullptr;
    };

    // Looks up `name_<tag>`. Special tags (e.g. t_vib) are passed through;
    // other tags must be units of dimension `dim`.
    std::optional<Quantity> quantity(const std::string& name, units::Dimension dim,
                                     std::initializer_list<std::string_view> special = {}) {
        std::optional<Quantity> found;
        const std::string prefix = name + "_";
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            const std::string& key = it.key();
            if (key.rfind(prefix, 0) != 0) continue;
            const std::string tag = key.substr(prefix.size());
            std::string resolved;
            bool ok = false;
            for (auto s : special)
                if (tag == s) {
                    resolved = tag;
                    ok = true;
                }
            if (!ok) {
                auto unit = unit_from_key_tag(tag);
                if (!unit) throw ConfigError(field(key) + ": unknown unit tag '" + tag + "'");
                if (units::dimension_of(*unit) != dim)
                    throw ConfigError(field(key) + ": unit '" + tag + "' has the wrong dimension");
                resolved = *unit;
            }
            if (found) throw ConfigError(field(key) + ": '" + name + "' given twice");
            found = Quantity{key, resolved, &it.value()};
            used_.insert(key);
        }
        return found;
    }

    double scalar(const std::string& name, units::Dimension dim, std::string_view internal, double def) {
        auto q = quantity(name, dim);
        if (!q) return def;
        return units::convert(as_number(*q->value, field(q->key)), q->tag, internal);
    }

    Section child(const std::string& key) {
        const json* v = raw(key);
        static const json empty = json::object();
        return Section(v ? *v : empty, field(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown key");
    }

    static double as_number(const json& v, const std::string& where) {
        if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
        if (!v.is_number()) throw ConfigError(where + ": expected a number");
        return v.get<double>();
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::vector<double> converted_list(const json& v, const std::string& where, const std::string& from,
                                   std::string_view to) {
    std::vector<double> out;
    auto conv = [&](double x) { return from == to ? x : units::convert(x, from, to); };
    if (v.is_number()) {
        out.push_back(conv(v.get<double>()));
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(conv(Section::as_number(v[i], where + "[" + std::to_string(i) + "]")));
    } else if (v.is_object()) {
        Section s(v, where);
        const double a = s.number("from", 0.0), b = s.number("to", 0.0);
        const int n = s.integer("count", 1);
        s.finish();
        if (n < 1) throw ConfigError(where + ".count: must be positive");
        for (int i = 0; i < n; ++i) out.push_back(conv(n == 1 ? a : a + (b - a) * i / (n - 1)));
        if (n > 1) out.back() = conv(b);
    } else {
        throw ConfigError(where + ": expected a number, a list or {from, to, count}");
    }
    return out;
}

void read_channel(Section& s, ChannelParams& p) {
    p.depth = s.scalar("depth", units::Dimension::energy, "hartree", p.depth);
    p.r_eq = s.scalar("R_e", units::Dimension::length, "a0", p.r_eq);
    p.alpha = s.number("alpha_a0-1", p.alpha);
    p.wall_scale = s.number("wall_scale", p.wall_scale);
    p.c3 = s.number("C3_au", p.c3);
    p.c6 = s.number("C6_au", p.c6);
    p.c8 = s.number("C8_au", p.c8);
}

void set_path(json& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' must look like key.path=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::exception&) {
        value = text;
    }
    json* node = &root;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("override '" + assignment + "' has an empty path component");
        json* next;
        if (node->is_array()) {
            std::size_t idx;
            try {
                idx = std::stoul(part);
            } catch (const std::exception&) {
                throw ConfigError("override '" + assignment + "': '" + part + "' is not an index");
            }
            if (idx >= node->size()) throw ConfigError("override '" + assignment + "': index out of range");
            next = &(*node)[idx];
        } else {
            if (!node->is_object()) *node = json::object();
            next = &(*node)[part];
        }
        if (dot == std::string::npos) {
            *next = value;
            return;
        }
        node = next;
        start = dot + 1;
    }
}

RunConfig from_json(const json& root) {
    RunConfig c;
    Section top(root, "");
    c.name = top.text("name", "run");

    {
        Section pot = top.child("potentials");
        {
            Section g = pot.child("ground");
            read_channel(g, c.model.ground);
            c.model.ground_interaction = g.boolean("interaction", true);
            if (auto q = g.quantity("a_target", units::Dimension::length)) {
                if (q->value->is_null())
                    c.model.a_target.reset();
                else
                    c.model.a_target =
                        units::convert(Section::as_number(*q->value, g.field(q->key)), q->tag, "a0");
            }
            g.finish();
        }
        {
            Section e = pot.child("excited");
            read_channel(e, c.model.excited);
            c.model.excited_channel = e.boolean("enabled", true);
            e.finish();
        }
        c.model.mass = pot.scalar("reduced_mass", units::Dimension::mass, "me", c.model.mass);
        pot.finish();
    }
    {
        Section t = top.child("trap");
        const double nu = t.scalar("nu", units::Dimension::energy, "kHz", c.model.trap.nu_khz);
        if (nu < 0.0) throw ConfigError("trap.nu: must be nonnegative");
        c.model.trap.nu_khz = nu;
        t.finish();
    }
    {
        Section g = top.child("grid");
        auto& gs = c.model.grid;
        const std::string type = g.text("type", "mapped");
        if (type == "mapped")
            gs.kind = RadialGrid::Kind::mapped;
        else if (type == "uniform")
            gs.kind = RadialGrid::Kind::uniform;
        else
            throw ConfigError("grid.type: expected 'mapped' or 'uniform', got '" + type + "'");
        gs.points = g.integer("points", gs.points);
        gs.r_min = g.scalar("R_min", units::Dimension::length, "a0", gs.r_min);
        gs.r_max = g.scalar("R_max", units::Dimension::length, "a0", gs.r_max);
        gs.beta = g.number("beta", gs.beta);
        if (auto q = g.quantity("E_max", units::Dimension::energy, {"hbar_omega"})) {
            const double v = Section::as_number(*q->value, g.field(q->key));
            if (q->tag == "hbar_omega")
                gs.e_max_hw = v;
            else
                gs.e_max = units::convert(v, q->tag, "hartree");
        }
        gs.envelope_detuning_cm =
            g.scalar("envelope_detuning", units::Dimension::energy, "cm-1", gs.envelope_detuning_cm);
        gs.tail_energy = g.scalar("tail_energy", units::Dimension::energy, "hartree", gs.tail_energy);
        if (gs.kind == RadialGrid::Kind::uniform && gs.points < 10)
            throw ConfigError("grid.points: uniform grids need at least 10 points");
        g.finish();
    }
    {
        Section l = top.child("laser");
        c.model.dipole_au = l.number("dipole_au", c.model.dipole_au);
        c.model.tau_at_ns = l.scalar("tau_at", units::Dimension::time, "ns", c.model.tau_at_ns);
        c.intensity_kw_cm2 = l.scalar("intensity", units::Dimension::intensity, "kW/cm2", c.intensity_kw_cm2);
        c.detuning_cm = l.scalar("detuning", units::Dimension::energy, "cm-1", c.detuning_cm);
        if (c.intensity_kw_cm2 < 0.0) throw ConfigError("laser.intensity: must be nonnegative");
        l.finish();
    }
    {
        Section p = top.child("protocol");
        auto& ps = c.protocol;
        const std::string mode = p.text("intensity_ramp", "field");
        if (mode == "field")
            ps.mode = RampMode::field;
        else if (mode == "intensity")
            ps.mode = RampMode::intensity;
        else
            throw ConfigError("protocol.intensity_ramp: expected 'field' or 'intensity'");
        ps.dt_ns = p.scalar("dt", units::Dimension::time, "ns", ps.dt_ns);
        ps.min_steps = p.integer("min_steps", ps.min_steps);
        ps.t_vib_ns = p.scalar("T_vib", units::Dimension::time, "ns", ps.t_vib_ns);
        if (ps.t_vib_ns < 0.0) throw ConfigError("protocol.T_vib: must be positive");
        if (auto q = p.quantity("switch_off", units::Dimension::time))
            ps.switch_off_ns = converted_list(*q->value, p.field(q->key), q->tag, "ns");
        if (const json* v = p.raw("ramp_t_vib")) ps.ramp_t_vib = converted_list(*v, p.field("ramp_t_vib"), "", "");
        if (const json* segs = p.raw("segments")) {
            if (!segs->is_array()) throw ConfigError(p.field("segments") + ": expected a list");
            ps.segments.clear();
            for (std::size_t i = 0; i < segs->size(); ++i) {
                Section s((*segs)[i], p.field("segments") + "[" + std::to_string(i) + "]");
                SegmentSpec spec;
                auto d = s.quantity("duration", units::Dimension::time, {"t_vib"});
                if (!d) throw ConfigError(s.where() + ": duration is required");
                const double dv = Section::as_number(*d->value, s.field(d->key));
                if (d->tag == "t_vib")
                    spec.duration_t_vib = dv;
                else
                    spec.segment.duration_ns = units::convert(dv, d->tag, "ns");
                if (!(dv > 0.0)) throw ConfigError(s.field(d->key) + ": must be positive");
                auto pair = [&](const std::string& name, units::Dimension dim, std::string_view internal,
                                double& from, double& to) {
                    auto q = s.quantity(name, dim);
                    if (!q) throw ConfigError(s.where() + ": " + name + " is required");
                    auto v = converted_list(*q->value, s.field(q->key), q->tag, internal);
                    if (v.size() == 1) v.push_back(v[0]);
                    if (v.size() != 2) throw ConfigError(s.field(q->key) + ": expected [from, to]");
                    from = v[0];
                    to = v[1];
                };
                pair("intensity", units::Dimension::intensity, "kW/cm2", spec.segment.intensity_from,
                     spec.segment.intensity_to);
                pair("detuning", units::Dimension::energy, "cm-1", spec.segment.detuning_from,
                     spec.segment.detuning_to);
                if (spec.segment.intensity_from < 0.0 || spec.segment.intensity_to < 0.0)
                    throw ConfigError(s.where() + ": intensity must be nonnegative");
                s.finish();
                ps.segments.push_back(spec);
            }
        }
        p.finish();
    }
    {
        Section d = top.child("dynamics");
        auto& ds = c.dynamics;
        ds.contraction.ground_window =
            d.scalar("ground_window", units::Dimension::energy, "hartree", ds.contraction.ground_window);
        ds.contraction.excited_window =
            d.scalar("excited_window", units::Dimension::energy, "hartree", ds.contraction.excited_window);
        ds.contraction.eliminate = d.boolean("eliminate", ds.contraction.eliminate);
        ds.propagation.trap_states = d.integer("trap_states", ds.propagation.trap_states);
        ds.propagation.record_stride = d.integer("record_stride", ds.propagation.record_stride);
        ds.decay = d.boolean("decay", ds.decay);
        d.finish();
    }
    {
        Section s = top.child("scan");
        if (auto q = s.quantity("intensity", units::Dimension::intensity))
            c.scan.intensities = converted_list(*q->value, s.field(q->key), q->tag, "kW/cm2");
        if (auto q = s.quantity("detuning", units::Dimension::energy))
            c.scan.detunings = converted_list(*q->value, s.field(q->key), q->tag, "cm-1");
        c.scan.decay = s.boolean("decay", c.scan.decay);
        s.finish();
    }
    top.finish();
    c.canonical = root.dump(2) + "\n";
    return c;
}

}  // namespace

RampProtocol ProtocolSpec::resolve(double computed_ns) const {
    const double t_vib = vib_period(computed_ns);
    RampProtocol p;
    p.mode = mode;
    p.dt_ns = dt_ns;
    p.min_steps = min_steps;
    for (const auto& s : segments) {
        Segment seg = s.segment;
        if (s.duration_t_vib > 0.0) seg.duration_ns = s.duration_t_vib * t_vib;
        p.segments.push_back(seg);
    }
    p.validate();
    return p;
}

RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    for (const auto& o : overrides) set_path(root, o);
    return from_json(root);
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : presets::kPresets) out.emplace_back(p.name);
    return out;
}

std::string_view preset_text(std::string_view name) {
    for (const auto& p : presets::kPresets)
        if (p.name == name) return p.text;
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

RunConfig load_preset(std::string_view name, const std::vector<std::string>& overrides) {
    return parse_config(preset_text(name), overrides);
}

}  // namespace ofr
