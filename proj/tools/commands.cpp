#include "commands.hpp"

#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "ofr/config.hpp"
#include "ofr/dynamics.hpp"
#include "ofr/error.hpp"
#include "ofr/model.hpp"
#include "ofr/scan.hpp"
#include "output.hpp"

namespace ofr::cli {

namespace {

using ordered = nlohmann::ordered_json;

const std::vector<std::string> kScanHeader{"intensity_kW_cm2", "detuning_cm-1", "E_bind_cm-1",
                                           "P_mol",            "p_exc",         "N_bound"};

ordered number_json(double x) {
    if (std::isnan(x) || std::isinf(x)) return nullptr;
    return x;
}

// scan.csv plus the resonance list for every detuning row
void write_scan(RunContext& ctx, const Model& model, const RunConfig& cfg, int workers,
                const std::string& csv_name) {
    const double gamma = cfg.scan.decay ? model.gamma() : 0.0;
    const ResonanceMap map = scan_map(model, cfg.scan.intensities, cfg.scan.detunings, gamma, workers);
    CsvWriter csv(ctx.file(csv_name), kScanHeader);
    int failed = 0;
    for (const auto& c : map.cells) {
        csv.row({c.intensity_kw_cm2, c.detuning_cm, c.e_bind_cm, c.p_mol, c.p_exc,
                 static_cast<double>(c.n_bound)});
        if (!c.ok) {
            ++failed;
            ctx.task("cell I=" + format_number(c.intensity_kw_cm2) + " D=" + format_number(c.detuning_cm),
                     "failed", c.error);
        }
    }
    csv.close();
    ctx.task("scan " + std::to_string(map.cells.size()) + " cells", failed ? "failed" : "ok",
             failed ? std::to_string(failed) + " cells failed" : "");

    ordered res = ordered::array();
    const std::size_t ni = map.intensities.size();
    for (std::size_t d = 0; d < map.detunings.size(); ++d) {
        ordered row;
        row["detuning_cm-1"] = map.detunings[d];
        std::vector<int> counts;
        bool ok = true;
        for (std::size_t i = 0; i < ni; ++i) {
            const auto& c = map.cells[d * ni + i];
            ok = ok && c.ok;
            counts.push_back(c.n_bound);
        }
        try {
            if (!ok) throw NumericalError("row has failed cells");
            const double det = map.detunings[d];
            auto found = find_resonances(map.intensities, counts, [&](double intensity) {
                return count_bound(model, intensity, det, gamma);
            });
            row["resonances_kW_cm2"] = found;
            ctx.task("resonances at " + format_number(det) + " cm-1", "ok");
        } catch (const Error& e) {
            row["resonances_kW_cm2"] = nullptr;
            row["error"] = e.what();
            ctx.task("resonances at " + format_number(map.detunings[d]) + " cm-1", "failed", e.what());
        }
        res.push_back(row);
    }
    ctx.write_text("resonances.json", res.dump(2) + "\n");
}

void write_series(RunContext& ctx, const std::string& name, const DynamicsResult& r, int trap_states) {
    std::vector<std::string> header{"t_ns", "norm", "p_exc", "P_mol"};
    for (int k = 0; k < trap_states; ++k) header.push_back("pop_trap_" + std::to_string(k));
    header.push_back("loss");
    CsvWriter csv(ctx.file(name), header);
    for (const auto& s : r.samples) {
        std::vector<double> row{s.t_ns, s.norm, s.p_exc, s.p_mol};
        row.insert(row.end(), s.trap.begin(), s.trap.end());
        row.push_back(s.loss);
        csv.row(row);
    }
    csv.close();
}

ordered dynamics_summary(const RunConfig& cfg, const Model& model, const ContractedSystem& sys,
                         const DynamicsResult& r) {
    ordered s;
    s["name"] = cfg.name;
    s["nu_kHz"] = cfg.model.trap.nu_khz;
    s["t_vib_computed_ns"] = model.t_vib_ns();
    s["t_vib_ns"] = cfg.protocol.vib_period(model.t_vib_ns());
    s["grid_points"] = model.grid().size();
    s["basis_ground"] = sys.ground_size();
    s["basis_excited"] = sys.excited_size();
    s["basis_eliminated"] = sys.eliminated_size();
    s["steps"] = r.steps;
    s["chebyshev_order"] = r.max_order;
    s["P_mol"] = r.p_mol;
    s["norm"] = r.norm;
    s["loss_integral"] = r.loss;
    return s;
}

void cmd_scan(RunContext& ctx, const RunConfig& cfg, const Options& opt) {
    Model model(cfg.model);
    write_scan(ctx, model, cfg, opt.workers, "scan.csv");
}

void cmd_dynamics(RunContext& ctx, const RunConfig& cfg, const std::string& csv_name, ordered* summary) {
    Model model(cfg.model);
    const RampProtocol protocol = cfg.protocol.resolve(model.t_vib_ns());
    auto [lo, hi] = protocol.detuning_range();
    ContractedSystem sys(model, lo, hi, cfg.dynamics.contraction);
    const double gamma = cfg.dynamics.decay ? model.gamma() : 0.0;
    const auto r = propagate(sys, sys.basis_state(sys.trap(0)), protocol, gamma, cfg.dynamics.propagation);
    write_series(ctx, csv_name, r, cfg.dynamics.propagation.trap_states);
    ctx.task("propagate " + cfg.name, "ok");
    if (summary) (*summary)[cfg.name] = dynamics_summary(cfg, model, sys, r);
}

void cmd_adiabaticity(RunContext& ctx, const RunConfig& cfg, const Options& opt) {
    Model model(cfg.model);
    const double tv = cfg.protocol.vib_period(model.t_vib_ns());
    RampProtocol protocol = cfg.protocol.resolve(tv);
    auto [lo, hi] = protocol.detuning_range();
    ContractedSystem sys(model, lo, hi, cfg.dynamics.contraction);
    std::vector<double> ramps;
    for (double m : cfg.protocol.ramp_t_vib) ramps.push_back(m * tv);
    const double gamma = opt.with_decay ? model.gamma() : 0.0;
    const auto psi0 = sys.basis_state(sys.trap(0));
    const auto out = adiabaticity_study(sys, protocol, ramps, gamma, psi0, opt.workers, cfg.dynamics.propagation);
    CsvWriter csv(ctx.file("adiabaticity.csv"), {"ramp_t_vib", "ramp_ns", "fidelity", "P_mol", "loss"});
    for (std::size_t k = 0; k < out.size(); ++k)
        csv.row({cfg.protocol.ramp_t_vib[k], out[k].ramp_ns, out[k].fidelity, out[k].p_mol, out[k].loss});
    csv.close();
    ctx.task("adiabaticity " + std::to_string(out.size()) + " ramps", "ok");
}

std::vector<SwitchoffEntry> switchoff_entries(const RunConfig& cfg, int workers) {
    Model model(cfg.model);
    RampProtocol protocol = cfg.protocol.resolve(model.t_vib_ns());
    auto [lo, hi] = protocol.detuning_range();
    ContractedSystem sys(model, lo, hi, cfg.dynamics.contraction);
    const double gamma = cfg.dynamics.decay ? model.gamma() : 0.0;
    PropagationOptions po = cfg.dynamics.propagation;
    po.record_stride = 1 << 30;
    return switchoff_study(sys, protocol, cfg.protocol.switch_off_ns, gamma, sys.basis_state(sys.trap(0)), workers,
                           po)
        .entries;
}

void cmd_switchoff(RunContext& ctx, const RunConfig& cfg, const Options& opt) {
    const auto entries = switchoff_entries(cfg, opt.workers);
    CsvWriter csv(ctx.file("switchoff.csv"), {"T_switch_ns", "P_mol", "norm"});
    for (const auto& e : entries) csv.row({e.t_switch_ns, e.p_mol, e.norm});
    csv.close();
    ctx.task("switch-off " + std::to_string(entries.size()) + " times", "ok");
}

void cmd_dump_potential(RunContext& ctx, const RunConfig& cfg) {
    Model model(cfg.model);
    const int n = 2000;
    const double a = model.grid().r_min, b = model.grid().r_max;
    auto dump = [&](const std::string& name, const std::function<double(double)>& v) {
        CsvWriter csv(ctx.file(name), {"R_a0", "V_cm-1"});
        for (int i = 0; i < n; ++i) {
            const double r = a + (b - a) * i / (n - 1);
            csv.row({r, units::hartree_to_cm(v(r))});
        }
        csv.close();
    };
    if (cfg.model.ground_interaction) dump("potential_ground.csv", model.ground().as_function());
    if (cfg.model.excited_channel) dump("potential_excited.csv", model.excited().as_function());
    ctx.task("dump potentials", "ok");
}

void cmd_dump_grid(RunContext& ctx, const RunConfig& cfg) {
    Model model(cfg.model);
    const auto& g = model.grid();
    CsvWriter csv(ctx.file("grid.csv"), {"index", "R_a0", "jacobian", "weight_a0"});
    for (int i = 0; i < g.size(); ++i) csv.row({double(i), g.r[i], g.jacobian[i], g.weight(i)});
    csv.close();
    ctx.task("dump grid (" + std::to_string(g.size()) + " points)", "ok");
}

void cmd_dump_hamiltonian(RunContext& ctx, const RunConfig& cfg) {
    Model model(cfg.model);
    const DressedSystem sys = model.dressed(cfg.intensity_kw_cm2, cfg.detuning_cm, 0.0);
    const int n = sys.channel_size();
    const auto& m = sys.matrix;
    const double radius = m.cwiseAbs().rowwise().sum().maxCoeff();
    const Eigen::MatrixXd t = kinetic_operator(model.grid(), model.mass());
    const double r_last = model.grid().r[n - 1];
    const double expected = units::cm_to_hartree(cfg.detuning_cm) + model.excited()(r_last) -
                            trap_potential(model.config().trap, r_last, 1, model.mass());
    const double got = m(2 * n - 1, 2 * n - 1).real() - t(n - 1, n - 1);
    ordered j;
    j["channel_size"] = n;
    j["intensity_kW_cm2"] = cfg.intensity_kw_cm2;
    j["detuning_cm-1"] = cfg.detuning_cm;
    j["rabi_hartree"] = sys.laser.rabi();
    j["norm_ground_block"] = m.topLeftCorner(n, n).norm();
    j["norm_excited_block"] = m.bottomRightCorner(n, n).norm();
    j["norm_coupling_block"] = m.topRightCorner(n, n).norm();
    j["hermiticity_defect_rel"] = (m - m.adjoint()).cwiseAbs().maxCoeff() / radius;
    j["excited_asymptote_last_node_hartree"] = got;
    j["excited_asymptote_expected_hartree"] = expected;
    j["excited_asymptote_error_hartree"] = number_json(got - expected);
    j["threshold_dressed_cm-1"] = units::hartree_to_cm(dressed_threshold(sys.laser));
    ctx.write_text("hamiltonian.json", j.dump(2) + "\n");
    ctx.task("dump hamiltonian", "ok");
}

void reproduce(RunContext& ctx, const std::string& figure, const Options& opt,
               const std::map<std::string, RunConfig>& cfgs) {
    if (figure == "fig2") {
        const auto& cfg = cfgs.at("fig2");
        Model model(cfg.model);
        write_scan(ctx, model, cfg, opt.workers, "staircase.csv");
    } else if (figure == "fig3") {
        const auto& cfg = cfgs.at("fig3");
        Model model(cfg.model);
        write_scan(ctx, model, cfg, opt.workers, "map.csv");
    } else if (figure == "fig4") {
        ordered summary;
        cmd_dynamics(ctx, cfgs.at("tight"), "fig4_tight.csv", &summary);
        cmd_dynamics(ctx, cfgs.at("loose"), "fig4_loose.csv", &summary);
        ctx.write_text("fig4_summary.json", summary.dump(2) + "\n");
    } else if (figure == "table2") {
        std::vector<std::string> header{"nu_kHz"};
        const auto& times = cfgs.at("tight").protocol.switch_off_ns;
        for (double t : times) header.push_back("P_" + format_number(t) + "ns");
        CsvWriter csv(ctx.file("table2.csv"), header);
        for (const char* name : {"tight", "loose"}) {
            const auto& cfg = cfgs.at(name);
            if (cfg.protocol.switch_off_ns != times)
                throw ConfigError("table2 needs the same switch-off times for both traps");
            const auto entries = switchoff_entries(cfg, opt.workers);
            std::vector<double> row{cfg.model.trap.nu_khz};
            for (const auto& e : entries) row.push_back(e.p_mol);
            csv.row(row);
            ctx.task(std::string("switch-off ") + name, "ok");
        }
        csv.close();
    } else {
        throw ConfigError("unknown figure id '" + figure + "' (expected fig2, fig3, fig4 or table2)");
    }
}

std::vector<std::string> figure_presets(const std::string& figure) {
    if (figure == "fig2") return {"fig2"};
    if (figure == "fig3") return {"fig3"};
    if (figure == "fig4" || figure == "table2") return {"tight", "loose"};
    throw ConfigError("unknown figure id '" + figure + "' (expected fig2, fig3, fig4 or table2)");
}

}  // namespace

void run_command(const std::string& command, const Options& opt) {
    if (command == "reproduce") {
        const auto names = figure_presets(opt.figure);
        std::map<std::string, RunConfig> cfgs;
        ordered stored;
        for (const auto& n : names) {
            cfgs[n] = load_preset(n, opt.overrides);
            stored[n] = ordered::parse(cfgs[n].canonical);
        }
        RunContext ctx(opt.out, "reproduce " + opt.figure, stored.dump(2) + "\n");
        try {
            reproduce(ctx, opt.figure, opt, cfgs);
        } catch (const Error& e) {
            ctx.finish("failed", e.what());
            throw;
        }
        ctx.finish("ok");
        return;
    }

    const RunConfig cfg = load_config(opt.config, opt.overrides);
    RunContext ctx(opt.out, command, cfg.canonical);
    try {
        if (command == "scan")
            cmd_scan(ctx, cfg, opt);
        else if (command == "dynamics")
            cmd_dynamics(ctx, cfg, "dynamics.csv", nullptr);
        else if (command == "adiabaticity")
            cmd_adiabaticity(ctx, cfg, opt);
        else if (command == "switchoff")
            cmd_switchoff(ctx, cfg, opt);
        else if (command == "dump-potential")
            cmd_dump_potential(ctx, cfg);
        else if (command == "dump-grid")
            cmd_dump_grid(ctx, cfg);
        else if (command == "dump-hamiltonian")
            cmd_dump_hamiltonian(ctx, cfg);
        else
            throw ConfigError("unknown command '" + command + "'");
    } catch (const Error& e) {
        ctx.finish("failed", e.what());
        throw;
    }
    ctx.finish("ok");
}

}  // namespace ofr::cli
