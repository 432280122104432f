#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ofr/error.hpp"
#include "ofr/parallel.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ofr: optical Feshbach resonance spectra and ramp dynamics"};
    app.require_subcommand(1);
    ofr::cli::Options opt;
    opt.workers = ofr::default_workers();

    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config, "JSON run config");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--set", opt.overrides, "override a config entry, key.path=value")->take_all();
        sub->add_option("--out", opt.out, "output directory")->required();
        sub->add_option("--workers", opt.workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
    };

    struct Entry {
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {"scan", "dressed spectra over an (I, Delta) grid"},
        {"dynamics", "propagate the configured ramp protocol"},
        {"adiabaticity", "tracked-state fidelity over the ramp-time family"},
        {"switchoff", "final P_mol for each switch-off time"},
        {"dump-potential", "V(R) of both channels as CSV"},
        {"dump-grid", "grid nodes and Jacobian as CSV"},
        {"dump-hamiltonian", "block norms and asymptote diagnostics"},
    };
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        common(sub, true);
        if (std::string(e.name) == "adiabaticity")
            sub->add_flag("--with-decay", opt.with_decay, "keep spontaneous emission on");
    }
    auto* rep = app.add_subcommand("reproduce", "run a packaged analog of a figure or table");
    rep->add_option("figure", opt.figure, "fig2 | fig3 | fig4 | table2")->required();
    common(rep, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        ofr::cli::run_command(command, opt);
    } catch (const ofr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ofr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ofr::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
