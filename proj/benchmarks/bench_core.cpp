#include <benchmark/benchmark.h>

#include <ofr/config.hpp>
#include <ofr/dynamics.hpp>
#include <ofr/grid.hpp>
#include <ofr/spectrum.hpp>

using namespace ofr;

namespace {

const Model& tight_model() {
    static const Model m(load_preset("tight").model);
    return m;
}

void BM_KineticUniform(benchmark::State& st) {
    const auto g = build_uniform_grid(9.5, 800.0, static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kinetic_operator(g, units::rb87_pair_mass));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_KineticUniform)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_KineticMapped(benchmark::State& st) {
    const auto& g = tight_model().grid();
    for (auto _ : st) benchmark::DoNotOptimize(kinetic_operator(g, units::rb87_pair_mass));
}
BENCHMARK(BM_KineticMapped)->Unit(benchmark::kMillisecond);

// full dressed diagonalization on the packaged tight grid (2N = 580)
void BM_DressedSpectrum(benchmark::State& st) {
    const auto& m = tight_model();
    const auto sys = m.dressed(4.0, 4.15, m.gamma());
    for (auto _ : st) benchmark::DoNotOptimize(diagonalize(sys));
}
BENCHMARK(BM_DressedSpectrum)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ChebyshevStep(benchmark::State& st) {
    const auto& m = tight_model();
    const RunConfig c = load_preset("tight");
    const auto p = c.protocol.resolve(m.t_vib_ns());
    auto [lo, hi] = p.detuning_range();
    const ContractedSystem sys(m, lo, hi, c.dynamics.contraction);
    const Eigen::MatrixXcd h = sys.hamiltonian(4.0, 4.15, m.gamma());
    const auto prop = ChebyshevPropagator::for_matrix(h, units::ns_to_au(p.dt_ns));
    Eigen::VectorXcd psi = sys.basis_state(sys.trap(0));
    for (auto _ : st) {
        psi = prop.apply(h, psi);
        benchmark::DoNotOptimize(psi.data());
    }
    st.counters["order"] = prop.order();
    st.counters["dim"] = sys.size();
}
BENCHMARK(BM_ChebyshevStep)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
