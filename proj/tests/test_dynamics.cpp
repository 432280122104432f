#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include <ofr/config.hpp>
#include <ofr/dynamics.hpp>
#include <ofr/error.hpp>
#include <ofr/linalg.hpp>
#include <ofr/spectrum.hpp>

#include "oracles.hpp"

using namespace ofr;

namespace {

struct Fixture {
    RunConfig cfg = load_preset("tight");
    Model model{cfg.model};
    RampProtocol protocol = cfg.protocol.resolve(model.t_vib_ns());
    ContractedSystem sys{model, protocol.detuning_range().first, protocol.detuning_range().second,
                         cfg.dynamics.contraction};
};

const Fixture& tight() {
    static const Fixture f;
    return f;
}

RampProtocol two_segments() {
    RampProtocol p;
    p.segments = {{10.0, 0.0, 4.0, 4.2, 4.2}, {10.0, 4.0, 4.0, 4.2, 4.1}};
    return p;
}

Eigen::MatrixXcd random_hamiltonian(int n, double gamma, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint()) * 1e-6;
    for (int i = n / 2; i < n; ++i) h(i, i) -= std::complex<double>(0.0, 0.5 * gamma);
    return h;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("protocol validation") {
    RampProtocol p;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = two_segments();
    CHECK_NOTHROW(p.validate());
    p.dt_ns = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = two_segments();
    p.segments[1].intensity_from = 3.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = two_segments();
    p.segments[0].duration_ns = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = two_segments();
    p.segments[0].intensity_from = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(two_segments().with_switch_off(-1.0), ConfigError);
    CHECK_THROWS_AS(two_segments().scaled_to(0.0), ConfigError);
}

TEST_CASE("protocol interpolation") {
    RampProtocol p = two_segments();
    CHECK(p.duration_ns() == 20.0);
    auto [i, d] = p.at(5.0);
    CHECK(i == doctest::Approx(1.0));  // linear in field: (0.5 * 2)^2
    CHECK(d == doctest::Approx(4.2));
    p.mode = RampMode::intensity;
    CHECK(p.at(5.0).first == doctest::Approx(2.0));
    CHECK(p.at(15.0).second == doctest::Approx(4.15));
    CHECK(p.at(20.0).second == doctest::Approx(4.1));
    const auto range = p.detuning_range();
    CHECK(range.first == doctest::Approx(4.1));
    CHECK(range.second == doctest::Approx(4.2));

    CHECK(p.with_switch_off(0.0).segments.size() == 2);
    const auto off = p.with_switch_off(5.0);
    REQUIRE(off.segments.size() == 3);
    CHECK(off.segments[2].intensity_from == 4.0);
    CHECK(off.segments[2].intensity_to == 0.0);
    CHECK(off.segments[2].detuning_to == 4.1);
    CHECK(p.scaled_to(3.0).duration_ns() == doctest::Approx(6.0));
}

TEST_CASE("Chebyshev step against the Pade exponential") {
    for (int n : {8, 64}) {
        const Eigen::MatrixXcd h = random_hamiltonian(n, 2e-7, 11u + n);
        const double dt = 5e5;
        const auto prop = ChebyshevPropagator::for_matrix(h, dt);
        std::mt19937 rng(3);
        std::normal_distribution<double> g;
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXcd psi(n);
            for (auto& x : psi) x = {g(rng), g(rng)};
            psi.normalize();
            const Eigen::VectorXcd ref = oracle::expm_apply(h, psi, dt);
            CHECK((prop.apply(h, psi) - ref).norm() < 1e-9);
            CHECK((reference_propagate(h, psi, dt) - ref).norm() < 1e-9);
        }
    }
}

TEST_CASE("zero time step is the identity") {
    const Eigen::MatrixXcd h = random_hamiltonian(16, 1e-7, 5);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(16).normalized();
    CHECK((reference_propagate(h, psi, 0.0) - psi).norm() == 0.0);
    const ChebyshevPropagator prop(-1e-5, 1e-5, 0.0);
    CHECK(prop.order() <= 1);
    CHECK((prop.apply(h, psi) - psi).norm() < 1e-15);
}

TEST_CASE("dense reference refuses large systems") {
    const Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(1025, 1025);
    const Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1025);
    CHECK_THROWS_AS(reference_propagate(h, psi, 1.0), ConfigError);
    CHECK_THROWS_AS(ChebyshevPropagator(1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("contracted basis") {
    const auto& f = tight();
    CHECK(f.sys.ground_size() > f.sys.last_bound());
    CHECK(f.sys.excited_size() >= 1);
    CHECK(f.sys.size() == f.sys.ground_size() + f.sys.excited_size());
    CHECK(f.sys.trap(0) == f.sys.last_bound() + 1);
    CHECK(f.sys.basis_state(f.sys.trap(0)).norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(f.sys.basis_state(f.sys.size()), ConfigError);
    const Eigen::MatrixXcd h = f.sys.hamiltonian(4.0, 4.15, 0.0);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * h.cwiseAbs().maxCoeff());
}

TEST_CASE("contracted levels near threshold match the full dressed spectrum") {
    const auto& f = tight();
    const double i = 4.0, d = 4.15, g = f.model.gamma();
    const auto full = diagonalize(f.model.dressed(i, d, g));
    const auto small = linalg::general_eigen(f.sys.hamiltonian(i, d, g));
    const double hw = f.model.hbar_omega();
    // every full level within a few hbar w of threshold has a contracted partner
    const double thr = dressed_threshold(f.model.laser(i, d));
    int checked = 0;
    for (const auto& s : full.states) {
        if (std::abs(s.energy.real() - thr) > 10.0 * hw || s.p_exc > 0.5) continue;
        double best = 1e300;
        for (const auto& e : small.values) best = std::min(best, std::abs(e - s.energy));
        CHECK(best < 1e-2 * hw);
        ++checked;
    }
    CHECK(checked >= 4);
}

TEST_CASE("norm deficit equals integrated loss") {
    const auto& f = tight();
    const RampProtocol p = f.protocol.scaled_to(20.0);
    const auto r = propagate(f.sys, f.sys.basis_state(f.sys.trap(0)), p, f.model.gamma());
    CHECK(r.norm < 1.0);
    CHECK(std::abs((1.0 - r.norm) - r.loss) < 1e-6);
    for (const auto& s : r.samples) CHECK(std::abs((1.0 - s.norm) - s.loss) < 1e-6);
}

TEST_CASE("no decay keeps the norm") {
    const auto& f = tight();
    const auto r = propagate(f.sys, f.sys.basis_state(f.sys.trap(0)), f.protocol.scaled_to(20.0), 0.0);
    for (const auto& s : r.samples) CHECK(std::abs(s.norm - 1.0) < 1e-10);
    CHECK(r.loss == 0.0);
}

TEST_CASE("halving the time step leaves observables unchanged") {
    const auto& f = tight();
    RampProtocol p = f.protocol.scaled_to(10.0);
    const auto psi0 = f.sys.basis_state(f.sys.trap(0));
    const auto a = propagate(f.sys, psi0, p, f.model.gamma());
    p.dt_ns *= 0.5;
    p.min_steps *= 2;
    const auto b = propagate(f.sys, psi0, p, f.model.gamma());
    CHECK(std::abs(a.p_mol - b.p_mol) < 1e-8);
    CHECK(std::abs(a.norm - b.norm) < 1e-8);
    CHECK(std::abs(a.loss - b.loss) < 1e-8);
}

TEST_CASE("switch-off study") {
    const auto& f = tight();
    const RampProtocol p = f.protocol.scaled_to(10.0);
    const auto psi0 = f.sys.basis_state(f.sys.trap(0));
    const auto a = switchoff_study(f.sys, p, {0.0, 1.0, 5.0}, f.model.gamma(), psi0, 1);
    const auto b = switchoff_study(f.sys, p, {0.0, 1.0, 5.0}, f.model.gamma(), psi0, 3);
    CHECK(a.entries[0].p_mol == a.ramp.p_mol);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::memcmp(&a.entries[k].p_mol, &b.entries[k].p_mol, sizeof(double)) == 0);
    CHECK_THROWS_AS(switchoff_study(f.sys, p, {-1.0}, f.model.gamma(), psi0), ConfigError);
}

TEST_CASE("adiabaticity study input checks") {
    const auto& f = tight();
    const auto psi0 = f.sys.basis_state(f.sys.trap(0));
    CHECK_THROWS_AS(adiabaticity_study(f.sys, f.protocol, {5.0, 5.0}, 0.0, psi0), ConfigError);
    CHECK_THROWS_AS(propagate(f.sys, Eigen::VectorXcd::Ones(3), f.protocol, 0.0), ConfigError);
    CHECK_THROWS_AS(propagate(f.sys, psi0, f.protocol, -1.0), ConfigError);
}

}
