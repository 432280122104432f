#include <doctest.h>

#include <cmath>
#include <numbers>

#include <ofr/error.hpp>
#include <ofr/grid.hpp>
#include <ofr/linalg.hpp>
#include <ofr/model.hpp>

#include "oracles.hpp"

using namespace ofr;

TEST_SUITE("grid") {

TEST_CASE("uniform grid counts boundary points") {
    const auto g = build_uniform_grid(3.0, 103.0, 101);
    CHECK(g.size() == 99);
    CHECK(g.r[0] == doctest::Approx(4.0));
    CHECK(g.r[98] == doctest::Approx(102.0));
    CHECK(g.weight(10) == doctest::Approx(1.0));
    CHECK_THROWS_AS(build_uniform_grid(5.0, 5.0, 10), ConfigError);
    CHECK_THROWS_AS(build_uniform_grid(-1.0, 5.0, 10), ConfigError);
}

TEST_CASE("particle in a box is exact in the sine basis") {
    const double len = 50.0, m = 1000.0;
    const auto g = build_uniform_grid(0.0, len, 121);
    const auto e = linalg::symmetric_eigen(kinetic_operator(g, m), false);
    for (int n = 1; n <= 40; ++n) {
        const double exact = std::pow(n * std::numbers::pi / len, 2) / (2.0 * m);
        CHECK(e.values[n - 1] / exact == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("kinetic operator is symmetric and positive") {
    const auto u = build_uniform_grid(1.0, 40.0, 80);
    const auto m = build_mapped_grid([](double r) { return 2.0 + 20.0 / r; }, 0.7, 1.0, 40.0);
    for (const auto* g : {&u, &m}) {
        const Eigen::MatrixXd t = kinetic_operator(*g, 500.0);
        CHECK((t - t.transpose()).cwiseAbs().maxCoeff() < 1e-14 * t.cwiseAbs().maxCoeff());
        CHECK(linalg::symmetric_eigen(t, false).values.minCoeff() > 0.0);
    }
}

TEST_CASE("mapped spacing follows the local wavelength") {
    auto p = [](double r) { return 1.0 + 30.0 / r; };
    const double beta = 0.6;
    const auto g = build_mapped_grid(p, beta, 2.0, 200.0);
    REQUIRE(g.size() > 20);
    for (int i = 2; i < g.size() - 2; i += 7)
        CHECK(g.weight(i) * p(g.r[i]) / std::numbers::pi == doctest::Approx(beta).epsilon(0.02));
    // weights integrate the unit function over the box
    CHECK(g.jacobian.sum() * g.dx == doctest::Approx(198.0).epsilon(0.02));
}

TEST_CASE("mapped levels below E_max / 2 match the oscillator ladder") {
    ModelConfig c;
    c.ground_interaction = false;
    c.excited_channel = false;
    c.a_target.reset();
    c.grid.r_min = 0.0;
    const Model m(c);
    const double hw = m.hbar_omega();
    const double half = 0.5 * c.grid.e_max_hw * hw;
    int n = 0;
    for (; oracle::oscillator_level(n, hw) < half; ++n)
        CHECK(m.ground_spectrum().energies[n] / oracle::oscillator_level(n, hw) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(n >= 10);
}

TEST_CASE("weighted eigenfunctions are orthonormal") {
    ModelConfig c;
    c.excited_channel = false;
    const Model m(c);
    const auto& g = m.grid();
    const auto& v = m.ground_spectrum().vectors;
    const int nb = m.last_bound() + 6;
    Eigen::MatrixXd u(g.size(), nb);
    for (int k = 0; k < nb; ++k)
        for (int i = 0; i < g.size(); ++i) u(i, k) = v(i, k) / std::sqrt(g.weight(i));
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nb, nb);
    for (int i = 0; i < g.size(); ++i) s += g.weight(i) * u.row(i).transpose() * u.row(i);
    CHECK((s - Eigen::MatrixXd::Identity(nb, nb)).cwiseAbs().maxCoeff() < 1e-10);
}

}
