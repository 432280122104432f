#include <doctest.h>

#include <cmath>
#include <limits>

#include <ofr/config.hpp>
#include <ofr/error.hpp>
#include <ofr/model.hpp>
#include <ofr/spectrum.hpp>

using namespace ofr;

namespace {

const Model& small_model() {
    static const Model m = [] {
        ModelConfig c;
        c.grid.kind = RadialGrid::Kind::uniform;
        c.grid.points = 160;
        c.grid.r_max = 60.0;
        return Model(c);
    }();
    return m;
}

// packaged physics on a uniform grid, 2N = 496
const Model& identity_model() {
    static const Model m = [] {
        RunConfig c = load_preset("tight");
        c.model.grid.kind = RadialGrid::Kind::uniform;
        c.model.grid.points = 250;
        c.model.grid.r_min = 9.5;
        c.model.grid.r_max = 80.0;
        return Model(c.model);
    }();
    return m;
}

DressedState state(double re, double p_exc) {
    DressedState s;
    s.energy = {re, 0.0};
    s.p_exc = p_exc;
    return s;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("decay width equals the excited weight") {
    const auto& m = identity_model();
    for (double scale : {1.0, 3.0, 10.0})
        for (double i : {0.0, 3.0, 12.0})
            for (double d : {4.0, 4.2}) {
                const double g = scale * m.gamma();
                double worst = 0.0;
                for (const auto& s : diagonalize(m.dressed(i, d, g)).states)
                    worst = std::max(worst, std::abs(s.energy.imag() + 0.5 * g * s.p_exc));
                CHECK(worst < 1e-8 * g);
            }
}

TEST_CASE("left and right vectors are biorthogonal") {
    const auto& m = small_model();
    DiagonalizeOptions opt;
    opt.left_vectors = true;
    const auto sp = diagonalize(m.dressed(5.0, 4.15, m.gamma()), opt);
    CHECK(biorthogonality_defect(sp) < 1e-8);
    CHECK_THROWS_AS(biorthogonality_defect(diagonalize(m.dressed(5.0, 4.15, m.gamma()))), ConfigError);
}

TEST_CASE("ordering, normalization and projections") {
    const auto& m = small_model();
    const Eigen::VectorXd lb = m.last_bound_vector();
    DiagonalizeOptions opt;
    opt.last_bound = &lb;
    opt.grid = &m.grid();
    const auto sp = diagonalize(m.dressed(0.0, 4.15, 0.0), opt);
    for (std::size_t k = 1; k < sp.states.size(); ++k)
        CHECK(sp.states[k].energy.real() >= sp.states[k - 1].energy.real());
    double best = 0.0;
    for (const auto& s : sp.states) {
        CHECK(s.vector.norm() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(s.p_exc >= 0.0);
        CHECK(s.p_exc <= 1.0 + 1e-13);
        best = std::max(best, s.p_mol);
    }
    // no field: the last bound level itself is an eigenstate
    CHECK(best == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification against the shifted threshold") {
    const double thr = -1e-6, tol = 1e-8;
    const std::vector<DressedState> s{state(-2e-6, 0.1), state(-2e-6, 0.9), state(-0.5e-6, 0.0),
                                      state(thr - tol + 1e-10, 0.0)};
    const auto c = classify_states(s, thr, tol);
    CHECK(c.kinds[0] == StateClass::molecular_bound);
    CHECK(c.kinds[1] == StateClass::excited_dominated);
    CHECK(c.kinds[2] == StateClass::trap);
    CHECK(c.kinds[3] == StateClass::trap);
    REQUIRE(c.ambiguous.size() == 1);
    CHECK(c.ambiguous[0] == 3);
}

TEST_CASE("last bound level") {
    ChannelSpectrum g;
    g.energies = Eigen::Vector4d(-1e-3, -2e-6, 1e-9, 3e-9);
    CHECK(last_bound_level(g, 5e-10) == 1);
    g.energies = Eigen::Vector4d(1e-9, 2e-9, 3e-9, 4e-9);
    CHECK_THROWS_AS(last_bound_level(g, 5e-10), NumericalError);
}

TEST_CASE("lifetime of a dressed state") {
    // p_exc = 0.01 gives roughly the two microseconds quoted for the near-resonant levels
    CHECK(lifetime(state(0.0, 0.01), 26.24) == doctest::Approx(1855.4).epsilon(1e-4));
    CHECK(lifetime(state(0.0, 1.0), 26.24) == doctest::Approx(26.24 / std::sqrt(2.0)));
    CHECK(std::isinf(lifetime(state(0.0, 0.0), 26.24)));
}

TEST_CASE("tracking follows overlap and merges degenerate partners") {
    std::vector<DressedState> s(3);
    for (int k = 0; k < 3; ++k) {
        s[k].vector = Eigen::VectorXcd::Unit(3, k);
        s[k].energy = {double(k), 0.0};
    }
    Eigen::VectorXcd prev(3);
    prev << 0.1, 0.99, 0.0;
    prev.normalize();
    auto r = track_state(prev, s);
    CHECK(r.index == 1);
    CHECK(r.overlap == doctest::Approx(0.99 / std::hypot(0.1, 0.99)));

    s[2].energy = {1.0, 0.0};  // states 1 and 2 now degenerate
    prev << 0.0, 0.6, 0.8;
    r = track_state(prev, s);
    CHECK(r.overlap == doctest::Approx(1.0));
    CHECK(std::abs(r.vector.dot(prev)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(track_state(prev, {}), ConfigError);
}

}
