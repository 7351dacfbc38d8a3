#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavepacket/propagator.hpp"
#include "wavepacket/window_dynamics.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace wpk;

namespace {

double field_l2_diff(const SampledField& a, const SampledField& b) {
    REQUIRE(a.grid == b.grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        acc += std::norm(a.values[i] - b.values[i]);
    }
    return std::sqrt(acc * a.grid.spacing());
}

} // namespace

TEST_CASE("chirp law validated against the parameter-ODE oracle") {
    // The closed form is a derived fact; its first duty is to match an
    // independent RK4 integration of a' = i (1 - a^2), A' = -(i/2) a A.
    for (Complex a0 : {Complex(1.0, 0.0), Complex(4.0, 0.0), Complex(0.5, 0.3)}) {
        for (double t : {-M_PI, -1.0, 0.3, 1.7, M_PI, 2.0 * M_PI}) {
            const ChirpState got = evolve_chirp(a0, Complex(1.0, 0.0), t);
            const oracle::ChirpOracle want = oracle::chirp_rk4(a0, Complex(1.0, 0.0), t);
            CHECK(std::abs(got.width - want.a) < 1e-9);
            CHECK(std::abs(got.amplitude - want.amplitude) < 1e-9);
        }
    }
}

TEST_CASE("ground state width is stationary with phase e^{-it/2}") {
    for (double t : {0.2, 1.0, 2.5, M_PI}) {
        const ChirpState s = evolve_chirp(Complex(1.0, 0.0), Complex(1.0, 0.0), t);
        CHECK(std::abs(s.width - Complex(1.0, 0.0)) < 1e-12);
        CHECK(std::abs(s.amplitude - std::polar(1.0, -0.5 * t)) < 1e-12);
    }
}

TEST_CASE("half-period values of the chirp") {
    SUBCASE("a0 = 4 at t = pi: width returns, amplitude picks up e^{-i pi/2}") {
        const ChirpState s = evolve_chirp(Complex(4.0, 0.0), Complex(1.0, 0.0), M_PI);
        CHECK(std::abs(s.width - Complex(4.0, 0.0)) < 1e-12);
        CHECK(std::abs(s.amplitude - Complex(0.0, -1.0)) < 1e-12);
    }
    SUBCASE("t = -pi gives the conjugate phase e^{+i pi/2}") {
        const ChirpState s = evolve_chirp(Complex(4.0, 0.0), Complex(1.0, 0.0), -M_PI);
        CHECK(std::abs(s.width - Complex(4.0, 0.0)) < 1e-12);
        CHECK(std::abs(s.amplitude - Complex(0.0, 1.0)) < 1e-12);
    }
}

TEST_CASE("periodicity at t = 2 pi") {
    const Complex a0(2.5, 0.4);
    const ChirpState s = evolve_chirp(a0, Complex(0.7, 0.0), 2.0 * M_PI);
    CHECK(std::abs(s.width - a0) < 1e-10);
    CHECK(std::abs(std::abs(s.amplitude) - 0.7) < 1e-10);
}

TEST_CASE("evolved window preserves the L2 norm (closed form)") {
    WindowSpec spec = WindowSpec::gaussian(Complex(1.0, 0.0), 0.25);
    for (double lambda : {1.0, 16.0, 256.0}) {
        WindowInstance w = scaled_window(spec, lambda);
        for (double t : {-M_PI, -1.2, 0.8, M_PI / 2.0}) {
            WindowInstance evolved = evolve_gaussian_window(w, t);
            CHECK(std::abs(evolved.l2_norm() - w.l2_norm()) < 1e-8);
            CHECK(evolved.time_tag() == doctest::Approx(t));
        }
    }
}

TEST_CASE("metaplectic parity of sampled fields") {
    Grid1D g(-8.0, 8.0, 256);
    SampledField f = sample(SignalSpec::heaviside_gaussian(0.5, 1.0), g);

    SUBCASE("m = 0 is the identity") {
        SampledField out = metaplectic_parity(f, 0);
        CHECK(field_l2_diff(out, f) == 0.0);
    }
    SUBCASE("m = 2 negates") {
        SampledField out = metaplectic_parity(f, 2);
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            CHECK(out.values[i] == -f.values[i]);
        }
    }
    SUBCASE("m = 1 reflects with phase -i") {
        SampledField out = metaplectic_parity(f, 1);
        // interior node check: x = +2 picks up the value at -2 times -i
        const std::size_t i_plus = 160; // x = +2
        const std::size_t i_minus = 96; // x = -2
        CHECK(std::abs(out.values[i_plus] - Complex(0.0, -1.0) * f.values[i_minus]) < 1e-15);
    }
    SUBCASE("m = -1 on an even field multiplies by e^{+i pi/2}") {
        SampledField even = sample(SignalSpec::gaussian(0.0, 1.0), g);
        SampledField out = metaplectic_parity(even, -1);
        for (std::size_t i = 1; i < even.values.size(); i += 37) {
            CHECK(std::abs(out.values[i] - Complex(0.0, 1.0) * even.values[i]) < 1e-12);
        }
    }
    SUBCASE("asymmetric grid with odd m is rejected") {
        Grid1D ga(-8.0, 9.0, 256);
        SampledField fa = sample(SignalSpec::gaussian(0.0, 1.0), ga);
        CHECK_THROWS_AS((void)metaplectic_parity(fa, 1), std::invalid_argument);
        CHECK_NOTHROW((void)metaplectic_parity(fa, 2));
    }
}

TEST_CASE("metaplectic parity of window instances") {
    WindowInstance w = scaled_window(WindowSpec::gaussian(Complex(1.0, 0.0), 0.25), 4.0);
    WindowInstance out = metaplectic_parity(w, -1);
    CHECK(std::abs(out.gaussian_chirp().amplitude -
                   Complex(0.0, 1.0) * w.gaussian_chirp().amplitude) < 1e-15);

    // Hermite windows are odd: reflection contributes (-1)^m on top of the
    // metaplectic phase.
    WindowInstance h = scaled_window(WindowSpec::hermite1(0.25), 4.0);
    WindowInstance hout = metaplectic_parity(h, 1);
    const Complex expected = Complex(0.0, -1.0) * -1.0 * h.value(0.3);
    CHECK(std::abs(hout.value(0.3) - expected) < 1e-15);
}

TEST_CASE("numeric evolution agrees with the closed form") {
    PropagatorConfig cfg = PropagatorConfig::standard();
    WindowInstance w = scaled_window(WindowSpec::gaussian(Complex(1.0, 0.0), 0.25), 1.0);

    SUBCASE("t = 0 is the identity") {
        WindowInstance out = evolve_window_numeric(w, 0.0, cfg);
        CHECK(field_l2_diff(sample_window(out, cfg.grid), sample_window(w, cfg.grid)) < 1e-12);
    }
    SUBCASE("t = 1 matches the chirp law within 1e-5") {
        WindowInstance closed = evolve_gaussian_window(w, 1.0);
        WindowInstance numeric = evolve_window_numeric(w, 1.0, cfg);
        CHECK(field_l2_diff(sample_window(numeric, cfg.grid),
                            sample_window(closed, cfg.grid)) < 1e-5);
        CHECK(std::abs(l2_norm(numeric.sampled().field) - w.l2_norm()) < 1e-6);
    }
    SUBCASE("two evolution routes agree for a scaled window") {
        WindowInstance ws = scaled_window(WindowSpec::gaussian(Complex(1.0, 0.0), 0.25), 16.0);
        WindowInstance closed = evolve_gaussian_window(ws, -M_PI / 2.0);
        WindowInstance numeric = evolve_window_numeric(ws, -M_PI / 2.0, cfg);
        CHECK(field_l2_diff(sample_window(numeric, cfg.grid),
                            sample_window(closed, cfg.grid)) < 1e-5);
    }
}

TEST_CASE("hermite window at t = pi equals its parity image") {
    PropagatorConfig cfg = PropagatorConfig::standard();
    WindowInstance h = scaled_window(WindowSpec::hermite1(0.25), 1.0);
    WindowInstance numeric = evolve_window_numeric(h, M_PI, cfg);
    WindowInstance parity = metaplectic_parity(h, 1);
    CHECK(field_l2_diff(sample_window(numeric, cfg.grid), sample_window(parity, cfg.grid)) <
          1e-5);
}
