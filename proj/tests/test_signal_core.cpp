#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavepacket/grid.hpp"
#include "wavepacket/signal.hpp"
#include "wavepacket/window.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstring>

using namespace wpk;

TEST_CASE("Grid1D invariants") {
    CHECK_THROWS_AS(Grid1D(1.0, -1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 17), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 1), std::invalid_argument);
    Grid1D g(-8.0, 8.0, 16);
    CHECK(g.spacing() == doctest::Approx(1.0));
    CHECK(g.point(8) == doctest::Approx(0.0));
    CHECK(g.symmetric());
    CHECK_FALSE(Grid1D(-8.0, 9.0, 16).symmetric());
}

TEST_CASE("sample evaluates prototypes pointwise") {
    Grid1D g(-8.0, 8.0, 16);

    SUBCASE("gaussian peak at center") {
        SampledField f = sample(SignalSpec::gaussian(0.0, 1.0), g);
        CHECK(f.values[8].real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(f.values[8].imag() == 0.0);
    }
    SUBCASE("heaviside vanishes left of the jump") {
        SignalSpec f = SignalSpec::heaviside_gaussian(0.0, 1.0);
        CHECK(std::abs(f(-1.0)) == 0.0);
        CHECK(f(0.0).real() == doctest::Approx(1.0)); // jump value convention H(0) = 1
    }
    SUBCASE("abs_power direct substitution") {
        SignalSpec f = SignalSpec::abs_power(0.5, 0.0, 1.0);
        CHECK(f(4.0).real() == doctest::Approx(2.0 * std::exp(-8.0)).epsilon(1e-14));
    }
    SUBCASE("modulated wraps the base") {
        SignalSpec f = SignalSpec::modulated(SignalSpec::gaussian(0.0, 1.0), 3.0);
        CHECK(std::abs(f(0.7)) == doctest::Approx(std::exp(-0.5 * 0.49)).epsilon(1e-14));
        CHECK(std::arg(f(0.7)) == doctest::Approx(std::fmod(3.0 * 0.7, 2 * M_PI)));
        CHECK(f.osc_frequency_hint() == doctest::Approx(3.0));
    }
    SUBCASE("dirac approximation integrates to one") {
        SignalSpec f = SignalSpec::dirac_approx(0.5, 0.05);
        Grid1D fine(-8.0, 8.0, 1 << 14);
        SampledField s = sample(f, fine);
        double mass = 0.0;
        for (const auto& z : s.values) mass += z.real();
        CHECK(mass * fine.spacing() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("resampling is bit-identical") {
    Grid1D g(-8.0, 8.0, 256);
    SignalSpec spec = SignalSpec::heaviside_gaussian(0.3, 1.2);
    SampledField a = sample(spec, g);
    SampledField b = sample(spec, g);
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(Complex)) == 0);
}

TEST_CASE("ground-truth wave fronts") {
    CHECK(SignalSpec::gaussian(0.0, 1.0).wave_front().empty());

    auto wf = SignalSpec::heaviside_gaussian(0.25, 1.0).wave_front();
    REQUIRE(wf.size() == 1);
    CHECK(wf[0].x_sing == doctest::Approx(0.25));
    CHECK(wf[0].directions == WfDirections::both);

    auto wfm = SignalSpec::modulated(SignalSpec::heaviside_gaussian(0.0, 1.0), 40.0).wave_front();
    REQUIRE(wfm.size() == 1);
    CHECK(wfm[0].x_sing == doctest::Approx(0.0));
}

TEST_CASE("inner products and norms") {
    Grid1D g(-8.0, 8.0, 4096);
    SampledField f = sample(SignalSpec::gaussian(0.0, 1.0), g);

    SUBCASE("gaussian self inner product = sqrt(pi)") {
        Complex ip = inner_product(f, f);
        CHECK(ip.real() == doctest::Approx(oracle::kSqrtPi).epsilon(1e-10));
        CHECK(std::abs(ip.imag()) < 1e-14);
    }
    SUBCASE("even-odd orthogonality") {
        std::vector<Complex> odd(g.n_points());
        for (std::size_t i = 0; i < g.n_points(); ++i) {
            const double x = g.point(i);
            odd[i] = x * std::exp(-0.5 * x * x);
        }
        SampledField h(g, std::move(odd));
        CHECK(std::abs(inner_product(f, h)) < 1e-12);
    }
    SUBCASE("zero field has zero norm") {
        CHECK(l2_norm(SampledField::zeros(g)) == 0.0);
    }
    SUBCASE("grid mismatch rejected") {
        SampledField other = sample(SignalSpec::gaussian(0.0, 1.0), Grid1D(-8.0, 8.0, 2048));
        CHECK_THROWS_AS((void)inner_product(f, other), std::invalid_argument);
    }
}

TEST_CASE("scaled_window: gaussian closed form") {
    WindowSpec spec = WindowSpec::gaussian(Complex(1.0, 0.0), 0.25);

    SUBCASE("lambda = 16 gives A = sqrt(2), a = 4") {
        WindowInstance w = scaled_window(spec, 16.0);
        const auto& rep = w.gaussian_chirp();
        CHECK(rep.amplitude.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(rep.width.real() == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(w.time_tag() == 0.0);
    }
    SUBCASE("lambda = 1 is the identity") {
        WindowInstance w = scaled_window(spec, 1.0);
        CHECK(w.gaussian_chirp().amplitude.real() == doctest::Approx(1.0));
        CHECK(w.gaussian_chirp().width.real() == doctest::Approx(1.0));
    }
    SUBCASE("lambda < 1 rejected") {
        CHECK_THROWS_AS((void)scaled_window(spec, 0.5), std::domain_error);
    }
}

TEST_CASE("scaling is an L2 isometry") {
    // analytic norm on one side, quadrature on an adequately refined grid on
    // the other, across bases, b and lambda
    for (double b : {0.2, 0.25, 0.4, 0.49}) {
        for (double lambda : {1.0, 4.0, 64.0, 1024.0}) {
            for (int base = 0; base < 2; ++base) {
                WindowSpec spec = base == 0 ? WindowSpec::gaussian(Complex(1.0, 0.0), b)
                                            : WindowSpec::hermite1(b);
                WindowInstance w = scaled_window(spec, lambda);
                CHECK(w.l2_norm() == doctest::Approx(spec.base_l2_norm()).epsilon(1e-12));

                const double radius = w.support_radius(1e-16);
                Grid1D g(-radius, radius, 4096);
                double acc = 0.0;
                for (std::size_t i = 0; i < g.n_points(); ++i) {
                    acc += std::norm(w.value(g.point(i)));
                }
                const double quad = std::sqrt(acc * g.spacing());
                CHECK(std::abs(quad - spec.base_l2_norm()) < 1e-8);
            }
        }
    }
}

TEST_CASE("custom sampled windows scale exactly on dilated grids") {
    Grid1D g(-8.0, 8.0, 512);
    SampledField profile = sample(SignalSpec::gaussian(0.0, 1.0), g);
    WindowSpec spec = WindowSpec::custom(profile, 0.25);
    WindowInstance w = scaled_window(spec, 16.0);
    REQUIRE(w.is_sampled());
    const auto& f = w.sampled().field;
    CHECK(f.grid.x_min() == doctest::Approx(-4.0));
    // node k of the scaled grid equals lambda^{b/2} profile[k]
    CHECK(f.values[256].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("window spec validation") {
    CHECK_THROWS_AS(WindowSpec::gaussian(Complex(-1.0, 0.0), 0.25), std::invalid_argument);
    CHECK_THROWS_AS(WindowSpec::gaussian(Complex(1.0, 0.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(WindowSpec::gaussian(Complex(1.0, 0.0), 1.0), std::invalid_argument);
    Grid1D g(-4.0, 4.0, 64);
    CHECK_THROWS_AS(WindowSpec::custom(SampledField::zeros(g), 0.25), std::invalid_argument);
}

TEST_CASE("sample rejects non-finite evaluations") {
    // custom profile path stays finite; force the error through abs_power
    // with an overflowing exponent
    SignalSpec bad = SignalSpec::abs_power(4000.0, 0.0, 1.0);
    Grid1D g(-8.0, 8.0, 16);
    CHECK_THROWS_WITH_AS(sample(bad, g), doctest::Contains("non-finite"), std::invalid_argument);
}
