#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavepacket/hamflow.hpp"

#include <cmath>

using namespace wpk;

TEST_CASE("exact rotation flow") {
    SUBCASE("s = t0 is the identity") {
        PhasePoint p = exact_ho_flow(0.7, 0.7, {1.3, -0.2});
        CHECK(p.x == doctest::Approx(1.3));
        CHECK(p.xi == doctest::Approx(-0.2));
    }
    SUBCASE("half rotation flips the sign") {
        PhasePoint p = exact_ho_flow(M_PI, 0.0, {1.0, 0.0});
        CHECK(p.x == doctest::Approx(-1.0));
        CHECK(std::abs(p.xi) < 1e-15);
    }
    SUBCASE("quarter rotation swaps position and momentum") {
        PhasePoint p = exact_ho_flow(M_PI / 2.0, 0.0, {0.4, 5.0});
        CHECK(p.x == doctest::Approx(-5.0));
        CHECK(p.xi == doctest::Approx(0.4));
    }
}

TEST_CASE("RK4 matches the exact rotation for v == 0") {
    Potential zero = Potential::zero();
    PhasePoint p0{0.7, -1.1};
    Trajectory traj = integrate_flow(zero, 0.0, p0, M_PI, 4096);
    REQUIRE(traj.states.size() == 4097);
    const PhasePoint want = exact_ho_flow(0.0, M_PI, p0);
    CHECK(std::abs(traj.states.back().x - want.x) < 1e-8);
    CHECK(std::abs(traj.states.back().xi - want.xi) < 1e-8);
}

TEST_CASE("origin is a fixed point") {
    Trajectory traj = integrate_flow(Potential::zero(), 0.0, {0.0, 0.0}, M_PI, 64);
    for (const auto& s : traj.states) {
        CHECK(s.x == 0.0);
        CHECK(s.xi == 0.0);
    }
}

TEST_CASE("reversibility of the integrator") {
    Potential pot = Potential::power(1.0, 0.5);
    PhasePoint p0{0.3, 2.0};
    PhasePoint fwd = flow_endpoint(pot, 0.0, p0, M_PI, 4096);
    PhasePoint back = flow_endpoint(pot, M_PI, fwd, 0.0, 4096);
    CHECK(std::abs(back.x - p0.x) < 1e-7);
    CHECK(std::abs(back.xi - p0.xi) < 1e-7);
}

TEST_CASE("energy conservation for v == 0") {
    PhasePoint p0{1.0, 0.5};
    Trajectory traj = integrate_flow(Potential::zero(), 0.0, p0, M_PI, 4096);
    const double e0 = 0.5 * (p0.x * p0.x + p0.xi * p0.xi);
    for (const auto& s : traj.states) {
        CHECK(std::abs(0.5 * (s.x * s.x + s.xi * s.xi) - e0) < 1e-8);
    }
}

TEST_CASE("flow Jacobian determinant is 1 (symplectic up to RK4 error)") {
    Potential pot = Potential::power(0.7, 0.5);
    const double d = 1e-5;
    const auto endpoint = [&](double x, double xi) {
        return flow_endpoint(pot, 0.0, {x, xi}, M_PI, 4096);
    };
    PhasePoint xp = endpoint(0.3 + d, 1.0), xm = endpoint(0.3 - d, 1.0);
    PhasePoint vp = endpoint(0.3, 1.0 + d), vm = endpoint(0.3, 1.0 - d);
    const double dxdx = (xp.x - xm.x) / (2 * d), dxdv = (vp.x - vm.x) / (2 * d);
    const double dvdx = (xp.xi - xm.xi) / (2 * d), dvdv = (vp.xi - vm.xi) / (2 * d);
    CHECK(std::abs(dxdx * dvdv - dxdv * dvdx - 1.0) < 1e-6);
}

TEST_CASE("group property of the flow") {
    Potential pot = Potential::power(1.0, 0.5);
    const double t0 = M_PI, t_mid = 1.1;
    const double lambda = 16.0;
    PhasePoint start{0.4, lambda * 1.0};
    PhasePoint mid = flow_endpoint(pot, t0, start, t_mid, 4096);
    PhasePoint via = flow_endpoint(pot, t_mid, mid, 0.0, 4096);
    PhasePoint direct = flow_endpoint(pot, t0, start, 0.0, 4096);
    CHECK(std::abs(via.x - direct.x) < 1e-7);
    CHECK(std::abs(via.xi - direct.xi) < 1e-7);
}

TEST_CASE("backward endpoint closed form for v == 0") {
    const double t0 = 1.2, x = 0.3, xi = 1.4, lambda = 64.0;
    PhasePoint end = backward_endpoint(Potential::zero(), t0, x, xi, lambda, 4096);
    CHECK(std::abs(end.x - (x * std::cos(t0) - lambda * xi * std::sin(t0))) < 1e-8 * lambda);
    CHECK(std::abs(end.xi - (lambda * xi * std::cos(t0) + x * std::sin(t0))) < 1e-8 * lambda);

    SUBCASE("t0 = pi is the antipode") {
        PhasePoint anti = backward_endpoint(Potential::zero(), M_PI, x, xi, lambda, 4096);
        CHECK(anti.x == doctest::Approx(-x).epsilon(1e-9));
        CHECK(anti.xi == doctest::Approx(-lambda * xi).epsilon(1e-9));
    }
}

TEST_CASE("sub-linear perturbations vanish from the endpoint as lambda grows") {
    // relative deviation from the antipode scales like lambda^{rho - 1}
    Potential pot = Potential::power(1.0, 0.5);
    const double x = 0.3, xi = 1.0;
    const auto rel_err = [&](double lambda) {
        PhasePoint end = backward_endpoint(pot, M_PI, x, xi, lambda, 4096);
        return (std::abs(end.x + x) + std::abs(end.xi + lambda * xi)) / lambda;
    };
    const double e8 = rel_err(256.0), e10 = rel_err(1024.0), e12 = rel_err(4096.0);
    CHECK(e10 < e8);
    CHECK(e12 < e10);
    CHECK(e12 / e8 < 0.35); // expect ~ (1/16)^{1/2} = 0.25
}

TEST_CASE("phase-space sandwich away from the caustic times") {
    // For v == 0 and s with |sin(s - t0)| >= lambda^{-2b}, |x(s)| is pinched
    // between multiples of lambda |sin(s - t0)|; the finite-lambda constants
    // are |xi| -+ |x| lambda^{2b - 1}.
    const double b = 0.25, t0 = M_PI;
    for (double lambda : {64.0, 1024.0}) {
        for (double xi : {0.5, 2.0}) {
            const double x = 0.3;
            Trajectory traj =
                integrate_flow(Potential::zero(), t0, {x, lambda * xi}, 0.0, 2048);
            const double margin = x * std::pow(lambda, 2.0 * b - 1.0);
            const double c_lo = xi - margin, c_hi = xi + margin;
            REQUIRE(c_lo > 0.0);
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const double sn = std::abs(std::sin(traj.times[i] - t0));
                if (sn < std::pow(lambda, -2.0 * b)) continue;
                const double mag = std::abs(traj.states[i].x);
                CHECK(mag >= c_lo * lambda * sn - 1e-9);
                CHECK(mag <= c_hi * lambda * sn + 1e-9);
            }
        }
    }
}

TEST_CASE("asymptotic shift quadrature") {
    const auto sign_grad = [](double, double x) -> double { return (x > 0.0) - (x < 0.0); };
    SUBCASE("sign gradient, positive direction") {
        CHECK(asymptotic_shift(sign_grad, 1.0) == doctest::Approx(-2.0).epsilon(1e-9));
    }
    SUBCASE("odd symmetry flips the sign") {
        CHECK(asymptotic_shift(sign_grad, -1.0) == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("zero gradient gives zero shift") {
        CHECK(asymptotic_shift([](double, double) { return 0.0; }, 1.0) ==
              doctest::Approx(0.0));
    }
    SUBCASE("xi = 0 is rejected") {
        CHECK_THROWS_AS((void)asymptotic_shift(sign_grad, 0.0), std::domain_error);
    }
}

TEST_CASE("growth exponent recovers rho - 1") {
    std::vector<double> lambdas;
    for (int k = 6; k <= 14; ++k) lambdas.push_back(std::exp2(k));

    SUBCASE("rho = 1.5") {
        GrowthFit fit = growth_exponent(Potential::power(1.0, 1.5), 0.3, 1.0, lambdas, 4096);
        CHECK(std::abs(fit.slope - 0.5) < 0.05);
    }
    SUBCASE("rho = 1.2") {
        GrowthFit fit = growth_exponent(Potential::power(1.0, 1.2), 0.3, 1.0, lambdas, 4096);
        CHECK(std::abs(fit.slope - 0.2) < 0.05);
    }
    SUBCASE("v == 0 has constant endpoint") {
        GrowthFit fit = growth_exponent(Potential::zero(), 0.3, 1.0, lambdas, 4096);
        CHECK(std::abs(fit.slope) < 1e-6);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS((void)growth_exponent(Potential::zero(), 0.3, 0.0, lambdas, 512),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            (void)growth_exponent(Potential::zero(), 0.3, 1.0, {1.0, 2.0, 4.0}, 512),
            std::invalid_argument);
        std::vector<double> unsorted = {4.0, 2.0, 8.0, 16.0};
        CHECK_THROWS_AS((void)growth_exponent(Potential::zero(), 0.3, 1.0, unsorted, 512),
                        std::invalid_argument);
    }
}

TEST_CASE("smoothed_abs potential approaches the rho = 1 shift") {
    Potential pot = Potential::smoothed_abs(1.0, 1e-3);
    const double x = 0.3;
    PhasePoint end = backward_endpoint(pot, M_PI, x, 1.0, 4096.0, 4096);
    CHECK(std::abs(end.x - (-x + 2.0)) < 1e-2);
    PhasePoint endn = backward_endpoint(pot, M_PI, x, -1.0, 4096.0, 4096);
    CHECK(std::abs(endn.x - (-x - 2.0)) < 1e-2);
}

TEST_CASE("assumption validation") {
    std::vector<double> xs;
    for (int i = -40; i <= 40; ++i) xs.push_back(2.5 * i);

    SUBCASE("power potential satisfies the bound") {
        AssumptionReport rep = validate_assumption(Potential::power(1.0, 0.5), 3, xs);
        CHECK_FALSE(rep.any_violation);
        for (const auto& b : rep.bounds) CHECK(std::isfinite(b.c_alpha));
    }
    SUBCASE("zero potential has zero constants beyond order zero") {
        AssumptionReport rep = validate_assumption(Potential::zero(), 3, xs);
        for (const auto& b : rep.bounds) {
            if (b.order >= 1) CHECK(b.c_alpha == 0.0);
            CHECK_FALSE(b.violation);
        }
    }
    SUBCASE("quartic growth is flagged at order zero") {
        Potential quartic = Potential::custom(
            1.5, [](double, double x) { return x * x * x * x; },
            [](double, double x) { return 4.0 * x * x * x; });
        AssumptionReport rep = validate_assumption(quartic, 2, xs);
        CHECK(rep.bounds[0].violation);
        CHECK(rep.any_violation);
    }
    SUBCASE("max_order above 4 is rejected") {
        CHECK_THROWS_AS((void)validate_assumption(Potential::zero(), 5, xs),
                        std::invalid_argument);
    }
}

TEST_CASE("custom potential gradients are sanity-checked") {
    CHECK_THROWS_WITH_AS(
        (void)Potential::custom(
            0.5, [](double, double x) { return x * x; },
            [](double, double) { return 0.0; }),
        doctest::Contains("grad_v"), std::invalid_argument);
}

TEST_CASE("divergence raises with the step index") {
    // a force pushing super-exponentially outward diverges in finite steps
    Potential bad = Potential::custom(
        1.9, [](double, double x) { return -1e-4 * std::exp(std::abs(x)); },
        [](double, double x) {
            const double s = (x > 0.0) - (x < 0.0);
            return -s * 1e-4 * std::exp(std::abs(x));
        });
    CHECK_THROWS_AS((void)integrate_flow(bad, 0.0, {30.0, 10.0}, 40.0, 64),
                    FlowDivergenceError);
}
