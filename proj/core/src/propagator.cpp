#include "wavepacket/propagator.hpp"

#include "wavepacket/fft.hpp"
#include "wavepacket/window_dynamics.hpp"

#include <cmath>
#include <sstream>

namespace wpk {

namespace {

constexpr double kBoundaryFraction = 0.05;

void check_boundary(const SampledField& u, double tolerance, const char* context) {
    const double frac = boundary_mass_fraction(u, kBoundaryFraction);
    if (frac > tolerance) {
        std::ostringstream msg;
        msg << context << ": " << frac
            << " of the L2 mass lies in the outer 5% of the grid; enlarge the domain";
        throw BoundaryMassError(msg.str());
    }
}

} // namespace

PropagatorConfig PropagatorConfig::standard() {
    PropagatorConfig cfg{Grid1D(-16.0, 16.0, 4096), 1e-3, PropagatorScheme::strang_split, 1e-6};
    return cfg;
}

void validate(const PropagatorConfig& cfg) {
    if (!(cfg.dt > 0.0 && cfg.dt <= 1e-2)) {
        throw std::invalid_argument("PropagatorConfig: dt must lie in (0, 1e-2]");
    }
    if (!(cfg.boundary_tolerance > 0.0 && cfg.boundary_tolerance < 1.0)) {
        throw std::invalid_argument("PropagatorConfig: boundary_tolerance must lie in (0, 1)");
    }
}

SampledField split_step_evolve(const SampledField& u0, const Potential& pot, double t0,
                               double t1, const PropagatorConfig& cfg) {
    validate(cfg);
    if (!(u0.grid == cfg.grid)) {
        throw std::invalid_argument("split_step_evolve: field grid differs from config grid");
    }
    check_boundary(u0, cfg.boundary_tolerance, "split_step_evolve");
    if (t1 == t0) return u0;

    const std::size_t n = cfg.grid.n_points();
    const std::size_t n_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(t1 - t0) / cfg.dt)));
    const double ht = (t1 - t0) / static_cast<double>(n_steps);

    const std::vector<double> freqs = fft_frequencies(n, cfg.grid.spacing());
    std::vector<Complex> kinetic(n);
    for (std::size_t k = 0; k < n; ++k) {
        kinetic[k] = std::polar(1.0, -0.5 * ht * freqs[k] * freqs[k]);
    }

    // x^2/2 rides in the position factor together with v; for the built-in
    // time-independent kinds the half-step phase is fixed.
    const bool time_dep = pot.kind() == PotentialKind::custom;
    std::vector<Complex> half_phase(n);
    const auto fill_half_phase = [&](double t_mid) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = cfg.grid.point(i);
            half_phase[i] = std::polar(1.0, -0.5 * ht * (0.5 * x * x + pot.v(t_mid, x)));
        }
    };
    if (!time_dep) fill_half_phase(t0);

    std::vector<Complex> u = u0.values;
    for (std::size_t step = 0; step < n_steps; ++step) {
        if (time_dep) {
            fill_half_phase(t0 + (static_cast<double>(step) + 0.5) * ht);
        }
        for (std::size_t i = 0; i < n; ++i) u[i] *= half_phase[i];
        fft_forward(u);
        for (std::size_t k = 0; k < n; ++k) u[k] *= kinetic[k];
        fft_inverse(u);
        for (std::size_t i = 0; i < n; ++i) u[i] *= half_phase[i];

        SampledField snapshot(cfg.grid, u);
        check_boundary(snapshot, cfg.boundary_tolerance, "split_step_evolve");
        u = std::move(snapshot.values);
    }
    SampledField out(cfg.grid, std::move(u));
    require_finite(out, "split_step_evolve");
    return out;
}

SampledField mehler_evolve(const SampledField& u0, double t, const PropagatorConfig& cfg) {
    validate(cfg);
    if (!(u0.grid == cfg.grid)) {
        throw std::invalid_argument("mehler_evolve: field grid differs from config grid");
    }
    const long m = std::lround(t / M_PI);
    const double tau = t - static_cast<double>(m) * M_PI;

    SampledField u = metaplectic_parity(u0, static_cast<int>(m));
    if (tau == 0.0) return u;
    if (std::abs(tau) <= 0.05) {
        // Kernel degenerates near m pi; a short split-step leg covers it.
        return split_step_evolve(u, Potential::zero(), 0.0, tau, cfg);
    }

    const std::size_t n = cfg.grid.n_points();
    const double h = cfg.grid.spacing();
    const double s = std::sin(tau);
    const double c = std::cos(tau);
    const double amp = 1.0 / std::sqrt(2.0 * M_PI * std::abs(s));
    const Complex prefactor = amp * std::polar(1.0, -0.25 * M_PI * (s > 0 ? 1.0 : -1.0));

    std::vector<Complex> quad_phase(n);
    std::vector<Complex> weighted(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = cfg.grid.point(j);
        quad_phase[j] = std::polar(1.0, 0.5 * c * y * y / s);
        weighted[j] = quad_phase[j] * u.values[j];
    }

    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = cfg.grid.point(i);
        const Complex step = std::polar(1.0, -x * h / s);
        Complex osc = std::polar(1.0, -x * cfg.grid.point(0) / s);
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if ((j & 511u) == 0u) osc = std::polar(1.0, -x * cfg.grid.point(j) / s);
            acc += weighted[j] * osc;
            osc *= step;
        }
        out[i] = prefactor * quad_phase[i] * acc * h;
    }
    SampledField result(cfg.grid, std::move(out));
    check_boundary(result, cfg.boundary_tolerance, "mehler_evolve");
    return result;
}

SampledField free_evolve(const SampledField& u0, double t, const PropagatorConfig& cfg) {
    validate(cfg);
    if (!(u0.grid == cfg.grid)) {
        throw std::invalid_argument("free_evolve: field grid differs from config grid");
    }
    const std::size_t n = cfg.grid.n_points();
    const std::vector<double> freqs = fft_frequencies(n, cfg.grid.spacing());
    std::vector<Complex> u = u0.values;
    fft_forward(u);
    for (std::size_t k = 0; k < n; ++k) {
        u[k] *= std::polar(1.0, -0.5 * t * freqs[k] * freqs[k]);
    }
    fft_inverse(u);
    SampledField out(cfg.grid, std::move(u));
    check_boundary(out, cfg.boundary_tolerance, "free_evolve");
    return out;
}

} // namespace wpk
