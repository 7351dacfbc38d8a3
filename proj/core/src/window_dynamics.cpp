#include "wavepacket/window_dynamics.hpp"

#include "wavepacket/hamflow.hpp"
#include "wavepacket/propagator.hpp"

#include <cmath>
#include <sstream>

namespace wpk {

namespace {

Complex ellipse_point(Complex a0, double t) {
    return Complex(std::cos(t), 0.0) + Complex(0.0, 1.0) * a0 * std::sin(t);
}

double arg_increment(Complex a0, double ta, double tb, int depth) {
    const Complex wa = ellipse_point(a0, ta);
    const Complex wb = ellipse_point(a0, tb);
    const double d = std::arg(wb / wa);
    if (std::abs(d) <= M_PI / 4.0) return d;
    if (depth > 48) {
        std::ostringstream msg;
        msg << "evolve_chirp: argument jump " << d << " between t = " << ta << " and " << tb
            << " could not be resolved by bisection";
        throw BranchTrackingError(msg.str());
    }
    const double tm = 0.5 * (ta + tb);
    return arg_increment(a0, ta, tm, depth + 1) + arg_increment(a0, tm, tb, depth + 1);
}

// Continuous argument of w(t) = cos t + i a0 sin t along [0, t], unwrapped on
// a pi/256 mesh with local bisection. w never vanishes for Re a0 > 0.
double continued_arg(Complex a0, double t) {
    const std::size_t n =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(t) / (M_PI / 256.0))));
    const double h = t / static_cast<double>(n);
    double theta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        theta += arg_increment(a0, static_cast<double>(i) * h, static_cast<double>(i + 1) * h, 0);
    }
    return theta;
}

} // namespace

ChirpState evolve_chirp(Complex a0, Complex amplitude0, double t) {
    if (!(a0.real() > 0.0)) {
        throw std::invalid_argument("evolve_chirp: Re a0 must be positive");
    }
    const Complex w = ellipse_point(a0, t);
    const Complex a_t =
        (a0 * std::cos(t) + Complex(0.0, 1.0) * std::sin(t)) / w;
    const double theta = continued_arg(a0, t);
    const Complex amp_t = amplitude0 * std::pow(std::abs(w), -0.5) * std::polar(1.0, -0.5 * theta);
    if (!(a_t.real() > 0.0)) {
        std::ostringstream msg;
        msg << "evolve_chirp: Re a(t) = " << a_t.real() << " <= 0 at t = " << t;
        throw BranchTrackingError(msg.str());
    }
    return {a_t, amp_t};
}

WindowInstance evolve_gaussian_window(const WindowInstance& w, double t) {
    const GaussianChirpRep& rep = w.gaussian_chirp();
    const ChirpState state = evolve_chirp(rep.width, rep.amplitude, t);
    return WindowInstance(GaussianChirpRep{state.amplitude, state.width}, w.lambda(), w.b(),
                          w.time_tag() + t);
}

namespace {

Complex parity_phase(int m) {
    // e^{-i m pi / 2}
    switch (((m % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

} // namespace

SampledField metaplectic_parity(const SampledField& f, int m) {
    const Complex phase = parity_phase(m);
    const bool reflect = (m % 2) != 0;
    if (!reflect) {
        std::vector<Complex> values(f.values.size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = phase * f.values[i];
        return SampledField(f.grid, std::move(values));
    }
    if (!f.grid.symmetric()) {
        throw std::invalid_argument(
            "metaplectic_parity: odd m needs a symmetric grid (reflection would resample)");
    }
    const std::size_t n = f.values.size();
    std::vector<Complex> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = phase * f.values[(n - i) % n];
    }
    return SampledField(f.grid, std::move(values));
}

WindowInstance metaplectic_parity(const WindowInstance& w, int m) {
    const Complex phase = parity_phase(m);
    const double new_tag = w.time_tag() + static_cast<double>(m) * M_PI;
    return std::visit(
        [&](const auto& rep) -> WindowInstance {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, GaussianChirpRep>) {
                // even profile: reflection is the identity
                return WindowInstance(GaussianChirpRep{phase * rep.amplitude, rep.width},
                                      w.lambda(), w.b(), new_tag);
            } else if constexpr (std::is_same_v<T, HermiteChirpRep>) {
                const double refl = (m % 2 != 0) ? -1.0 : 1.0;
                return WindowInstance(
                    HermiteChirpRep{phase * refl * rep.amplitude, rep.width, rep.scale},
                    w.lambda(), w.b(), new_tag);
            } else {
                return WindowInstance(SampledRep{metaplectic_parity(rep.field, m)}, w.lambda(),
                                      w.b(), new_tag);
            }
        },
        w.rep());
}

WindowInstance evolve_window_numeric(const WindowInstance& w, double t,
                                     const PropagatorConfig& cfg) {
    const SampledField initial = sample_window(w, cfg.grid);
    SampledField evolved = split_step_evolve(initial, Potential::zero(), 0.0, t, cfg);
    return WindowInstance(SampledRep{std::move(evolved)}, w.lambda(), w.b(), w.time_tag() + t);
}

} // namespace wpk
