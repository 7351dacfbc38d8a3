#pragma once

#include "wavepacket/grid.hpp"
#include "wavepacket/window.hpp"

#include <stdexcept>

namespace wpk {

struct PropagatorConfig; // propagator.hpp

class BranchTrackingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// State of the Gaussian chirp A e^{-a x^2 / 2} under the harmonic flow.
struct ChirpState {
    Complex width;     // a(t)
    Complex amplitude; // A(t)
};

/// Closed-form evolution of the chirp parameters under
/// i d/dt phi = -phi''/2 + x^2 phi / 2:
///   a(t) = (a0 cos t + i sin t) / (cos t + i a0 sin t)
///   A(t) = A0 (cos t + i a0 sin t)^{-1/2}
/// with the square root branch continued along a fine time mesh from t = 0
/// (never a principal value at isolated t). Throws BranchTrackingError if the
/// argument cannot be continued with bounded increments.
ChirpState evolve_chirp(Complex a0, Complex amplitude0, double t);

/// Applies evolve_chirp to a gaussian_chirp window; time_tag advances by t.
WindowInstance evolve_gaussian_window(const WindowInstance& w, double t);

/// U(m pi) f(x) = e^{-i m pi / 2} f((-1)^m x) in one dimension.
/// Sampled fields require a symmetric grid when m is odd.
SampledField metaplectic_parity(const SampledField& f, int m);
WindowInstance metaplectic_parity(const WindowInstance& w, int m);

/// Numeric fallback for non-Gaussian windows: samples the window on the
/// propagator grid and runs the split-step scheme with v == 0.
WindowInstance evolve_window_numeric(const WindowInstance& w, double t,
                                     const PropagatorConfig& cfg);

} // namespace wpk
