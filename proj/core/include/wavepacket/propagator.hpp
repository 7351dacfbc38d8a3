#pragma once

#include "wavepacket/grid.hpp"
#include "wavepacket/hamflow.hpp"

#include <stdexcept>

namespace wpk {

/// Raised when more than the tolerated L2 mass reaches the outer 5% of the
/// grid (periodic wraparound would silently corrupt the solution).
class BoundaryMassError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PropagatorScheme { mehler_exact, strang_split };

struct PropagatorConfig {
    Grid1D grid;
    double dt = 1e-3;
    PropagatorScheme scheme = PropagatorScheme::strang_split;
    // Fraction of squared L2 mass tolerated in the outer 5% of the grid.
    // Jump data sheds high-frequency mass outward under the oscillator flow
    // (the singular content leaves every compact set between caustic times),
    // so scenarios with non-smooth data need a looser guard than the default.
    double boundary_tolerance = 1e-6;

    static PropagatorConfig standard();
};

void validate(const PropagatorConfig& cfg);

/// Strang splitting for i u_t = -u_xx/2 + (x^2/2 + v(t,x)) u: half potential
/// step, full Fourier kinetic step e^{-i dt k^2/2}, half potential step, with
/// time-dependent v sampled at the step midpoint. Unitary factors conserve
/// the L2 norm to roundoff per step. Supports t1 < t0.
SampledField split_step_evolve(const SampledField& u0, const Potential& pot, double t0,
                               double t1, const PropagatorConfig& cfg);

/// Exact v == 0 propagator via the Mehler oscillatory kernel
///   K(t,x,y) = (2 pi i sin t)^{-1/2} exp(i[(x^2+y^2) cos t - 2xy]/(2 sin t)),
/// reduced to |t - m pi| <= pi/2 by the metaplectic parity; within 0.05 of
/// m pi it delegates to a short split-step correction instead.
SampledField mehler_evolve(const SampledField& u0, double t, const PropagatorConfig& cfg);

/// Free-particle propagator: Fourier multiplier e^{-i t k^2 / 2}.
SampledField free_evolve(const SampledField& u0, double t, const PropagatorConfig& cfg);

} // namespace wpk
