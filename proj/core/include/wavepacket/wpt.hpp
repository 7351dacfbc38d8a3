#pragma once

#include "wavepacket/grid.hpp"
#include "wavepacket/signal.hpp"
#include "wavepacket/window.hpp"

#include <vector>

namespace wpk {

/// W_phi f(x, xi) on a grid of x values and the full set of discrete Fourier
/// frequencies of the y-grid. values is row-major: values[ix * n_xi + ik].
struct WptGridResult {
    std::vector<double> x_grid;
    std::vector<double> xi_grid; // ascending
    std::vector<Complex> values;
    Grid1D source_grid; // the y-grid the transform was computed on

    Complex at(std::size_t ix, std::size_t ik) const { return values[ix * xi_grid.size() + ik]; }
};

struct WptOptions {
    double eps_tail = 1e-12;     // window support truncation, relative to max|phi|
    double max_phase_step = 0.2; // radians of oscillation per quadrature step
};

/// Quadrature value together with the L1 mass of the integrand, which bounds
/// the attainable cancellation and hence the measurement floor of |W|.
struct WptPointResult {
    Complex value;
    double l1_mass;
};

/// W_phi f(x, xi) = integral conj(phi(y - x)) f(y) e^{-i y xi} dy by composite
/// trapezoid over the window's effective support, with the step chosen to
/// resolve the total oscillation (xi, signal modulation, window chirp).
Complex wpt_point(const SignalSpec& f, const WindowInstance& w, double x, double xi,
                  const WptOptions& opts = {});
Complex wpt_point(const SampledField& f, const WindowInstance& w, double x, double xi,
                  const WptOptions& opts = {});

WptPointResult wpt_point_detailed(const SignalSpec& f, const WindowInstance& w, double x,
                                  double xi, const WptOptions& opts = {});
WptPointResult wpt_point_detailed(const SampledField& f, const WindowInstance& w, double x,
                                  double xi, const WptOptions& opts = {});

/// FFT fast path: for each x, W_phi f(x, .) over all DFT frequencies of f's
/// grid, as the FFT of conj(phi(. - x)) f(.) scaled by h e^{-i x_min xi}.
WptGridResult wpt_grid(const SampledField& f, const WindowInstance& w,
                       const std::vector<double>& x_grid, const WptOptions& opts = {});

/// Formal adjoint W*_phi F(x) = double integral F(y, xi) phi(x - y) e^{i x xi},
/// evaluated on F's grids and returned on F's source grid.
SampledField wpt_adjoint(const WptGridResult& F, const WindowInstance& w);

/// (2 pi)^{-1} <psi, phi>^{-1} W*_psi F with psi = synthesis_w and
/// phi = analysis_w. Rejects |<psi, phi>| < 1e-12.
SampledField invert(const WptGridResult& F, const WindowInstance& analysis_w,
                    const WindowInstance& synthesis_w);

} // namespace wpk
