#pragma once

#include "wavepacket/grid.hpp"

#include <vector>

namespace wpk {

/// In-place complex FFTs backed by FFTW with an internal plan cache.
/// forward computes sum_j v[j] e^{-2 pi i jk / N} (unnormalized);
/// inverse applies the +i kernel and divides by N.
void fft_forward(std::vector<Complex>& v);
void fft_inverse(std::vector<Complex>& v);

/// DFT frequencies 2 pi k / (N h) in FFT (wrap-around) order.
std::vector<double> fft_frequencies(std::size_t n, double spacing);

} // namespace wpk
