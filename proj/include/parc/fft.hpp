#pragma once

#include <span>
#include <vector>

#include "parc/model.hpp"

namespace parc {

/// In-place iterative radix-2 FFT. Size must be a power of two.
void fft_radix2(std::vector<cplx>& data);

/// Forward DFT of `samples` (length N, any N), returning the full bin vector.
/// Power-of-two lengths use the radix-2 path, others a direct evaluation.
std::vector<cplx> dft(std::span<const cplx> samples);

/// Magnitudes of the first n_fft bins of the length-N DFT of the complex
/// node samples. No windowing, no zero padding, no normalization.
std::vector<double> dft_magnitudes(std::span<const cplx> samples, int n_fft);

}  // namespace parc
