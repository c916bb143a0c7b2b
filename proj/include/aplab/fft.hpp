#pragma once

#include <span>
#include <vector>

#include "aplab/common.hpp"

namespace aplab {

/// In-place radix-2 FFT. data.size() must be a power of two.
/// sign = -1: forward transform, X_k = sum_j x_j e^{-2*pi*i*j*k/N} (unscaled).
/// sign = +1: inverse transform, scaled by 1/N.
void fft_pow2(std::span<cplx> data, int sign);

/// Forward DFT scaled by 1/N, i.e. coefficients G_k with
/// samples_j = sum_k G_k e^{i k psi_j}, psi_j = 2*pi*j/N, k = 0..N-1.
std::vector<cplx> dft_coefficients(std::span<const cplx> samples);

/// Inverse of dft_coefficients.
std::vector<cplx> dft_samples(std::span<const cplx> coefficients);

}  // namespace aplab
