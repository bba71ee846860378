#pragma once

#include <complex>
#include <vector>

namespace superstar::fft {

/// In-place unnormalized DFT of `howmany` contiguous arrays of shape `dims` (row-major).
/// sign = -1: Σ x_j e^{-2πi jk/n}; sign = +1: Σ x_j e^{+2πi jk/n}.
void transform(std::complex<double>* data, const std::vector<int>& dims, int sign, int howmany = 1);

}  // namespace superstar::fft
