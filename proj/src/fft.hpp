#pragma once

#include <complex>
#include <span>

namespace qpww::detail {

/// In-place unnormalized d-dimensional DFT on an M^d array, last index fastest.
/// sign = +1 computes sum_n x_n exp(+2 pi i n.m / M) (synthesis),
/// sign = -1 the analysis direction.
void fft_inplace(std::span<std::complex<double>> data, int dim, int resolution, int sign);

}  // namespace qpww::detail
