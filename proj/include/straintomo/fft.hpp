// Thin FFTW wrappers over std::complex buffers. Transforms are unnormalised.
#pragma once

#include <complex>
#include <vector>

namespace straintomo::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

/// In-place 2D transform of an x-fastest (nx, ny) array.
void transform_2d(std::vector<cplx>& data, int nx, int ny, Direction dir);

/// In-place 1D transforms of `rows` contiguous rows of length n.
void transform_rows(std::vector<cplx>& data, int n, int rows, Direction dir);

/// Angular wavenumber of FFT bin m for n samples at spacing h.
double wavenumber(int m, int n, double h);

}  // namespace straintomo::fft
