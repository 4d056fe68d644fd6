#pragma once

#include <complex>
#include <vector>

namespace irissr {

using Cplx = std::complex<double>;

// In-place forward/inverse FFT of arbitrary length (radix-2 when the length
// is a power of two, Bluestein otherwise). Inverse includes the 1/n factor.
void fft(std::vector<Cplx>& a, bool inverse);

// Row-major 2-D transforms.
void fft2(std::vector<Cplx>& a, int width, int height, bool inverse);

} // namespace irissr
