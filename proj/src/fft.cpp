#include "irissr/fft.hpp"

#include <cmath>

#include "irissr/common.hpp"

namespace irissr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(size_t n) { return n && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(std::vector<Cplx>& a, bool inverse) {
    const size_t n = a.size();
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * kPi / double(len) * (inverse ? 1.0 : -1.0);
        Cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                Cplx u = a[i + k];
                Cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= double(n);
}

// Bluestein chirp-z: expresses an arbitrary-length DFT through a power-of-two
// circular convolution.
void fft_bluestein(std::vector<Cplx>& a, bool inverse) {
    const size_t n = a.size();
    const size_t m = next_pow2(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;

    std::vector<Cplx> chirp(n);
    for (size_t k = 0; k < n; ++k) {
        // angle = pi * k^2 / n, computed mod 2n to keep the argument small
        double kk = double((static_cast<unsigned long long>(k) * k) % (2 * n));
        double ang = sign * kPi * kk / double(n);
        chirp[k] = Cplx(std::cos(ang), std::sin(ang));
    }
    std::vector<Cplx> x(m, Cplx(0, 0)), y(m, Cplx(0, 0));
    for (size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    for (size_t k = 0; k < n; ++k) {
        y[k] = std::conj(chirp[k]);
        if (k) y[m - k] = std::conj(chirp[k]);
    }
    fft_pow2(x, false);
    fft_pow2(y, false);
    for (size_t k = 0; k < m; ++k) x[k] *= y[k];
    fft_pow2(x, true);
    for (size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    if (inverse)
        for (auto& v : a) v /= double(n);
}

} // namespace

void fft(std::vector<Cplx>& a, bool inverse) {
    if (a.size() <= 1) return;
    if (is_pow2(a.size()))
        fft_pow2(a, inverse);
    else
        fft_bluestein(a, inverse);
}

void fft2(std::vector<Cplx>& a, int width, int height, bool inverse) {
    require(a.size() == size_t(width) * size_t(height), "fft2: size mismatch");
    std::vector<Cplx> line;
    line.resize(size_t(width));
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) line[x] = a[size_t(y) * width + x];
        fft(line, inverse);
        for (int x = 0; x < width; ++x) a[size_t(y) * width + x] = line[x];
    }
    line.resize(size_t(height));
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) line[y] = a[size_t(y) * width + x];
        fft(line, inverse);
        for (int y = 0; y < height; ++y) a[size_t(y) * width + x] = line[y];
    }
}

} // namespace irissr
