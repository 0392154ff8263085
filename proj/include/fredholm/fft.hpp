#pragma once

// Radix-2 FFT for the power-of-two grids used in Fourier coefficient
// extraction.  Forward transform: X[k] = sum_j x[j] exp(-2*pi*i*j*k/N).

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fredholm {

using Cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_inplace(std::vector<Cplx>& a, bool inverse = false)
{
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft_inplace: size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / double(len);
        const Cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Cplx u = a[i + k];
                Cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= double(n);
    }
}

// Fourier coefficients of a function sampled at z_j = exp(2*pi*i*j/N):
// result[k] approximates f_k for k in [-N/2, N/2), stored at index (k mod N).
inline std::vector<Cplx> fourier_coefficients(std::vector<Cplx> samples)
{
    const std::size_t n = samples.size();
    fft_inplace(samples);
    for (auto& c : samples) c /= double(n);
    return samples;
}

} // namespace fredholm
