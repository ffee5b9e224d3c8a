#ifndef RISOP_FFT_HPP
#define RISOP_FFT_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "risop/errors.hpp"

namespace risop {

/// In-place radix-2 Cooley-Tukey FFT.  Size must be a power of two.
/// inverse=true applies the conjugate transform including the 1/n factor.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ContractError("fft_inplace: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // twiddle table for the largest stage, reused with stride for smaller ones
    static thread_local std::vector<std::complex<double>> table;
    static thread_local std::size_t table_n = 0;
    if (table_n != n) {
        table.assign(n / 2, {1.0, 0.0});
        for (std::size_t k = 0; k < n / 2; ++k) {
            double ang = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
            table[k] = {std::cos(ang), std::sin(ang)};
        }
        table_n = n;
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> w = table[k * stride];
                if (inverse) w = std::conj(w);
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

} // namespace risop

#endif
