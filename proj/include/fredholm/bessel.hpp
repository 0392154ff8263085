#pragma once

// Bessel function tables J_n(x) and I_n(x) by Miller's backward recurrence.
// Forward recurrence is unstable for n > x, so we recur downward from a
// start index well above max(n, x) and normalize:
//   J:  J_0^2 + 2 * sum_{k>=1} J_k^2 = 1
//   I:  I_0 + 2 * sum_{k>=1} I_k    = e^x   (x > 0)

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fredholm {

namespace detail {

inline std::size_t miller_start_index(double x, std::size_t jmax)
{
    const double ax = std::abs(x);
    const std::size_t base = std::max<std::size_t>(jmax, std::size_t(std::ceil(ax)) + 16);
    const std::size_t pad = std::size_t(std::ceil(std::sqrt(40.0 * double(std::max<std::size_t>(base, 8)))));
    return base + pad + 24;
}

} // namespace detail

// J_0(x) .. J_jmax(x); negative orders via J_{-n} = (-1)^n J_n.
inline std::vector<double> bessel_j_table(double x, std::size_t jmax)
{
    std::vector<double> out(jmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const std::size_t m = detail::miller_start_index(x, jmax);
    std::vector<double> y(m + 2, 0.0);
    y[m + 1] = 0.0;
    y[m] = 1e-300;
    for (std::size_t j = m; j >= 1; --j) {
        y[j - 1] = (2.0 * double(j) / x) * y[j] - y[j + 1];
        if (std::abs(y[j - 1]) > 1e250) {
            for (std::size_t i = j - 1; i <= m + 1; ++i) y[i] *= 1e-250;
        }
    }
    double norm2 = y[0] * y[0];
    for (std::size_t j = 1; j <= m; ++j) norm2 += 2.0 * y[j] * y[j];
    const double scale = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j <= jmax; ++j) out[j] = y[j] * scale;
    return out;
}

// I_0(x) .. I_jmax(x), x >= 0; I_{-n} = I_n.
inline std::vector<double> bessel_i_table(double x, std::size_t jmax)
{
    std::vector<double> out(jmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x < 0.0) throw std::invalid_argument("bessel_i_table: negative argument");
    const std::size_t m = detail::miller_start_index(x, jmax);
    std::vector<double> y(m + 2, 0.0);
    y[m + 1] = 0.0;
    y[m] = 1e-300;
    for (std::size_t j = m; j >= 1; --j) {
        y[j - 1] = (2.0 * double(j) / x) * y[j] + y[j + 1];
        if (std::abs(y[j - 1]) > 1e250) {
            for (std::size_t i = j - 1; i <= m + 1; ++i) y[i] *= 1e-250;
        }
    }
    double norm = y[0];
    for (std::size_t j = 1; j <= m; ++j) norm += 2.0 * y[j];
    const double scale = std::exp(x) / norm;
    for (std::size_t j = 0; j <= jmax; ++j) out[j] = y[j] * scale;
    return out;
}

} // namespace fredholm
