#pragma once

// Equispaced trapezoid quadrature on the unit circle for contour integrals
// of the form  \oint f(w) dw  =  sum_b weight_b f(z_b),
// z_b = exp(2*pi*i*b/m), weight_b = 2*pi*i*z_b/m.

#include "fredholm/fft.hpp"

#include <numbers>
#include <vector>

namespace fredholm {

struct QuadratureGrid {
    int m_points = 0;
    std::vector<Cplx> nodes;
    std::vector<Cplx> weights;

    static QuadratureGrid circle(int m)
    {
        QuadratureGrid g;
        g.m_points = m;
        g.nodes.resize(static_cast<std::size_t>(m));
        g.weights.resize(static_cast<std::size_t>(m));
        const Cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
        for (int b = 0; b < m; ++b) {
            const double th = 2.0 * std::numbers::pi * double(b) / double(m);
            g.nodes[std::size_t(b)] = std::polar(1.0, th);
            g.weights[std::size_t(b)] = two_pi_i * g.nodes[std::size_t(b)] / double(m);
        }
        return g;
    }
};

} // namespace fredholm
