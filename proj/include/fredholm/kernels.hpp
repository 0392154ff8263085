#pragma once

// Kernel builders.
//
// Circle side: the integral operator with kernel
//   K_n(z,w) = (1 - z^n phi(z) w^{-n} phi(w)^{-1}) / (2 pi i (z - w)),
// discretized by Nystrom's method on the trapezoid grid.  On the diagonal
// the kernel takes its analytic limit -(n/z + phi'(z)/phi(z)) / (2 pi i).
//
// Lattice side: the discrete kernels
//   S(i,j) = sum_{k>=1} (phi^{-1})_{i+k} phi_{-j-k}
//   R(i,j) = sum_{k<=0} (phi^{-1})_{i+k} phi_{-j-k}
// and their m-colored variants with coefficients at non-integral index/m
// set to zero, which filters entries to i = j (mod m).
//
// Also the n x n Toeplitz matrix with entries c_{p-q} = phi_{p-q}.

#include "fredholm/quadrature.hpp"
#include "fredholm/symbol.hpp"

#include <Eigen/Dense>

#include <functional>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace fredholm {

inline constexpr double kDiagonalMergeTol = 1e-8;
inline constexpr double kOnCircleTol = 1e-12;

inline Cplx k_kernel_value(const Symbol& sym, long n, Cplx z, Cplx w)
{
    if (std::abs(std::abs(z) - 1.0) > kOnCircleTol || std::abs(std::abs(w) - 1.0) > kOnCircleTol)
        throw std::invalid_argument("k_kernel_value: arguments must lie on the unit circle");
    const Cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
    if (std::abs(z - w) < kDiagonalMergeTol)
        return -(double(n) / z + sym.log_derivative(z)) / two_pi_i;
    return (1.0 - ipow(z, n) * sym(z) * ipow(w, -n) * sym.eval_inverse(w)) / (two_pi_i * (z - w));
}

// M[a][b] = K_n(z_a, z_b) * weight_b, so that det(I - s M) approximates
// det(1 - s K_n) with spectral accuracy for analytic symbols.
inline Eigen::MatrixXcd nystrom_matrix(const Symbol& sym, long n, const QuadratureGrid& grid)
{
    const int m = grid.m_points;
    Eigen::MatrixXcd M(m, m);
    std::vector<Cplx> zn(static_cast<std::size_t>(m)), phi(static_cast<std::size_t>(m)), phi_inv(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        const Cplx z = grid.nodes[std::size_t(a)];
        zn[std::size_t(a)] = ipow(z, n);
        phi[std::size_t(a)] = sym(z);
        phi_inv[std::size_t(a)] = 1.0 / phi[std::size_t(a)];
    }
    const Cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
    for (int a = 0; a < m; ++a) {
        const Cplx z = grid.nodes[std::size_t(a)];
        const Cplx za = zn[std::size_t(a)] * phi[std::size_t(a)];
        for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            const Cplx w = grid.nodes[std::size_t(b)];
            const Cplx val = (1.0 - za * phi_inv[std::size_t(b)] / zn[std::size_t(b)]) /
                             (two_pi_i * (z - w));
            M(a, b) = val * grid.weights[std::size_t(b)];
        }
        const Cplx diag = -(double(n) / z + sym.log_derivative(z)) / two_pi_i;
        M(a, a) = diag * grid.weights[std::size_t(a)];
    }
    return M;
}

// Nystrom matrix of sum_j (s_j - s_{j-1}) K_{n_j}, with s_0 = 0.
inline Eigen::MatrixXcd multi_kernel_matrix(const Symbol& sym,
                                            const std::vector<long>& breakpoints,
                                            const std::vector<Cplx>& weights,
                                            const QuadratureGrid& grid)
{
    if (breakpoints.size() != weights.size() || breakpoints.empty())
        throw LengthMismatch("multi_kernel_matrix: breakpoints and weights must have equal, nonzero length");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(grid.m_points, grid.m_points);
    Cplx prev(0.0);
    for (std::size_t j = 0; j < breakpoints.size(); ++j) {
        const Cplx c = weights[j] - prev;
        prev = weights[j];
        if (std::abs(c) == 0.0) continue;
        M += c * nystrom_matrix(sym, breakpoints[j], grid);
    }
    return M;
}

enum class KernelSide { S, R };

// Lazily evaluated lattice kernel with memoized entries.  For colors > 1
// the kernel is the index-filtered colored variant: nonzero only when
// i = j (mod m), where the surviving terms reduce to the base sum.
class DiscreteKernel {
public:
    explicit DiscreteKernel(Symbol sym, KernelSide side = KernelSide::S, int colors = 1,
                            double entry_tol = 1e-15)
        : sym_(std::move(sym)), side_(side), colors_(colors)
    {
        cutoff_ = decay_bound(sym_, entry_tol);
    }

    const Symbol& symbol() const { return sym_; }
    KernelSide side() const { return side_; }
    int colors() const { return colors_; }
    long cutoff() const { return cutoff_; }

    Cplx entry(long i, long j) const
    {
        if (colors_ > 1) {
            const long m = colors_;
            if (((i - j) % m) != 0) return Cplx(0.0);
            i = floor_div(i, m);
            j = floor_div(j, m);
        }
        const std::uint64_t key = pack(i, j);
        {
            std::lock_guard lock(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        const Cplx v = base_entry(i, j);
        std::lock_guard lock(mu_);
        memo_.emplace(key, v);
        return v;
    }

    // Trace-norm bound for the discarded part of the kernel when rows/columns
    // beyond `p` (side S: indices >= p; side R: indices <= p) are dropped:
    //   S:  ||chi_{[p,oo)} S||_1 <= sum_{l>=p+1} (|l|+|p|)|phi_{-l}| * ||phi^{-1}||_inf
    //   R:  ||chi_{(-oo,p]} R||_1 <= sum_{l<=p}  (|l|+|p|)|phi_{-l}| * ||phi^{-1}||_inf
    double tail_bound(long p) const
    {
        if (colors_ > 1) return double(colors_) * base_tail(floor_div(p, colors_));
        return base_tail(p);
    }

    static long floor_div(long a, long b)
    {
        long q = a / b, r = a % b;
        return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
    }

private:
    Cplx base_entry(long i, long j) const
    {
        const long kmax = cutoff_ + std::max(std::abs(i), std::abs(j)) + 2;
        Cplx sum(0.0);
        if (side_ == KernelSide::S) {
            for (long k = 1; k <= kmax; ++k)
                sum += sym_.fourier_coeff(CoeffSide::Inverse, i + k) *
                       sym_.fourier_coeff(CoeffSide::Direct, -j - k);
        } else {
            for (long k = 0; k >= -kmax; --k)
                sum += sym_.fourier_coeff(CoeffSide::Inverse, i + k) *
                       sym_.fourier_coeff(CoeffSide::Direct, -j - k);
        }
        return sum;
    }

    double base_tail(long p) const
    {
        const double inv_norm = sym_.sup_norm(CoeffSide::Inverse);
        const long span = cutoff_ + std::abs(p) + 8;
        double s = 1e-15 * (std::abs(double(p)) + 1.0); // slack for the unprobed far tail
        if (side_ == KernelSide::S) {
            for (long l = p + 1; l <= p + span; ++l)
                s += (std::abs(double(l)) + std::abs(double(p))) *
                     std::abs(sym_.fourier_coeff(CoeffSide::Direct, -l));
        } else {
            for (long l = p + 1; l >= p - span; --l)
                s += (std::abs(double(l)) + std::abs(double(p)) + 1.0) *
                     std::abs(sym_.fourier_coeff(CoeffSide::Direct, -l));
        }
        return s * inv_norm;
    }

    static std::uint64_t pack(long i, long j)
    {
        const std::uint64_t a = std::uint64_t(std::uint32_t(int(i)));
        const std::uint64_t b = std::uint64_t(std::uint32_t(int(j)));
        return (a << 32) | b;
    }

    Symbol sym_;
    KernelSide side_;
    int colors_;
    long cutoff_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::uint64_t, Cplx> memo_;
};

inline Cplx s_entry(const DiscreteKernel& kern, long i, long j) { return kern.entry(i, j); }

struct ToeplitzMatrix {
    long n = 0;
    Eigen::MatrixXcd dense;
};

// n x n Toeplitz matrix with (p,q) entry phi_{p-q}; exactly constant along
// diagonals by construction.
inline ToeplitzMatrix toeplitz(const Symbol& sym, long n)
{
    ToeplitzMatrix T;
    T.n = n;
    T.dense.resize(n, n);
    std::vector<Cplx> c(static_cast<std::size_t>(2 * n - 1));
    for (long k = -(n - 1); k <= n - 1; ++k)
        c[std::size_t(k + n - 1)] = sym.fourier_coeff(CoeffSide::Direct, k);
    for (long p = 0; p < n; ++p)
        for (long q = 0; q < n; ++q) T.dense(p, q) = c[std::size_t(p - q + n - 1)];
    return T;
}

} // namespace fredholm
