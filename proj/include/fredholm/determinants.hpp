#pragma once

// Determinant engines.
//
// Circle operators are evaluated as det(I - s M) with M the Nystrom matrix,
// on a doubling grid schedule 32 -> 64 -> ... -> 512 with Richardson-style
// stopping on successive agreement (spectral convergence makes the doubling
// difference a reliable error proxy).
//
// Lattice operators are evaluated over a finite window whose size is driven
// by the trace-norm tail bound of the discarded part; the reported error
// estimate includes that tail plus condition-scaled machine epsilon.

#include "fredholm/kernels.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <functional>
#include <limits>

namespace fredholm {

struct DetResult {
    Cplx value{0.0};
    double error_estimate = 0.0;
    long resolution_used = 0; // grid points (circle) or window size (lattice)
    bool converged = false;
};

namespace detail {

struct LuDet {
    Cplx det;
    double cond_proxy; // max|U_ii| / min|U_ii|
};

inline LuDet lu_det(const Eigen::MatrixXcd& A)
{
    if (!A.allFinite()) throw NonFinite("determinant of a matrix with non-finite entries");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const auto& diag = lu.matrixLU().diagonal();
    double mx = 0.0, mn = std::numeric_limits<double>::max();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        const double a = std::abs(diag[i]);
        mx = std::max(mx, a);
        mn = std::min(mn, a);
    }
    LuDet r;
    r.det = lu.determinant();
    r.cond_proxy = (mn > 0.0 && diag.size() > 0) ? mx / mn : 1.0 / std::numeric_limits<double>::epsilon();
    if (diag.size() == 0) r.cond_proxy = 1.0;
    return r;
}

} // namespace detail

inline Cplx det_dense(const Eigen::MatrixXcd& M)
{
    if (M.rows() == 0) return Cplx(1.0);
    return detail::lu_det(M).det;
}

inline const std::vector<int>& circle_grid_schedule()
{
    static const std::vector<int> grids{32, 64, 128, 256, 512};
    return grids;
}

namespace detail {

template <typename MatrixBuilder>
DetResult circle_det_engine(MatrixBuilder&& build, double tol)
{
    DetResult res;
    Cplx prev(0.0);
    bool have_prev = false;
    double cond = 1.0;
    for (int m : circle_grid_schedule()) {
        const Eigen::MatrixXcd A = build(m);
        const LuDet d = lu_det(A);
        cond = d.cond_proxy;
        if (have_prev) {
            const double diff = std::abs(d.det - prev);
            res.value = d.det;
            res.resolution_used = m;
            res.error_estimate =
                diff + cond * std::numeric_limits<double>::epsilon() * std::abs(d.det);
            if (diff < tol * std::max(1.0, std::abs(d.det))) {
                res.converged = true;
                return res;
            }
        }
        prev = d.det;
        have_prev = true;
    }
    res.converged = false;
    return res;
}

} // namespace detail

// det(1 - s K_n) by Nystrom discretization with grid doubling.
inline DetResult fredholm_det_circle(const Symbol& sym, long n, Cplx s, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("fredholm_det_circle requires tol > 0");
    return detail::circle_det_engine(
        [&](int m) {
            const QuadratureGrid grid = QuadratureGrid::circle(m);
            Eigen::MatrixXcd A = -s * nystrom_matrix(sym, n, grid);
            A.diagonal().array() += 1.0;
            return A;
        },
        tol);
}

// det(1 - sum_j (s_j - s_{j-1}) K_{n_j}), s_0 = 0.
inline DetResult fredholm_det_circle_multi(const Symbol& sym, const std::vector<long>& n_vec,
                                           const std::vector<Cplx>& s_vec, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("fredholm_det_circle_multi requires tol > 0");
    return detail::circle_det_engine(
        [&](int m) {
            const QuadratureGrid grid = QuadratureGrid::circle(m);
            Eigen::MatrixXcd A = -multi_kernel_matrix(sym, n_vec, s_vec, grid);
            A.diagonal().array() += 1.0;
            return A;
        },
        tol);
}

// Dense matrix of kernel entries on the inclusive index window [lo, hi].
inline Eigen::MatrixXcd lattice_window_matrix(const DiscreteKernel& kern, long lo, long hi)
{
    const long L = hi - lo + 1;
    Eigen::MatrixXcd A(L, L);
    for (long i = 0; i < L; ++i)
        for (long j = 0; j < L; ++j) A(i, j) = kern.entry(lo + i, lo + j);
    return A;
}

inline constexpr long kLatticeWindowCap = 600;

// Window [n, n+L-1] for side S (weight supported on [n, oo)), or
// [n-L, n-1] for side R (weight supported on (-oo, n-1]).  L grows until the
// trace-norm tail of the discarded part, scaled by the largest weight in
// play, drops below tol.
inline DetResult fredholm_det_lattice(const DiscreteKernel& kern, long n,
                                      const std::function<Cplx(long)>& weight, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("fredholm_det_lattice requires tol > 0");
    const bool side_s = kern.side() == KernelSide::S;

    long L = 16;
    double tail = 0.0, wmax = 0.0;
    for (;; L = std::min(2 * L, kLatticeWindowCap)) {
        wmax = 1e-300;
        for (long u = 0; u <= L; ++u) {
            const long i = side_s ? n + u : n - 1 - u;
            wmax = std::max(wmax, std::abs(weight(i)));
        }
        tail = kern.tail_bound(side_s ? n + L : n - L - 1) * wmax;
        if (tail < tol) break;
        if (L >= kLatticeWindowCap)
            throw NoConvergence("lattice window cap reached before tail bound met tolerance");
    }

    const long lo = side_s ? n : n - L;
    const long hi = side_s ? n + L - 1 : n - 1;
    Eigen::MatrixXcd A = lattice_window_matrix(kern, lo, hi);
    for (long i = 0; i < L; ++i) A.row(i) *= -weight(lo + i);
    A.diagonal().array() += 1.0;

    const detail::LuDet d = detail::lu_det(A);
    DetResult res;
    res.value = d.det;
    res.resolution_used = L;
    res.error_estimate =
        tail + d.cond_proxy * std::numeric_limits<double>::epsilon() * std::abs(d.det);
    res.converged = true;
    return res;
}

// Eigenvalues of the truncated window of the kernel, for polynomial-in-r
// evaluation of det(1 - r S_n) and its derivatives.  Hermitian windows go
// through the self-adjoint solver.
inline std::vector<Cplx> eig_lattice(const DiscreteKernel& kern, long n, long L)
{
    if (L > 2048) throw TooLarge("eig_lattice window exceeds cap");
    if (L <= 0) return {};
    const bool side_s = kern.side() == KernelSide::S;
    const long lo = side_s ? n : n - L;
    const long hi = side_s ? n + L - 1 : n - 1;
    const Eigen::MatrixXcd A = lattice_window_matrix(kern, lo, hi);

    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    std::vector<Cplx> out;
    out.reserve(static_cast<std::size_t>(L));
    if ((A - A.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * scale) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            out.emplace_back(es.eigenvalues()[i], 0.0);
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    }
    std::sort(out.begin(), out.end(),
              [](const Cplx& a, const Cplx& b) { return std::abs(a) > std::abs(b); });
    return out;
}

} // namespace fredholm
