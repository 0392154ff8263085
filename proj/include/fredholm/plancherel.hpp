#pragma once

// Poissonized Plancherel probabilities through the discrete kernel of the
// symbol phi(z) = exp(t(z - 1/z)).
//
// Row CDFs: with W the window starting at n-k+1,
//   Prob(lambda_k <= n) = sum_{j=0}^{k-1} (-1)^j [u^j] det(1 - r S_W),  u = r-1,
// i.e. the probability of at most k-1 points of the determinantal process
// {lambda_j - j} in [n-k+1, oo).  The polynomial in u is evaluated exactly
// from the eigenvalues of the truncated window; Cauchy-contour derivatives
// provide an independent cross-check path.
//
// Joint CDFs: sum over the Catalan-sized order set Lambda_k of mixed Taylor
// coefficients of det(1 + (sum_l s_l chi_{(a_l, a_{l-1}]}) S) at s_l = -1,
// computed by tensor-product Cauchy contours (radius 0.5, 32 nodes).

#include "fredholm/determinants.hpp"
#include "fredholm/identities.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <utility>

namespace fredholm {

inline double scaled_x(long n, double t)
{
    if (n < 1) throw std::invalid_argument("scaled_x requires n >= 1");
    return (double(n) - 2.0 * t) * std::cbrt(2.0) / std::cbrt(double(n));
}

// Multi-orders {n in N_0^k : sum_{j<=r} n_j <= r-1 for r = 1..k}; their
// number is the Catalan number C_k (1, 2, 5, 14, ...).
inline std::vector<std::vector<int>> lambda_orders(int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int r, int partial) -> void {
        if (r == k) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; partial + v <= r; ++v) { // sum over first r+1 entries <= r
            cur.push_back(v);
            self(self, r + 1, partial + v);
            cur.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

// Coefficients c_0..c_D of prod_j ((1-a_j) - a_j u); with u = r-1 this is
// det(1 - r S) restricted to the window, and (-1)^j c_j is the probability
// of exactly j points in the window.
inline std::vector<double> occupancy_polynomial(const std::vector<double>& eigs, long max_deg = -1)
{
    const long D = max_deg < 0 ? long(eigs.size()) : std::min<long>(max_deg, long(eigs.size()));
    std::vector<double> c(std::size_t(D) + 1, 0.0);
    c[0] = 1.0;
    long deg = 0;
    for (double a : eigs) {
        const double beta = 1.0 - a;
        deg = std::min(deg + 1, D);
        for (long d = deg; d >= 1; --d)
            c[std::size_t(d)] = c[std::size_t(d)] * beta - c[std::size_t(d - 1)] * a;
        c[0] *= beta;
    }
    return c;
}

class PoissonizedModel {
public:
    explicit PoissonizedModel(double t)
        : t_(t), sym_(Symbol::bessel(t)), kern_(sym_, KernelSide::S)
    {
    }

    double t() const { return t_; }
    const Symbol& symbol() const { return sym_; }
    const DiscreteKernel& kernel() const { return kern_; }

    struct Spectrum {
        long window = 0;              // truncation size L, window [n0, n0+L-1]
        std::vector<double> eigs;     // real spectrum of the Hermitian window
    };

    // Eigenvalues of the truncated S_{n0}; the window is sized from the
    // trace-norm tail with headroom for contour weights up to |s| = 1.6.
    const Spectrum& spectrum(long n0) const
    {
        {
            std::lock_guard lock(mu_);
            auto it = spectra_.find(n0);
            if (it != spectra_.end()) return it->second;
        }
        Spectrum sp;
        sp.window = window_size(n0);
        std::vector<Cplx> ev = eig_lattice(kern_, n0, sp.window);
        sp.eigs.reserve(ev.size());
        for (const Cplx& e : ev) sp.eigs.push_back(e.real());
        std::lock_guard lock(mu_);
        return spectra_.emplace(n0, std::move(sp)).first->second;
    }

    long window_size(long n0) const
    {
        long L = 16;
        for (;;) {
            if (kern_.tail_bound(n0 + L) * 1.6 < 5e-14) return L;
            if (L >= kLatticeWindowCap)
                throw NoConvergence("lattice window cap reached sizing a Plancherel window");
            L = std::min(2 * L, kLatticeWindowCap);
        }
    }

private:
    double t_;
    Symbol sym_;
    DiscreteKernel kern_;
    mutable std::mutex mu_;
    mutable std::map<long, Spectrum> spectra_;
};

// d^j/dr^j at r=1 of det(1 - r S_{n0}), j = 0..jmax, from the eigenvalue
// polynomial (exact elementary-symmetric recursion).
inline std::vector<double> det_derivs_eig(const PoissonizedModel& model, long n0, int jmax)
{
    const auto& sp = model.spectrum(n0);
    const auto c = occupancy_polynomial(sp.eigs, jmax);
    std::vector<double> d(std::size_t(jmax) + 1, 0.0);
    double fact = 1.0;
    for (int j = 0; j <= jmax; ++j) {
        if (j > 0) fact *= double(j);
        d[std::size_t(j)] = j < int(c.size()) ? fact * c[std::size_t(j)] : 0.0;
    }
    return d;
}

// Same derivatives by the Cauchy contour
//   d^k/dr^k|_{r=1} det(1-r S_n) = k!/(2 pi i) \oint det(1-s S_n)/(s-1)^{k+1} ds,
// with det(1 - s S_n) evaluated by dense LU at each contour node, so the
// path is independent of the eigensolver.
inline std::vector<double> det_derivs_contour(const PoissonizedModel& model, long n0, int jmax,
                                              double radius = 0.5, int nodes = 32)
{
    const long L = model.window_size(n0);
    const Eigen::MatrixXcd S = lattice_window_matrix(model.kernel(), n0, n0 + L - 1);
    std::vector<Cplx> taylor(std::size_t(jmax) + 1, Cplx(0.0));
    for (int u = 0; u < nodes; ++u) {
        const double th = 2.0 * std::numbers::pi * double(u) / double(nodes);
        const Cplx s = 1.0 + std::polar(radius, th);
        Eigen::MatrixXcd A = -s * S;
        A.diagonal().array() += 1.0;
        const Cplx f = det_dense(A);
        for (int j = 0; j <= jmax; ++j)
            taylor[std::size_t(j)] += f * std::polar(1.0, -double(j) * th);
    }
    std::vector<double> d(std::size_t(jmax) + 1, 0.0);
    double fact = 1.0;
    for (int j = 0; j <= jmax; ++j) {
        if (j > 0) fact *= double(j);
        d[std::size_t(j)] =
            fact * (taylor[std::size_t(j)] / (double(nodes) * std::pow(radius, j))).real();
    }
    return d;
}

// Prob(lambda_k <= n) at Poisson intensity t^2.
inline double row_cdf(const PoissonizedModel& model, int k, long n, double tol)
{
    if (k < 1 || k > 8) throw std::invalid_argument("row_cdf requires 1 <= k <= 8");
    if (!(tol > 0.0)) throw std::invalid_argument("row_cdf requires tol > 0");
    const long n0 = n - k + 1;
    const auto& sp = model.spectrum(n0);
    const auto c = occupancy_polynomial(sp.eigs, k - 1);
    double phi = 0.0;
    for (int j = 0; j < k; ++j) {
        const double q = (j % 2 == 0 ? 1.0 : -1.0) * c[std::size_t(j)];
        phi += q;
    }
    if (phi < -tol || phi > 1.0 + tol)
        throw OutOfRange("row_cdf outside [0,1] beyond tolerance; truncation failure");
    return phi;
}

// Stable upper-tail companion: Prob(lambda_k > n) as the sum of occupancy
// probabilities of k or more points, avoiding the 1 - (near 1) cancellation.
inline double row_tail(const PoissonizedModel& model, int k, long n)
{
    const long n0 = n - k + 1;
    const auto& sp = model.spectrum(n0);
    const auto c = occupancy_polynomial(sp.eigs);
    double tail = 0.0;
    for (std::size_t j = std::size_t(k); j < c.size(); ++j) {
        const double q = (j % 2 == 0 ? 1.0 : -1.0) * c[j];
        if (q > 0.0) tail += q;
    }
    return tail;
}

struct JointQuery {
    int k = 1;
    std::vector<double> a; // nonincreasing thresholds a_1 >= ... >= a_k; +inf allowed
};

// Prob(lambda_1 - 1 <= a_1, ..., lambda_k - k <= a_k).
inline double joint_cdf(const PoissonizedModel& model, const JointQuery& q, double tol)
{
    if (q.k < 1 || int(q.a.size()) != q.k)
        throw std::invalid_argument("joint_cdf: thresholds must have length k");
    for (int l = 1; l < q.k; ++l)
        if (q.a[std::size_t(l)] > q.a[std::size_t(l - 1)])
            throw std::invalid_argument("joint_cdf: thresholds must be nonincreasing");
    if (!(tol > 0.0)) throw std::invalid_argument("joint_cdf requires tol > 0");

    const double a_k = q.a.back();
    if (std::isinf(a_k)) return 1.0;

    const long lo = long(std::floor(a_k)) + 1;
    const long L = [&] {
        long w = 16;
        for (;;) {
            if (model.kernel().tail_bound(lo + w) * 1.6 < 5e-14) return w;
            if (w >= kLatticeWindowCap)
                throw NoConvergence("joint_cdf window cap reached");
            w = std::min(2 * w, kLatticeWindowCap);
        }
    }();
    const long hi = lo + L - 1;
    const Eigen::MatrixXcd S = lattice_window_matrix(model.kernel(), lo, hi);

    // band index of row i: the unique l with a_l < i <= a_{l-1} (a_0 = inf)
    auto band = [&](long i) -> int {
        for (int l = q.k; l >= 1; --l)
            if (double(i) > q.a[std::size_t(l - 1)]) return l;
        return 0; // unreachable for i > a_k
    };
    std::vector<int> row_band(static_cast<std::size_t>(L));
    for (long i = 0; i < L; ++i) row_band[std::size_t(i)] = band(lo + i);

    // f(s) = det(1 + sum_l s_l chi_l S) over the window
    auto f = [&](const std::vector<Cplx>& s) -> Cplx {
        Eigen::MatrixXcd A = S;
        for (long i = 0; i < L; ++i) A.row(i) *= s[std::size_t(row_band[std::size_t(i)] - 1)];
        A.diagonal().array() += 1.0;
        return det_dense(A);
    };

    const double radius = 0.5;
    const int nodes = 32;
    Cplx total(0.0);
    for (const auto& order : lambda_orders(q.k)) {
        std::vector<int> active;
        for (int l = 0; l < q.k; ++l)
            if (order[std::size_t(l)] > 0) active.push_back(l);

        // tensor-product trapezoid over the active coordinates extracts the
        // Taylor coefficient of prod (s_l + 1)^{order_l} at s = (-1,...,-1)
        Cplx acc(0.0);
        std::vector<int> idx(active.size(), 0);
        std::vector<Cplx> s(std::size_t(q.k), Cplx(-1.0));
        auto loop = [&](auto&& self, std::size_t d) -> void {
            if (d == active.size()) {
                Cplx weight(1.0);
                for (std::size_t ai = 0; ai < active.size(); ++ai) {
                    const double th =
                        2.0 * std::numbers::pi * double(idx[ai]) / double(nodes);
                    const int ord = order[std::size_t(active[ai])];
                    weight *= std::polar(1.0, -double(ord) * th) /
                              (double(nodes) * std::pow(radius, ord));
                }
                acc += f(s) * weight;
                return;
            }
            for (idx[d] = 0; idx[d] < nodes; ++idx[d]) {
                const double th = 2.0 * std::numbers::pi * double(idx[d]) / double(nodes);
                s[std::size_t(active[d])] = -1.0 + std::polar(radius, th);
                self(self, d + 1);
            }
            s[std::size_t(active[d])] = Cplx(-1.0);
        };
        loop(loop, 0);
        total += acc;
    }

    const double val = total.real();
    if (std::abs(total.imag()) > 1e-8 * std::max(1.0, std::abs(val)))
        throw OutOfRange("joint_cdf: contour sum has a non-negligible imaginary part");
    if (val < -tol || val > 1.0 + tol)
        throw OutOfRange("joint_cdf outside [0,1] beyond tolerance; truncation failure");
    return val;
}

// Two routes to Prob(lambda_2 <= n+1) - Prob(lambda_1 <= n):
//   circle side:  (-d/ds)|_{s=1} [(1+sqrt(s))^{-n} det(1 - sqrt(s) K_n)]
//   lattice side: (d/ds)|_{s=-1} det(1 + s chi_{[n,oo)} S)
inline IdentityReport lambda2_crosscheck(const PoissonizedModel& model, long n, double tol)
{
    if (n < 0) throw std::invalid_argument("lambda2_crosscheck requires n >= 0");
    const double etol = detail::engine_tol(tol);

    // lattice derivative from the eigenvalue polynomial in v = s+1
    const auto& sp = model.spectrum(n);
    double d_lattice = 0.0;
    {
        // det(1+sS) = prod((1-a_j) + a_j v); coefficient of v^1
        double c0 = 1.0, c1 = 0.0;
        for (double a : sp.eigs) {
            const double beta = 1.0 - a;
            c1 = c1 * beta + c0 * a;
            c0 *= beta;
        }
        d_lattice = c1;
    }

    // circle derivative via a Cauchy contour around s = 1
    const double radius = 0.25;
    const int nodes = 32;
    Cplx acc(0.0);
    for (int u = 0; u < nodes; ++u) {
        const double th = 2.0 * std::numbers::pi * double(u) / double(nodes);
        const Cplx s = 1.0 + std::polar(radius, th);
        const Cplx rt = std::sqrt(s);
        const DetResult det = fredholm_det_circle(model.symbol(), n, rt, etol);
        const Cplx g = ipow(1.0 + rt, -n) * det.value;
        acc += g * std::polar(1.0, -th);
    }
    const double d_circle = -(acc / (double(nodes) * radius)).real();

    IdentityReport rep;
    rep.id = IdentityId::Lambda2Consistency;
    rep.lhs = d_circle;
    rep.rhs = d_lattice;
    rep.prefactor = 1.0;
    rep.params = {{"t", model.t()}, {"n", n}};
    detail::finalize(rep, tol, etol, etol);
    return rep;
}

// Raw de-Poissonization sandwich values: Prob^Plan_N(lambda_k <= n) sits
// between phi at t_plus and phi at t_minus up to the lemma's constant,
// which is reported raw (treated as 1).
inline std::pair<double, double> depoissonization_bracket(long N, long n, int k, double tol)
{
    if (N < 4) throw std::invalid_argument("depoissonization_bracket requires N >= 4");
    const double t_minus = std::sqrt(double(N) - std::sqrt(double(N)));
    const double t_plus = std::sqrt(double(N) + std::sqrt(double(N)));
    PoissonizedModel m_minus(t_minus), m_plus(t_plus);
    const double low = row_cdf(m_plus, k, n, tol);
    const double high = row_cdf(m_minus, k, n, tol);
    return {low, high};
}

// E[xi_k^a] with xi_k = (lambda_k - 2t)/t^{1/3}, by summation by parts over
// the CDF on [n_lo, n_hi].  The window must capture all but 1e-8 of the mass.
inline double poissonized_moment(const PoissonizedModel& model, int k, int a, long n_lo,
                                 long n_hi)
{
    if (n_hi <= n_lo) throw std::invalid_argument("poissonized_moment: empty window");
    const double tol = 1e-9;
    std::vector<double> cdf(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (long n = n_lo; n <= n_hi; ++n) cdf[std::size_t(n - n_lo)] = row_cdf(model, k, n, tol);
    if (cdf.front() > 1e-8 || 1.0 - cdf.back() > 1e-8)
        throw WindowTooSmall("poissonized_moment window does not capture the CDF mass");

    const double t = model.t();
    const double scale = std::cbrt(t);
    auto xi = [&](long n) { return (double(n) - 2.0 * t) / scale; };

    double total = cdf.front() * std::pow(xi(n_lo), a);
    for (long n = n_lo + 1; n <= n_hi; ++n) {
        double delta = cdf[std::size_t(n - n_lo)] - cdf[std::size_t(n - n_lo - 1)];
        if (std::abs(delta) < 1e-14) delta = 0.0; // suppress cancellation noise
        total += delta * std::pow(xi(n), a);
    }
    return total;
}

enum class TailRegime { Upper, Lower };

struct TailProbeRow {
    long n = 0;
    double t = 0.0;
    double x = 0.0;
    double tail = 0.0;     // 1 - phi (Upper) or phi (Lower)
    double log_tail = 0.0;
    bool underflow = false;
};

struct TailProbeResult {
    std::vector<TailProbeRow> rows;
    double slope = 0.0;     // of log(tail) against |x|^{3/2}
    double intercept = 0.0;
    int fitted = 0;
};

// Qualitative decay probe: emits (x, log tail) rows for the samples and fits
// the slope of log(tail) against |x|^{3/2} by least squares.
inline TailProbeResult tail_probe(const PoissonizedModel& model, int k, TailRegime regime,
                                  const std::vector<std::pair<long, double>>& samples)
{
    TailProbeResult out;
    std::map<double, std::shared_ptr<PoissonizedModel>> models;
    auto model_for = [&](double t) -> const PoissonizedModel& {
        if (t == model.t()) return model;
        auto it = models.find(t);
        if (it == models.end())
            it = models.emplace(t, std::make_shared<PoissonizedModel>(t)).first;
        return *it->second;
    };

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [n, t] : samples) {
        if (t > 25.0) throw TooLarge("tail_probe samples require t <= 25");
        TailProbeRow row;
        row.n = n;
        row.t = t;
        row.x = scaled_x(n, t);
        const PoissonizedModel& m = model_for(t);
        row.tail = regime == TailRegime::Upper ? row_tail(m, k, n) : row_cdf(m, k, n, 1e-8);
        row.underflow = row.tail < 1e-15;
        if (!row.underflow) {
            row.log_tail = std::log(row.tail);
            const double u = std::pow(std::abs(row.x), 1.5);
            sx += u;
            sy += row.log_tail;
            sxx += u * u;
            sxy += u * row.log_tail;
            ++out.fitted;
        }
        out.rows.push_back(row);
    }
    if (out.fitted >= 2) {
        const double denom = double(out.fitted) * sxx - sx * sx;
        out.slope = (double(out.fitted) * sxy - sx * sy) / denom;
        out.intercept = (sy - out.slope * sx) / double(out.fitted);
    }
    return out;
}

} // namespace fredholm
