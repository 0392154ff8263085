#pragma once

// Scalar symbols phi(z) on the unit circle.
//
// A Symbol owns Fourier coefficient access for both phi and 1/phi, its
// winding number, sup norms, and the coefficient-decay bound that sizes
// every truncation downstream.  Supported kinds:
//
//   laurent  - finite Laurent polynomial, coefficients given explicitly
//   bessel   - phi(z) = exp(t(z - 1/z)),  phi_j = J_j(2t)
//   gessel   - phi(z) = exp(t(z + 1/z)),  phi_j = I_j(2t)
//   product  - pointwise product of factors
//   power    - phi(z) = base(z^m), coefficients spread onto multiples of m
//
// Symbols are immutable after construction; coefficient memoization is
// mutex-guarded so concurrent readers are safe.

#include "fredholm/bessel.hpp"
#include "fredholm/errors.hpp"
#include "fredholm/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace fredholm {

enum class CoeffSide { Direct, Inverse };

enum class SymbolKind { Laurent, Bessel, Gessel, Product, Power };

inline constexpr long kDefaultResolution = 4096;
inline constexpr long kMaxResolution = 1L << 20;
inline constexpr double kVanishTol = 1e-12;

// Integer power by repeated squaring (n may be negative).
inline Cplx ipow(Cplx z, long n)
{
    if (n < 0) return 1.0 / ipow(z, -n);
    Cplx r(1.0), b = z;
    for (long e = n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

struct WindingResult {
    int winding = 0;
    std::vector<double> phase_increments; // radians per grid step
    double confidence = 0.0;              // |accumulated - 2*pi*winding|
    bool reliable() const { return confidence < 0.1 * 2.0 * std::numbers::pi; }
};

class Symbol {
public:
    static Symbol laurent(std::map<long, Cplx> coeffs)
    {
        bool any = false;
        for (const auto& [d, c] : coeffs) any = any || std::abs(c) != 0.0;
        if (!any) throw EmptyCoefficients("laurent symbol has no nonzero coefficient");
        auto impl = std::make_shared<Impl>();
        impl->kind = SymbolKind::Laurent;
        impl->coeffs = std::move(coeffs);
        return finish(std::move(impl));
    }

    static Symbol identity() { return laurent({{0, Cplx(1.0)}}); }

    static Symbol monomial(long k, Cplx c = Cplx(1.0)) { return laurent({{k, c}}); }

    static Symbol bessel(double t)
    {
        if (t < 0.0) throw std::invalid_argument("bessel symbol requires t >= 0");
        auto impl = std::make_shared<Impl>();
        impl->kind = SymbolKind::Bessel;
        impl->t = t;
        return finish(std::move(impl));
    }

    static Symbol gessel(double t)
    {
        if (t < 0.0) throw std::invalid_argument("gessel symbol requires t >= 0");
        auto impl = std::make_shared<Impl>();
        impl->kind = SymbolKind::Gessel;
        impl->t = t;
        return finish(std::move(impl));
    }

    static Symbol product(std::vector<Symbol> factors)
    {
        if (factors.empty()) throw EmptyCoefficients("product symbol requires at least one factor");
        auto impl = std::make_shared<Impl>();
        impl->kind = SymbolKind::Product;
        impl->factors = std::move(factors);
        return finish(std::move(impl));
    }

    // z -> base(z^m)
    static Symbol power(const Symbol& base, int m)
    {
        if (m < 1) throw std::invalid_argument("power symbol requires m >= 1");
        if (m == 1) return base;
        auto impl = std::make_shared<Impl>();
        impl->kind = SymbolKind::Power;
        impl->factors = {base};
        impl->power_m = m;
        return finish(std::move(impl));
    }

    SymbolKind kind() const { return impl_->kind; }
    double t() const { return impl_->t; }
    int power_m() const { return impl_->power_m; }
    const Symbol& power_base() const { return impl_->factors.at(0); }
    long resolution() const
    {
        std::lock_guard lock(impl_->mu);
        return impl_->resolution;
    }

    // phi(z), evaluated in closed form.
    Cplx operator()(Cplx z) const { return impl_->eval(z); }
    Cplx eval_inverse(Cplx z) const { return 1.0 / impl_->eval(z); }

    // phi_j (Direct) or (phi^{-1})_j (Inverse).
    Cplx fourier_coeff(CoeffSide side, long j) const { return impl_->coeff(side, j); }

    double sup_norm(CoeffSide side) const { return impl_->sup_norm(side); }

    // phi'(z)/phi(z) from the differentiated coefficient series.
    Cplx log_derivative(Cplx z) const;

    friend WindingResult winding_number(const Symbol& sym);
    friend long decay_bound(const Symbol& sym, double tol);

private:
    struct Impl {
        SymbolKind kind = SymbolKind::Laurent;
        std::map<long, Cplx> coeffs;  // laurent
        double t = 0.0;               // bessel / gessel
        std::vector<Symbol> factors;  // product / power base
        int power_m = 1;

        mutable std::mutex mu;
        mutable long resolution = 0;
        mutable std::vector<Cplx> table_direct;  // FFT coefficients, index (j mod R)
        mutable std::vector<Cplx> table_inverse;
        mutable std::vector<double> jtab;        // J_k(2t) or I_k(2t)
        mutable double sup_direct = -1.0, sup_inverse = -1.0;
        mutable long logderiv_J = -1;
        mutable std::map<double, long> decay_cache;

        Cplx eval(Cplx z) const
        {
            switch (kind) {
            case SymbolKind::Laurent: {
                Cplx v(0.0);
                for (const auto& [d, c] : coeffs) v += c * ipow(z, d);
                return v;
            }
            case SymbolKind::Bessel:
                return std::exp(t * (z - 1.0 / z));
            case SymbolKind::Gessel:
                return std::exp(t * (z + 1.0 / z));
            case SymbolKind::Product: {
                Cplx v(1.0);
                for (const auto& f : factors) v *= f(z);
                return v;
            }
            case SymbolKind::Power:
                return factors[0](ipow(z, power_m));
            }
            return Cplx(0.0);
        }

        void grow_bessel_table(std::size_t jmax) const // caller holds mu
        {
            if (jtab.size() > jmax) return;
            const std::size_t target = std::max<std::size_t>(jmax + 1, 2 * jtab.size() + 64);
            jtab = (kind == SymbolKind::Bessel) ? bessel_j_table(2.0 * t, target - 1)
                                                : bessel_i_table(2.0 * t, target - 1);
        }

        void build_fft_tables(long R) const // caller holds mu
        {
            std::vector<Cplx> sd(static_cast<std::size_t>(R)), si(static_cast<std::size_t>(R));
            for (long u = 0; u < R; ++u) {
                const double th = 2.0 * std::numbers::pi * double(u) / double(R);
                const Cplx z = std::polar(1.0, th);
                const Cplx v = eval(z);
                sd[std::size_t(u)] = v;
                si[std::size_t(u)] = 1.0 / v;
            }
            table_direct = fourier_coefficients(std::move(sd));
            table_inverse = fourier_coefficients(std::move(si));
            resolution = R;
        }

        bool needs_fft() const
        {
            return kind == SymbolKind::Laurent || kind == SymbolKind::Product;
        }

        void ensure_resolution(long R) const // caller holds mu
        {
            if (resolution >= R) return;
            long next = std::max(resolution, kDefaultResolution);
            while (next < R) {
                next *= 2;
                if (next > kMaxResolution)
                    throw IndexOutOfResolution("requested coefficient beyond maximum FFT resolution");
            }
            if (needs_fft())
                build_fft_tables(next);
            else
                resolution = next;
        }

        Cplx coeff(CoeffSide side, long j) const
        {
            if (kind == SymbolKind::Power) { // delegate; base has its own lock
                if (j % power_m != 0) return Cplx(0.0);
                return factors[0].fourier_coeff(side, j / power_m);
            }
            std::lock_guard lock(mu);
            if (std::abs(j) > resolution / 2) ensure_resolution(2 * std::abs(j) + 2);
            switch (kind) {
            case SymbolKind::Laurent:
                if (side == CoeffSide::Direct) {
                    auto it = coeffs.find(j);
                    return it == coeffs.end() ? Cplx(0.0) : it->second;
                }
                return table_inverse[std::size_t(((j % resolution) + resolution) % resolution)];
            case SymbolKind::Bessel: {
                const std::size_t a = std::size_t(std::abs(j));
                grow_bessel_table(a);
                double v = jtab[a];
                if (j < 0 && (a & 1)) v = -v;             // J_{-n} = (-1)^n J_n
                if (side == CoeffSide::Inverse && (j % 2 != 0)) v = -v;
                return Cplx(v);
            }
            case SymbolKind::Gessel: {
                const std::size_t a = std::size_t(std::abs(j));
                grow_bessel_table(a);
                double v = jtab[a];                        // I_{-n} = I_n
                if (side == CoeffSide::Inverse && (j % 2 != 0)) v = -v;
                return Cplx(v);
            }
            case SymbolKind::Product:
                return (side == CoeffSide::Direct ? table_direct : table_inverse)
                    [std::size_t(((j % resolution) + resolution) % resolution)];
            case SymbolKind::Power:
                break; // handled above
            }
            return Cplx(0.0);
        }

        double sup_norm(CoeffSide side) const
        {
            std::lock_guard lock(mu);
            if (sup_direct < 0.0) {
                double sd = 0.0, si = 0.0;
                const long R = kDefaultResolution;
                for (long u = 0; u < R; ++u) {
                    const double th = 2.0 * std::numbers::pi * double(u) / double(R);
                    const double av = std::abs(eval(std::polar(1.0, th)));
                    sd = std::max(sd, av);
                    si = std::max(si, 1.0 / av);
                }
                sup_direct = sd;
                sup_inverse = si;
            }
            return side == CoeffSide::Direct ? sup_direct : sup_inverse;
        }
    };

    static Symbol finish(std::shared_ptr<Impl> impl)
    {
        Symbol s;
        s.impl_ = std::move(impl);
        // Non-vanishing check on the working grid.
        double mn = std::numeric_limits<double>::max();
        const long R = kDefaultResolution;
        for (long u = 0; u < R; ++u) {
            const double th = 2.0 * std::numbers::pi * double(u) / double(R);
            mn = std::min(mn, std::abs(s.impl_->eval(std::polar(1.0, th))));
        }
        if (mn <= kVanishTol)
            throw ZeroOnCircle("symbol vanishes on the unit circle (|phi| <= 1e-12 at a grid node)");
        {
            std::lock_guard lock(s.impl_->mu);
            if (s.impl_->needs_fft())
                s.impl_->build_fft_tables(R);
            else
                s.impl_->resolution = R;
        }
        return s;
    }

    Symbol() = default;
    std::shared_ptr<Impl> impl_;
};

// Net phase winding of phi around the circle, with a confidence figure:
// the distance of the accumulated phase from the nearest multiple of 2*pi.
// Resolution doubles until the result is reliable.
inline WindingResult winding_number(const Symbol& sym)
{
    for (long R = kDefaultResolution; R <= kMaxResolution; R *= 2) {
        WindingResult res;
        res.phase_increments.reserve(static_cast<std::size_t>(R));
        Cplx prev = sym(Cplx(1.0));
        double total = 0.0;
        for (long u = 1; u <= R; ++u) {
            const double th = 2.0 * std::numbers::pi * double(u) / double(R);
            const Cplx cur = sym(std::polar(1.0, th));
            const double inc = std::arg(cur / prev);
            res.phase_increments.push_back(inc);
            total += inc;
            prev = cur;
        }
        const double twopi = 2.0 * std::numbers::pi;
        res.winding = int(std::lround(total / twopi));
        res.confidence = std::abs(total - twopi * double(res.winding));
        if (res.reliable()) return res;
    }
    throw UnreliableWinding("winding number did not stabilize at maximum resolution");
}

// Smallest probed J with
//   sum_{|l|>J} (|l|+1)(|phi_l| + |(phi^{-1})_l|) * max(||phi||,||1/phi||) < tol.
// This is the a-priori trace-norm control used to size lattice truncations.
inline long decay_bound(const Symbol& sym, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("decay_bound requires tol > 0");
    auto& impl = *sym.impl_;
    {
        std::lock_guard lock(impl.mu);
        auto it = impl.decay_cache.find(tol);
        if (it != impl.decay_cache.end()) return it->second;
    }
    const double m_inf = std::max(sym.sup_norm(CoeffSide::Direct), sym.sup_norm(CoeffSide::Inverse));
    // Coefficients at the FFT rounding floor carry no signal; count them as 0
    // or the weighted tail sum would never drop below tight tolerances.
    const double floor_d = 1e-15 * std::max(1.0, sym.sup_norm(CoeffSide::Direct));
    const double floor_i = 1e-15 * std::max(1.0, sym.sup_norm(CoeffSide::Inverse));
    auto mag_of = [&](CoeffSide side, long l) {
        const double m = std::abs(sym.fourier_coeff(side, l));
        return m > (side == CoeffSide::Direct ? floor_d : floor_i) ? m : 0.0;
    };
    const long j_probe = 4096;
    std::vector<double> suffix(std::size_t(j_probe) + 2, 0.0);
    for (long l = j_probe; l >= 0; --l) {
        double mag = mag_of(CoeffSide::Direct, l) + mag_of(CoeffSide::Inverse, l);
        if (l > 0) mag += mag_of(CoeffSide::Direct, -l) + mag_of(CoeffSide::Inverse, -l);
        suffix[std::size_t(l)] = suffix[std::size_t(l) + 1] + double(l + 1) * mag * m_inf;
    }
    for (long J = 0; J <= j_probe / 2; ++J) {
        if (suffix[std::size_t(J) + 1] < tol) {
            std::lock_guard lock(impl.mu);
            impl.decay_cache[tol] = J;
            return J;
        }
    }
    throw NoConvergence("coefficient tail did not drop below tolerance within the resolution budget");
}

inline Cplx Symbol::log_derivative(Cplx z) const
{
    long J;
    {
        std::lock_guard lock(impl_->mu);
        J = impl_->logderiv_J;
    }
    if (J < 0) {
        J = decay_bound(*this, 1e-14) + 2;
        std::lock_guard lock(impl_->mu);
        impl_->logderiv_J = J;
    }
    Cplx d(0.0);
    const Cplx zi = 1.0 / z;
    // phi'(z) = sum_j j phi_j z^{j-1}
    Cplx zp = ipow(z, J - 1);
    for (long j = J; j >= 1; --j) {
        d += double(j) * impl_->coeff(CoeffSide::Direct, j) * zp;
        zp *= zi;
    }
    zp = zi * zi;
    for (long j = -1; j >= -J; --j) {
        d += double(j) * impl_->coeff(CoeffSide::Direct, j) * zp;
        zp *= zi;
    }
    return d / impl_->eval(z);
}

} // namespace fredholm
