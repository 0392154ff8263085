#pragma once

// Verification drivers: evaluate both sides of each determinant identity
// through independent engines (circle Nystrom vs lattice truncation) and
// report residuals with error budgets.
//
// Single interval:
//   det(1 - s K_n) = (1+s)^{n+#}  det(1 - s^2 S_n)          (form S, s != -1)
//                  = (1-s)^{-n-#} det(1 - s^2 R_n)          (form R, s != +1)
// Multi interval (0 = n_0 <= n_1 <= ... <= n_k, s_0 = 0):
//   det(1 - sum_j (s_j - s_{j-1}) K_{n_j})
//     = (1+s_k)^{#} [prod_{j<k} (1+s_k-s_j)^{n_{j+1}-n_j}]
//       det(1 - (sum_j s_k s_j/(1+s_k-s_j) chi_{[n_j,n_{j+1})}) S)
// Colored: the circle side uses z -> phi(z^m), the lattice side the
// index-filtered colored kernel.
// Gessel chain: e^{-t^2} det(T_n) = 2^{-n} det(1-K_n) = det(1-chi_{[n,oo)}S)
// for phi(z) = exp(t(z-1/z)).

#include "fredholm/determinants.hpp"

#include <json.hpp>

#include <string>

namespace fredholm {

enum class IdentityId {
    SingleS,
    SingleR,
    Multi,
    ColoredS,
    ColoredR,
    GesselConsistency,
    Lambda2Consistency,
};

inline std::string to_string(IdentityId id)
{
    switch (id) {
    case IdentityId::SingleS: return "single_S";
    case IdentityId::SingleR: return "single_R";
    case IdentityId::Multi: return "multi";
    case IdentityId::ColoredS: return "colored_S";
    case IdentityId::ColoredR: return "colored_R";
    case IdentityId::GesselConsistency: return "gessel_consistency";
    case IdentityId::Lambda2Consistency: return "lambda2_consistency";
    }
    return "unknown";
}

struct IdentityReport {
    IdentityId id = IdentityId::SingleS;
    nlohmann::json params;
    Cplx lhs{0.0};
    Cplx rhs{0.0};
    Cplx prefactor{1.0};
    double residual = 0.0;
    double budget = 0.0;
    bool pass = false;

    nlohmann::json to_json() const
    {
        return {{"identity_id", to_string(id)},
                {"params", params},
                {"lhs", {lhs.real(), lhs.imag()}},
                {"rhs", {rhs.real(), rhs.imag()}},
                {"residual", residual},
                {"budget", budget},
                {"pass", pass}};
    }
};

inline constexpr double kPrefactorMargin = 1e-3;

namespace detail {

inline double engine_tol(double tol) { return std::clamp(tol * 1e-2, 1e-13, 1e-4); }

// Relative residual with floor 1, so near-zero sides stay meaningful.
inline double rel_residual(Cplx a, Cplx b)
{
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline void finalize(IdentityReport& rep, double tol, double lhs_err, double rhs_err)
{
    rep.residual = rel_residual(rep.lhs, rep.rhs);
    rep.budget = (lhs_err + rhs_err) /
                 std::max({1.0, std::abs(rep.lhs), std::abs(rep.rhs)});
    rep.pass = rep.residual <= std::max(tol, rep.budget);
}

} // namespace detail

inline IdentityReport verify_single(const Symbol& sym, long n, Cplx s, KernelSide form,
                                    double tol)
{
    const int w = winding_number(sym).winding;
    const Cplx one(1.0);
    if (form == KernelSide::S && std::abs(one + s) <= kPrefactorMargin)
        throw NearSingularPrefactor("verify_single form S requires |1+s| > 1e-3");
    if (form == KernelSide::R && std::abs(one - s) <= kPrefactorMargin)
        throw NearSingularPrefactor("verify_single form R requires |1-s| > 1e-3");

    const double etol = detail::engine_tol(tol);
    const DetResult lhs = fredholm_det_circle(sym, n, s, etol);

    DiscreteKernel kern(sym, form);
    const Cplx s2 = s * s;
    const DetResult lat = fredholm_det_lattice(kern, n, [s2](long) { return s2; }, etol);

    IdentityReport rep;
    rep.id = form == KernelSide::S ? IdentityId::SingleS : IdentityId::SingleR;
    rep.prefactor = form == KernelSide::S ? ipow(one + s, n + w) : ipow(one - s, -(n + w));
    rep.lhs = lhs.value;
    rep.rhs = rep.prefactor * lat.value;
    rep.params = {{"n", n}, {"s", {s.real(), s.imag()}}, {"winding", w}};
    detail::finalize(rep, tol, lhs.error_estimate,
                     std::abs(rep.prefactor) * lat.error_estimate);
    return rep;
}

inline IdentityReport verify_multi(const Symbol& sym, const std::vector<long>& n_vec,
                                   const std::vector<Cplx>& s_vec, double tol)
{
    const std::size_t k = n_vec.size();
    if (k == 0 || s_vec.size() != k)
        throw LengthMismatch("verify_multi: breakpoint and weight vectors must match");
    for (std::size_t j = 1; j < k; ++j)
        if (n_vec[j] < n_vec[j - 1])
            throw std::invalid_argument("verify_multi: breakpoints must be nondecreasing");
    if (n_vec[0] < 0) throw std::invalid_argument("verify_multi: breakpoints must be >= 0");

    const Cplx one(1.0);
    const Cplx sk = s_vec.back();
    if (std::abs(one + sk) <= kPrefactorMargin)
        throw SingularWeight("verify_multi requires |1+s_k| > 1e-3");
    for (std::size_t j = 0; j + 1 < k; ++j)
        if (std::abs(one + sk - s_vec[j]) <= kPrefactorMargin)
            throw SingularWeight("verify_multi requires |1+s_k-s_j| > 1e-3");

    const int w = winding_number(sym).winding;
    const double etol = detail::engine_tol(tol);
    const DetResult lhs = fredholm_det_circle_multi(sym, n_vec, s_vec, etol);

    // prefactor: (1+s_k)^# prod_{j=0}^{k-1} (1+s_k-s_j)^{n_{j+1}-n_j}
    Cplx pref = ipow(one + sk, w);
    {
        Cplx sj(0.0); // s_0
        long nj = 0;  // n_0
        for (std::size_t j = 0; j < k; ++j) {
            pref *= ipow(one + sk - sj, n_vec[j] - nj);
            sj = s_vec[j];
            nj = n_vec[j];
        }
    }

    // lattice weight: s_k s_j / (1+s_k-s_j) on [n_j, n_{j+1})
    auto weight = [&](long i) -> Cplx {
        if (i < n_vec[0]) return Cplx(0.0);
        std::size_t j = 0;
        while (j + 1 < k && i >= n_vec[j + 1]) ++j;
        return sk * s_vec[j] / (one + sk - s_vec[j]);
    };
    DiscreteKernel kern(sym, KernelSide::S);
    const DetResult lat = fredholm_det_lattice(kern, n_vec[0], weight, etol);

    IdentityReport rep;
    rep.id = IdentityId::Multi;
    rep.prefactor = pref;
    rep.lhs = lhs.value;
    rep.rhs = pref * lat.value;
    nlohmann::json ns = nlohmann::json::array(), ss = nlohmann::json::array();
    for (long n : n_vec) ns.push_back(n);
    for (Cplx s : s_vec) ss.push_back({s.real(), s.imag()});
    rep.params = {{"n_vec", ns}, {"s_vec", ss}, {"winding", w}};
    detail::finalize(rep, tol, lhs.error_estimate, std::abs(pref) * lat.error_estimate);
    return rep;
}

inline IdentityReport verify_colored(const Symbol& sym, int m, long n, Cplx s, double tol,
                                     KernelSide form = KernelSide::S)
{
    if (m < 1) throw std::invalid_argument("verify_colored requires m >= 1");
    const Cplx one(1.0);
    if (form == KernelSide::S && std::abs(one + s) <= kPrefactorMargin)
        throw NearSingularPrefactor("verify_colored form S requires |1+s| > 1e-3");
    if (form == KernelSide::R && std::abs(one - s) <= kPrefactorMargin)
        throw NearSingularPrefactor("verify_colored form R requires |1-s| > 1e-3");

    // Exponent uses the base symbol's winding, as the identity is stated;
    // the lifted symbol z -> phi(z^m) itself winds m times as fast.
    const int w = winding_number(sym).winding;
    const double etol = detail::engine_tol(tol);
    const Symbol lifted = Symbol::power(sym, m);
    const DetResult lhs = fredholm_det_circle(lifted, n, s, etol);

    DiscreteKernel kern(sym, form, m);
    const Cplx s2 = s * s;
    const DetResult lat = fredholm_det_lattice(kern, n, [s2](long) { return s2; }, etol);

    // Block-structure probes: entries with mismatched residues vanish
    // exactly, matching residues reproduce the base kernel entry.
    bool blocks_ok = true;
    DiscreteKernel base(sym, form, 1);
    for (long bi = 0; bi <= 2 && blocks_ok; ++bi)
        for (long bj = 0; bj <= 2 && blocks_ok; ++bj)
            for (int r = 0; r < m && blocks_ok; ++r)
                for (int rp = 0; rp < m && blocks_ok; ++rp) {
                    const Cplx e = kern.entry(m * bi + r, m * bj + rp);
                    if (r != rp)
                        blocks_ok = (e == Cplx(0.0));
                    else
                        blocks_ok = (e == base.entry(bi, bj));
                }

    IdentityReport rep;
    rep.id = form == KernelSide::S ? IdentityId::ColoredS : IdentityId::ColoredR;
    rep.prefactor = form == KernelSide::S ? ipow(one + s, n + w) : ipow(one - s, -(n + w));
    rep.lhs = lhs.value;
    rep.rhs = rep.prefactor * lat.value;
    rep.params = {{"m", m},
                  {"n", n},
                  {"s", {s.real(), s.imag()}},
                  {"winding", w},
                  {"blocks_ok", blocks_ok}};
    detail::finalize(rep, tol, lhs.error_estimate,
                     std::abs(rep.prefactor) * lat.error_estimate);
    rep.pass = rep.pass && blocks_ok;
    return rep;
}

// Three expressions for Prob(lambda_1 <= n) under the Poissonized Plancherel
// measure at intensity t^2:
//   e^{-t^2} det(T_n)  (Toeplitz, entries I_{p-q}(2t))
//   2^{-n} det(1-K_n)  (circle, phi = exp(t(z-1/z)), s = 1)
//   det(1-S_n)         (lattice window)
// Residual is the maximum pairwise relative difference.
inline IdentityReport verify_gessel_chain(double t, long n, double tol)
{
    if (n < 1) throw std::invalid_argument("verify_gessel_chain requires n >= 1");
    const double etol = detail::engine_tol(tol);

    const Symbol ges = Symbol::gessel(t);
    const Cplx toeplitz_val = std::exp(-t * t) * det_dense(toeplitz(ges, n).dense);

    const Symbol bes = Symbol::bessel(t);
    const DetResult circ = fredholm_det_circle(bes, n, Cplx(1.0), etol);
    const Cplx circle_val = std::pow(2.0, -double(n)) * circ.value;

    DiscreteKernel kern(bes, KernelSide::S);
    const DetResult lat = fredholm_det_lattice(kern, n, [](long) { return Cplx(1.0); }, etol);

    IdentityReport rep;
    rep.id = IdentityId::GesselConsistency;
    rep.prefactor = std::pow(2.0, -double(n));
    rep.lhs = toeplitz_val;
    rep.rhs = lat.value;
    rep.residual = std::max({detail::rel_residual(toeplitz_val, circle_val),
                             detail::rel_residual(circle_val, lat.value),
                             detail::rel_residual(toeplitz_val, lat.value)});
    rep.budget = (std::pow(2.0, -double(n)) * circ.error_estimate + lat.error_estimate +
                  1e-14 * std::abs(toeplitz_val)) /
                 std::max({1.0, std::abs(toeplitz_val), std::abs(lat.value)});
    rep.pass = rep.residual <= std::max(tol, rep.budget);
    rep.params = {{"t", t},
                  {"n", n},
                  {"toeplitz", {toeplitz_val.real(), toeplitz_val.imag()}},
                  {"circle", {circle_val.real(), circle_val.imag()}},
                  {"lattice", {lat.value.real(), lat.value.imag()}}};
    return rep;
}

} // namespace fredholm
