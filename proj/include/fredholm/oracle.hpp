#pragma once

// Exact combinatorial ground truth, independent of the determinant engines:
// partition enumeration, hook-length dimensions, exact (rational) Plancherel
// probabilities, Poissonized sums with explicit tail bounds, RSK insertion,
// patience sorting, and the colored-permutation score machinery.

#include "fredholm/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace fredholm::oracle {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxEnumerationN = 40;
inline constexpr int kMaxExactRationalN = 20;

struct Partition {
    std::vector<int> parts; // nonincreasing, positive

    int size() const
    {
        int s = 0;
        for (int p : parts) s += p;
        return s;
    }
    // lambda_k, 1-based; zero beyond the last row.
    int row(int k) const
    {
        return (k >= 1 && k <= int(parts.size())) ? parts[std::size_t(k - 1)] : 0;
    }
    int rows() const { return int(parts.size()); }
    bool operator==(const Partition&) const = default;
};

inline std::vector<Partition> enumerate_partitions(int n)
{
    if (n < 0 || n > kMaxEnumerationN)
        throw TooLarge("enumerate_partitions: N must be in [0, 40]");
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int remaining, int maxpart) -> void {
        if (remaining == 0) {
            out.push_back(Partition{cur});
            return;
        }
        for (int p = std::min(remaining, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, remaining - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

inline BigInt factorial(int n)
{
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Number of standard Young tableaux of shape lambda, via the hook length
// formula N! / prod(hooks).  Exact integer arithmetic throughout.
inline BigInt dim_syt(const Partition& lambda)
{
    const int n = lambda.size();
    if (n == 0) return 1;
    std::vector<int> conj(static_cast<std::size_t>(lambda.parts[0]), 0);
    for (int i = 0; i < lambda.rows(); ++i)
        for (int j = 0; j < lambda.parts[std::size_t(i)]; ++j) ++conj[std::size_t(j)];
    BigInt hooks = 1;
    for (int i = 0; i < lambda.rows(); ++i)
        for (int j = 0; j < lambda.parts[std::size_t(i)]; ++j) {
            const int arm = lambda.parts[std::size_t(i)] - j - 1;
            const int leg = conj[std::size_t(j)] - i - 1;
            hooks *= (arm + leg + 1);
        }
    return factorial(n) / hooks; // divides exactly
}

struct Rational {
    BigInt num = 0;
    BigInt den = 1;

    void reduce()
    {
        if (den < 0) { num = -num; den = -den; }
        BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    std::string str() const
    {
        return num.str() + "/" + den.str();
    }
    double to_double() const { return num.convert_to<double>() / den.convert_to<double>(); }
    // a/b <= c/d with positive denominators
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
    bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
};

// Plancherel probability of the predicate on Y_N: sum of d^2/N! over
// matching partitions, as an exact rational.
inline Rational plancherel_prob(int n, const std::function<bool(const Partition&)>& pred)
{
    if (n < 0 || n > kMaxExactRationalN)
        throw TooLarge("plancherel_prob: exact rational path requires N <= 20");
    Rational r;
    r.den = factorial(n);
    for (const Partition& p : enumerate_partitions(n)) {
        if (!pred(p)) continue;
        const BigInt d = dim_syt(p);
        r.num += d * d;
    }
    r.reduce();
    return r;
}

// Plancherel probability of the predicate as a double; valid for N <= 40.
inline double plancherel_prob_real(int n, const std::function<bool(const Partition&)>& pred)
{
    if (n < 0 || n > kMaxEnumerationN)
        throw TooLarge("plancherel_prob_real: N must be in [0, 40]");
    BigInt num = 0;
    for (const Partition& p : enumerate_partitions(n)) {
        if (!pred(p)) continue;
        const BigInt d = dim_syt(p);
        num += d * d;
    }
    const BigInt den = factorial(n);
    return num.convert_to<double>() / den.convert_to<double>();
}

// Poisson weight e^{-t^2} t^{2N} / N!.
inline double poisson_weight(double t, int n)
{
    if (t == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-t * t + 2.0 * double(n) * std::log(t) - std::lgamma(double(n) + 1.0));
}

inline int default_poisson_cutoff(double t)
{
    return std::min(kMaxEnumerationN, int(std::ceil(t * t + 12.0 * t + 30.0)));
}

// Bound for sum_{N > n_max} e^{-t^2} t^{2N}/N! by a geometric majorant.
inline double poisson_tail_bound(double t, int n_max)
{
    const double ratio = t * t / double(n_max + 2);
    if (ratio >= 1.0) return 1.0;
    return poisson_weight(t, n_max + 1) / (1.0 - ratio);
}

struct TruncatedSum {
    double value = 0.0;
    double tail_bound = 0.0;
};

inline TruncatedSum poissonized_prob(double t, const std::function<bool(const Partition&)>& pred,
                                     int n_max)
{
    if (n_max > kMaxEnumerationN) throw TooLarge("poissonized_prob: N_max must be <= 40");
    TruncatedSum r;
    for (int n = 0; n <= n_max; ++n) {
        const double w = poisson_weight(t, n);
        if (w == 0.0) continue;
        r.value += w * plancherel_prob_real(n, pred);
    }
    r.tail_bound = poisson_tail_bound(t, n_max);
    return r;
}

// Poissonized expectation of f(lambda); the reported tail bound is on the
// discarded Poisson mass only (|f| on the tail is the caller's business).
inline TruncatedSum poissonized_expect(double t, const std::function<double(const Partition&)>& f,
                                       int n_max)
{
    if (n_max > kMaxEnumerationN) throw TooLarge("poissonized_expect: N_max must be <= 40");
    TruncatedSum r;
    for (int n = 0; n <= n_max; ++n) {
        const double w = poisson_weight(t, n);
        if (w == 0.0) continue;
        const auto parts = enumerate_partitions(n);
        const double nfact = factorial(n).convert_to<double>();
        double e = 0.0;
        for (const Partition& p : parts) {
            const BigInt dd = dim_syt(p) * dim_syt(p);
            e += dd.convert_to<double>() / nfact * f(p);
        }
        r.value += w * e;
    }
    r.tail_bound = poisson_tail_bound(t, n_max);
    return r;
}

// RSK insertion shape of a permutation (any sequence of distinct values).
inline Partition rsk_shape(const std::vector<int>& perm)
{
    std::vector<std::vector<int>> rows;
    for (int x : perm) {
        int v = x;
        for (auto& row : rows) {
            auto it = std::upper_bound(row.begin(), row.end(), v);
            if (it == row.end()) {
                row.push_back(v);
                v = -1;
                break;
            }
            std::swap(*it, v);
        }
        if (v != -1) rows.push_back({v});
    }
    Partition p;
    for (const auto& row : rows) p.parts.push_back(int(row.size()));
    return p;
}

// Longest increasing subsequence length by patience sorting.
inline int lis_length(const std::vector<int>& perm)
{
    std::vector<int> tops;
    for (int x : perm) {
        auto it = std::lower_bound(tops.begin(), tops.end(), x);
        if (it == tops.end())
            tops.push_back(x);
        else
            *it = x;
    }
    return int(tops.size());
}

// ---------------------------------------------------------------------------
// Colored permutations.
//
// An m-colored permutation carries a color 0..m-1 per entry.  A union S of k
// monochromatic increasing subsequences, k_i of them of color i, scores
//   m|S| + C(k+1,2) + sum_i (i k_i - m C(k_i+1,2)),
// and l_k is the maximum score over all such unions (empty subsequences are
// allowed and their color matters).  Row lengths are lambda_k = l_k - l_{k-1}.
// ---------------------------------------------------------------------------

struct ColoredPermutation {
    int m = 1;
    std::vector<int> values; // a permutation of 1..n
    std::vector<int> colors; // in [0, m)

    int length() const { return int(values.size()); }
};

inline long choose2(long k) { return k * (k + 1) / 2; } // C(k+1,2)

// Values m(lambda^{(i)}_j - j) + i for one color, for j = 1..count.
inline std::vector<long> shifted_content(const Partition& shape, int m, int color, int count)
{
    std::vector<long> v;
    v.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j)
        v.push_back(long(m) * (long(shape.row(j)) - j) + color);
    return v;
}

// First `count` rows of the superimposed shape: lambda_k - k is the kth
// largest of the shifted contents across colors.
inline std::vector<int> merged_rows(const std::vector<Partition>& shapes, int m, int count)
{
    std::vector<long> pool;
    for (int i = 0; i < m; ++i) {
        const auto v = shifted_content(shapes[std::size_t(i)], m, i, count);
        pool.insert(pool.end(), v.begin(), v.end());
    }
    std::sort(pool.begin(), pool.end(), std::greater<>());
    std::vector<int> rows(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) rows[std::size_t(k - 1)] = int(pool[std::size_t(k - 1)] + k);
    return rows;
}

namespace detail {

// Maximum number of positions covered by up to c disjoint increasing
// subsequences of seq, by exhaustive assignment (independent of RSK).
inline int max_cover_exhaustive(const std::vector<int>& seq, int c)
{
    c = std::min<int>(c, int(seq.size()));
    if (c == 0 || seq.empty()) return 0;
    int best = 0;
    std::vector<int> last(static_cast<std::size_t>(c), 0); // last value per chain, 0 = empty
    auto rec = [&](auto&& self, std::size_t pos, int covered) -> void {
        if (pos == seq.size()) {
            best = std::max(best, covered);
            return;
        }
        if (covered + int(seq.size() - pos) <= best) return;
        const int x = seq[pos];
        for (int q = 0; q < c; ++q) {
            if (last[std::size_t(q)] < x) {
                const int save = last[std::size_t(q)];
                last[std::size_t(q)] = x;
                self(self, pos + 1, covered + 1);
                last[std::size_t(q)] = save;
            }
            // identical empty chains are interchangeable; try only the first
            if (last[std::size_t(q)] == 0) break;
        }
        self(self, pos + 1, covered); // leave position uncovered
    };
    rec(rec, 0, 0);
    return best;
}

inline void compositions(int total, int parts, std::vector<int>& cur,
                         const std::function<void(const std::vector<int>&)>& emit)
{
    if (parts == 1) {
        cur.push_back(total);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (int h = 0; h <= total; ++h) {
        cur.push_back(h);
        compositions(total - h, parts - 1, cur, emit);
        cur.pop_back();
    }
}

} // namespace detail

// Maximum score over unions of k monochromatic increasing subsequences,
// by direct enumeration over compositions (k_0,...,k_{m-1}) of k.
inline long colored_score_exhaustive(const ColoredPermutation& pi, int k,
                                     std::map<std::pair<int, int>, int>* cover_memo = nullptr)
{
    const int m = pi.m;
    std::vector<std::vector<int>> by_color(static_cast<std::size_t>(m));
    for (std::size_t p = 0; p < pi.values.size(); ++p)
        by_color[std::size_t(pi.colors[p])].push_back(pi.values[p]);

    auto cover = [&](int color, int c) -> int {
        const int c_eff = std::min<int>(c, int(by_color[std::size_t(color)].size()));
        if (cover_memo) {
            auto it = cover_memo->find({color, c_eff});
            if (it != cover_memo->end()) return it->second;
        }
        const int v = detail::max_cover_exhaustive(by_color[std::size_t(color)], c_eff);
        if (cover_memo) (*cover_memo)[{color, c_eff}] = v;
        return v;
    };

    long best = std::numeric_limits<long>::min();
    std::vector<int> cur;
    detail::compositions(k, m, cur, [&](const std::vector<int>& comp) {
        long covered = 0;
        for (int i = 0; i < m; ++i) covered += cover(i, comp[std::size_t(i)]);
        long score = long(m) * covered + choose2(k);
        for (int i = 0; i < m; ++i)
            score += long(i) * comp[std::size_t(i)] - long(m) * choose2(comp[std::size_t(i)]);
        best = std::max(best, score);
    });
    return best;
}

// Row lengths of the superimposed shape by the shifted-content formula.
inline std::vector<int> colored_shape_formula(const ColoredPermutation& pi, int count)
{
    std::vector<Partition> shapes;
    std::vector<std::vector<int>> by_color(static_cast<std::size_t>(pi.m));
    for (std::size_t p = 0; p < pi.values.size(); ++p)
        by_color[std::size_t(pi.colors[p])].push_back(pi.values[p]);
    for (int i = 0; i < pi.m; ++i) shapes.push_back(rsk_shape(by_color[std::size_t(i)]));
    return merged_rows(shapes, pi.m, count);
}

// lambda_k of an m-colored permutation, computed BOTH by exhaustive score
// maximization and by the shifted-content formula; any mismatch throws.
inline int colored_lambda(const ColoredPermutation& pi, int k)
{
    if (k < 1) throw std::invalid_argument("colored_lambda requires k >= 1");
    if (pi.length() > 6) throw TooLarge("colored_lambda exhaustive path requires n <= 6");
    std::map<std::pair<int, int>, int> memo;
    const long lk = colored_score_exhaustive(pi, k, &memo);
    const long lk1 = k == 1 ? 0 : colored_score_exhaustive(pi, k - 1, &memo);
    const int exhaustive = int(lk - lk1);
    const int formula = colored_shape_formula(pi, k)[std::size_t(k - 1)];
    if (exhaustive != formula)
        throw DisagreementError("colored lambda_" + std::to_string(k) + ": exhaustive " +
                                std::to_string(exhaustive) + " != formula " +
                                std::to_string(formula));
    return formula;
}

// Truncated Poissonized sum over m independent Plancherel diagrams.  The
// predicate sees the first `rows_needed` rows of the superimposed shape.
inline TruncatedSum colored_poissonized_prob(double t, int m,
                                             const std::function<bool(const std::vector<int>&)>& pred,
                                             int rows_needed, int total_max)
{
    if (m < 1 || m > 3) throw TooLarge("colored_poissonized_prob supports m <= 3");
    if (total_max > kMaxEnumerationN)
        throw TooLarge("colored_poissonized_prob: total size cap is 40");

    // Per size: partitions with their Plancherel weights.
    std::vector<std::vector<std::pair<Partition, double>>> table(std::size_t(total_max) + 1);
    for (int n = 0; n <= total_max; ++n) {
        const double nfact = factorial(n).convert_to<double>();
        for (const Partition& p : enumerate_partitions(n)) {
            const BigInt dd = dim_syt(p) * dim_syt(p);
            table[std::size_t(n)].emplace_back(p, dd.convert_to<double>() / nfact);
        }
    }

    TruncatedSum r;
    std::vector<Partition> shapes(static_cast<std::size_t>(m));
    auto rec = [&](auto&& self, int color, int budget, double w) -> void {
        if (color == m) {
            if (pred(merged_rows(shapes, m, rows_needed))) r.value += w;
            return;
        }
        for (int n = 0; n <= budget; ++n) {
            const double pw = poisson_weight(t, n);
            if (pw == 0.0) continue;
            for (const auto& [p, plw] : table[std::size_t(n)]) {
                shapes[std::size_t(color)] = p;
                self(self, color + 1, budget - n, w * pw * plw);
            }
        }
    };
    rec(rec, 0, total_max, 1.0);

    // Total colored size is Poisson(m t^2); bound the discarded mass.
    const double mt = std::sqrt(double(m)) * t;
    r.tail_bound = poisson_tail_bound(mt, total_max);
    return r;
}

} // namespace fredholm::oracle
