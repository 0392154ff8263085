#include "fredholm/identities.hpp"
#include "fredholm/oracle.hpp"
#include "fredholm/plancherel.hpp"
#include "fredholm/symbol_json.hpp"

#include <cstdio>

using namespace fredholm;

int main()
{
    // multi-interval: bessel(1), k=2, (n1,n2)=(2,5), (s1,s2)=(0.3,0.6)
    {
        const Symbol b = Symbol::bessel(1.0);
        const IdentityReport rep =
            verify_multi(b, {2, 5}, {Cplx(0.3), Cplx(0.6)}, 1e-8);
        std::printf("multi: lhs=%.12f rhs=%.12f residual=%.3e pass=%d\n", rep.lhs.real(),
                    rep.rhs.real(), rep.residual, int(rep.pass));
        // k=1 collapse
        const IdentityReport r1 = verify_multi(b, {3}, {Cplx(0.5)}, 1e-10);
        const IdentityReport r2 = verify_single(b, 3, Cplx(0.5), KernelSide::S, 1e-10);
        std::printf("multi k=1 vs single: %.12f vs %.12f\n", r1.rhs.real(), r2.rhs.real());
    }

    // colored: bessel(0.8), m=2, n=2, s=0.5
    {
        const IdentityReport rep = verify_colored(Symbol::bessel(0.8), 2, 2, Cplx(0.5), 1e-8);
        std::printf("colored m=2: lhs=%.12f rhs=%.12f residual=%.3e pass=%d blocks=%s\n",
                    rep.lhs.real(), rep.rhs.real(), rep.residual, int(rep.pass),
                    rep.params["blocks_ok"].dump().c_str());
    }

    // colored wound symbol: phi=z, m=2 -> base-winding exponent should fail,
    // lifted winding m*# should pass
    {
        const Symbol z = Symbol::monomial(1);
        const IdentityReport rep = verify_colored(z, 2, 1, Cplx(0.4), 1e-8);
        std::printf("colored z m=2 (base #): residual=%.3e\n", rep.residual);
        const Cplx fixed = rep.lhs / ipow(Cplx(1.4), 1 + 2); // exponent n + m*#
        DiscreteKernel kern(z, KernelSide::S, 2);
        const DetResult lat = fredholm_det_lattice(kern, 1, [](long) { return Cplx(0.16); }, 1e-10);
        std::printf("colored z m=2 (m*#): |lhs/(1+s)^{n+m}-lat| = %.3e\n",
                    std::abs(fixed - lat.value));
    }

    // lambda2 crosscheck t=1
    {
        PoissonizedModel model(1.0);
        for (long n = 1; n <= 3; ++n) {
            const IdentityReport rep = lambda2_crosscheck(model, n, 1e-7);
            const auto orc = oracle::poissonized_prob(
                1.0, [n](const oracle::Partition& p) { return p.row(2) <= n + 1; }, 40);
            const double via = row_cdf(model, 1, n, 1e-9) + rep.rhs.real();
            std::printf("lambda2 n=%ld: K-side=%.10f S-side=%.10f resid=%.2e; cdf=%.10f oracle=%.10f\n",
                        n, rep.lhs.real(), rep.rhs.real(), rep.residual, via, orc.value);
        }
    }

    // joint cdf k=2 vs oracle
    {
        PoissonizedModel model(1.0);
        const double v = joint_cdf(model, {2, {3.0, 1.0}}, 1e-6);
        const auto orc = oracle::poissonized_prob(
            1.0, [](const oracle::Partition& p) { return p.row(1) <= 4 && p.row(2) <= 3; }, 40);
        std::printf("joint (3,1): %.10f oracle %.10f\n", v, orc.value);
        const double vinf = joint_cdf(model, {2, {std::numeric_limits<double>::infinity(), 1.0}},
                                      1e-6);
        const auto orc2 = oracle::poissonized_prob(
            1.0, [](const oracle::Partition& p) { return p.row(2) <= 3; }, 40);
        std::printf("joint (inf,1): %.10f oracle %.10f\n", vinf, orc2.value);
    }

    // derivative paths, orders 1..4
    {
        PoissonizedModel model(1.5);
        const auto de = det_derivs_eig(model, 2, 4);
        const auto dc = det_derivs_contour(model, 2, 4);
        for (int j = 1; j <= 4; ++j)
            std::printf("deriv order %d: eig=%.12e contour=%.12e diff=%.2e\n", j,
                        de[std::size_t(j)], dc[std::size_t(j)],
                        std::abs(de[std::size_t(j)] - dc[std::size_t(j)]));
    }

    // moments at t=1 vs oracle
    {
        PoissonizedModel model(1.0);
        for (int a = 0; a <= 2; ++a) {
            const double eng = poissonized_moment(model, 1, a, -1, 30);
            const auto orc = oracle::poissonized_expect(
                1.0,
                [a](const oracle::Partition& p) {
                    return std::pow((double(p.row(1)) - 2.0) / 1.0, a);
                },
                40);
            std::printf("moment a=%d: engine=%.10f oracle=%.10f\n", a, eng, orc.value);
        }
    }

    // moment trend t = 4, 6, 8
    {
        for (double t : {4.0, 6.0, 8.0}) {
            PoissonizedModel model(t);
            const long lo = 0, hi = long(2.0 * t + 10.0 * std::cbrt(t)) + 4;
            const double e1 = poissonized_moment(model, 1, 1, lo, hi);
            const double e2 = poissonized_moment(model, 1, 2, lo, hi);
            std::printf("t=%.0f: E[xi]=%.8f E[xi^2]=%.8f\n", t, e1, e2);
        }
    }

    // tail probes at t=10
    {
        PoissonizedModel model(10.0);
        std::vector<std::pair<long, double>> up, low;
        for (long n = 21; n <= 36; ++n) {
            const double x = scaled_x(n, 10.0);
            if (x >= 1.0 && x <= 6.0) up.push_back({n, 10.0});
        }
        for (long n = 7; n <= 20; ++n) {
            const double x = scaled_x(n, 10.0);
            if (x >= -6.0 && x <= -1.0) low.push_back({n, 10.0});
        }
        const auto ru = tail_probe(model, 1, TailRegime::Upper, up);
        const auto rl = tail_probe(model, 1, TailRegime::Lower, low);
        std::printf("upper: %d fitted slope=%.4f; lower: %d fitted slope=%.4f\n", ru.fitted,
                    ru.slope, rl.fitted, rl.slope);
        for (const auto& r : ru.rows)
            std::printf("  up n=%ld x=%.2f tail=%.3e\n", r.n, r.x, r.tail);
        for (const auto& r : rl.rows)
            std::printf("  lo n=%ld x=%.2f tail=%.3e\n", r.n, r.x, r.tail);
    }

    // depoissonization bracket + oracle
    {
        const auto [lo, hi] = depoissonization_bracket(9, 4, 1, 1e-8);
        const auto orc = oracle::plancherel_prob(
            9, [](const oracle::Partition& p) { return p.row(1) <= 4; });
        std::printf("bracket N=9 n=4: [%.8f, %.8f] plan=%.8f (%s)\n", lo, hi,
                    orc.to_double(), orc.str().c_str());
    }
    return 0;
}
