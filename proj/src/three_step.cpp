#include "erwd/three_step.hpp"

#include <string>

#include "erwd/errors.hpp"

namespace erwd {

KernelParams<double> kernel_params(const WalkParams& p) { return {p.d(), p.beta(), p.mu()}; }

KernelParams<Rational> exact_kernel_params(const WalkParams& p) {
    return {p.d(), Rational(p.beta()), Rational(p.mu())};
}

namespace {

void require_planar(int d, const char* what) {
    if (d < 2) throw DomainError(std::string(what) + " requires d >= 2, got d = " + std::to_string(d));
}

template <class T>
struct Weights {
    const KernelParams<T>& p;
    const CookieView& cookies;

    T indicator(const LatticePoint& x) const { return cookies.has_cookie(x) ? T(1) : T(0); }
    T A(const LatticePoint& x) const { return T(1) - p.mu + (p.beta + p.mu) * indicator(x); }
    T B(const LatticePoint& x) const { return T(1) + p.mu - (p.beta + p.mu) * indicator(x); }
};

/// Kernel weight (times 2d) of moving along `s` from a site with or without cookie.
template <class T>
T scaled_kernel(const KernelParams<T>& p, bool cookie, Step s) {
    const int e = s.first();
    if (e == 0) return T(1);
    const T drift = cookie ? p.beta : -p.mu;
    return e > 0 ? T(1) + drift : T(1) - drift;
}

}  // namespace

template <class T>
ThreeStepLaw<T> three_step_distribution(const KernelParams<T>& params, const CookieView& cookies) {
    const int d = params.d;
    require_planar(d, "three_step_distribution");
    const Weights<T> w{params, cookies};
    const LatticePoint o = LatticePoint::origin(d);
    const Step east{0, 1};
    const Step west{0, -1};
    const LatticePoint e1 = o + east;
    const LatticePoint w1 = o + west;
    const T perp(2 * d - 2);
    const T A0 = w.A(o);
    const T B0 = w.B(o);

    std::vector<Step> perps;
    for (int dir = 2; dir < 2 * d; ++dir) perps.push_back(Step::from_direction(dir));

    T plus3 = A0 * w.A(e1) * w.A(e1 + east);
    T minus3 = B0 * w.B(w1) * w.B(w1 + west);

    T plus2 = A0 * w.A(e1) * perp;
    T minus2 = B0 * w.B(w1) * perp;
    for (Step p : perps) {
        plus2 += A0 * w.A(e1 + p) + w.A(o + p) * w.A(o + p + east);
        minus2 += B0 * w.B(w1 + p) + w.B(o + p) * w.B(o + p + west);
    }

    T plus1 = A0 * w.A(e1) * w.B(e1 + east) + A0 * w.B(e1) * (T(1) - params.mu) +
              B0 * w.A(w1) * (T(1) - params.mu) + A0 * perp * perp + perp * (T(1) - params.mu);
    T minus1 = B0 * w.B(w1) * w.A(w1 + west) + B0 * w.A(w1) * (T(1) + params.mu) +
               A0 * w.B(e1) * (T(1) + params.mu) + B0 * perp * perp + perp * (T(1) + params.mu);
    for (Step p : perps) {
        plus1 += w.A(o + p) * perp;
        minus1 += w.B(o + p) * perp;
        // two perpendicular steps ending at distance 2, counted once per path
        for (Step q : perps) {
            if (q == p.reversed()) continue;
            const LatticePoint v = o + p + q;
            plus1 += w.A(v);
            minus1 += w.B(v);
        }
    }

    const T cube = T(2 * d) * T(2 * d) * T(2 * d);
    ThreeStepLaw<T> law;
    law.prob(3) = plus3 / cube;
    law.prob(2) = plus2 / cube;
    law.prob(1) = plus1 / cube;
    law.prob(-1) = minus1 / cube;
    law.prob(-2) = minus2 / cube;
    law.prob(-3) = minus3 / cube;
    law.prob(0) = T(1) - (law.prob(3) + law.prob(2) + law.prob(1) + law.prob(-1) + law.prob(-2) + law.prob(-3));
    law.mean = T(0);
    for (int k = -3; k <= 3; ++k) law.mean += T(k) * law.prob(k);
    return law;
}

template <class T>
std::vector<ThreeStepPath<T>> three_step_paths(const KernelParams<T>& params, const CookieView& cookies,
                                               const LatticePoint& start) {
    const int d = params.d;
    require_planar(d, "three_step_paths");
    const T unit = T(1) / T(2 * d);
    std::vector<ThreeStepPath<T>> out;
    out.reserve(static_cast<std::size_t>(8 * d * d * d));
    const LatticePoint x0 = start;
    const bool c0 = cookies.has_cookie(x0);
    for (int a = 0; a < 2 * d; ++a) {
        const Step sa = Step::from_direction(a);
        const T wa = scaled_kernel(params, c0, sa) * unit;
        if (wa == T(0)) continue;
        const LatticePoint x1 = x0 + sa;
        const bool c1 = !(x1 == x0) && cookies.has_cookie(x1);
        for (int b = 0; b < 2 * d; ++b) {
            const Step sb = Step::from_direction(b);
            const T wb = wa * scaled_kernel(params, c1, sb) * unit;
            if (wb == T(0)) continue;
            const LatticePoint x2 = x1 + sb;
            const bool c2 = !(x2 == x0) && !(x2 == x1) && cookies.has_cookie(x2);
            for (int c = 0; c < 2 * d; ++c) {
                const Step sc = Step::from_direction(c);
                const T wc = wb * scaled_kernel(params, c2, sc) * unit;
                if (wc == T(0)) continue;
                out.push_back({{sa, sb, sc}, wc, sa.first() + sb.first() + sc.first()});
            }
        }
    }
    return out;
}

template <class T>
ThreeStepLaw<T> brute_force_three_step(const KernelParams<T>& params, const CookieView& cookies,
                                       const LatticePoint& start) {
    ThreeStepLaw<T> law;
    for (const auto& path : three_step_paths(params, cookies, start)) {
        law.prob(path.displacement) += path.weight;
    }
    law.mean = T(0);
    for (int k = -3; k <= 3; ++k) law.mean += T(k) * law.prob(k);
    return law;
}

CookieMonotonicity monotonicity_in_cookie(const WalkParams& params, const CookieField& field, const LatticePoint& x) {
    const auto kp = kernel_params(params);
    const CookieView base(field);
    const auto with = three_step_distribution(kp, base.with_override(x, true));
    const auto without = three_step_distribution(kp, base.with_override(x, false));
    return {with.positive(), without.positive(), with.negative(), without.negative()};
}

template ThreeStepLaw<double> three_step_distribution(const KernelParams<double>&, const CookieView&);
template ThreeStepLaw<Rational> three_step_distribution(const KernelParams<Rational>&, const CookieView&);
template ThreeStepLaw<double> brute_force_three_step(const KernelParams<double>&, const CookieView&,
                                                     const LatticePoint&);
template ThreeStepLaw<Rational> brute_force_three_step(const KernelParams<Rational>&, const CookieView&,
                                                       const LatticePoint&);
template std::vector<ThreeStepPath<double>> three_step_paths(const KernelParams<double>&, const CookieView&,
                                                             const LatticePoint&);
template std::vector<ThreeStepPath<Rational>> three_step_paths(const KernelParams<Rational>&, const CookieView&,
                                                               const LatticePoint&);

}  // namespace erwd
