#include "erwd/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "erwd/errors.hpp"
#include "erwd/params.hpp"

namespace erwd {

namespace {

std::optional<double> lookup(const GreensTable& g, int d, int n) {
    if (d < 1 || !greens_finite(d, n)) return std::nullopt;
    return g.value(d, n);
}

double need(const std::optional<double>& v, const char* name, int d) {
    if (!v) throw DivergenceError(std::string(name) + " is undefined for d = " + std::to_string(d));
    return *v;
}

}  // namespace

StructuralConstants structural_constants(int d, const GreensTable& greens) {
    if (d < 2) throw DomainError("structural constants need d >= 2");
    StructuralConstants c{d, {}, {}, {}, {}};
    const double dd = d;
    const double r = dd / (dd - 1.0);
    const auto G1 = lookup(greens, d - 1, 1);
    const auto G2 = lookup(greens, d - 1, 2);
    const auto G3 = lookup(greens, d - 1, 3);
    if (G1) c.E0 = r * *G1 - 1.0;
    if (G2) {
        c.E1 = r * r * *G2 - 1.0;
        c.a_d = dd / ((dd - 1.0) * (dd - 1.0)) * *G2;
    }
    if (G1 && G2 && G3) {
        c.epsilon = 2.0 * dd / std::pow(dd - 1.0, 4) * *G1 * *G3 + *c.E1 / (dd * (dd - 1.0) * (dd - 1.0)) * *G2;
    }
    return c;
}

double pi_bound_for_order(int d, double s, int N, const GreensTable& greens) {
    if (N < 1) throw DomainError("expansion order N must be >= 1");
    const auto c = structural_constants(d, greens);
    const double dd = d;
    if (N == 1) return s * need(c.E0, "E_0", d) / dd;
    const double G = greens.value(d - 1, 1);
    return std::pow(s, N) * G * need(c.E1, "E_1", d) * std::pow(need(c.a_d, "a_d", d), N - 2) / (dd * (dd - 1.0));
}

double pi_bound_tail_from(int d, double s, int from, const GreensTable& greens) {
    if (from < 2) return pi_bound_for_order(d, s, 1, greens) + pi_bound_tail_from(d, s, 2, greens);
    const auto c = structural_constants(d, greens);
    const double a = need(c.a_d, "a_d", d);
    if (s == 0.0) return 0.0;
    if (s * a >= 1.0) return std::numeric_limits<double>::infinity();
    return pi_bound_for_order(d, s, from, greens) / (1.0 - s * a);
}

PiBoundTotals pi_bound_totals(int d, double beta, double mu, const GreensTable& greens) {
    const WalkParams checked(d, beta, mu);
    const double s = beta + mu;
    const auto c = structural_constants(d, greens);
    PiBoundTotals t{s * need(c.E0, "E_0", d) / d, 0.0, false};
    if (s == 0.0) return t;
    if (!c.a_d || s * *c.a_d >= 1.0) {
        t.tail_total = std::numeric_limits<double>::infinity();
        t.divergent = true;
        return t;
    }
    t.tail_total = pi_bound_tail_from(d, s, 2, greens);
    return t;
}

DerivativeBoundTotals derivative_bound_totals(int d, const GreensTable& greens) {
    const auto c = structural_constants(d, greens);
    const double a = need(c.a_d, "a_d", d);
    if (2.0 * a >= 1.0) {
        throw DomainError("derivative bounds need 2 a_d < 1; got 2 a_d = " + std::to_string(2.0 * a) +
                          " at d = " + std::to_string(d));
    }
    const double E0 = need(c.E0, "E_0", d);
    const double E1 = need(c.E1, "E_1", d);
    const double eps = need(c.epsilon, "epsilon(d)", d);
    const double G1 = greens.value(d - 1, 1);
    const double G2 = greens.value(d - 1, 2);
    const double G3 = greens.value(d - 1, 3);
    const double dd = d;
    const double q = 1.0 - 2.0 * a;

    DerivativeBoundTotals t{};
    t.rho_total = 2.0 * E0 / dd + 4.0 * G1 * E1 / (dd * (dd - 1.0) * q);
    t.chi_total = E0 + 2.0 * G1 * E1 * (2.0 - 2.0 * a) / ((dd - 1.0) * q * q);
    t.gamma_total = 2.0 * dd * G2 / ((dd - 1.0) * (dd - 1.0)) + 4.0 * eps * dd / q +
                    16.0 * dd * E1 * G1 * G3 / (std::pow(dd - 1.0, 4) * q * q);
    t.grand_total = t.rho_total + t.chi_total + t.gamma_total;
    return t;
}

double positivity_expression(int d, const GreensTable& greens) {
    const auto c = structural_constants(d, greens);
    const double a = need(c.a_d, "a_d", d);
    if (2.0 * a >= 1.0) {
        throw DomainError("positivity bound needs 2 a_d < 1; got 2 a_d = " + std::to_string(2.0 * a));
    }
    const double G1 = greens.value(d - 1, 1);
    return 2.0 * need(c.E0, "E_0", d) + 4.0 * G1 * need(c.E1, "E_1", d) / ((d - 1.0) * (1.0 - 2.0 * a));
}

namespace {

Verdict make_verdict(double value) {
    Verdict v;
    v.evaluable = true;
    v.value = value;
    v.margin = 1.0 - value;
    v.pass = value < 1.0;
    return v;
}

template <class F>
Verdict guarded(F&& f) {
    try {
        return make_verdict(f());
    } catch (const Error& e) {
        Verdict v;
        v.note = e.what();
        return v;
    }
}

}  // namespace

Certificates certificates(int d, const GreensTable& greens) {
    Certificates c;
    c.continuity_d6 = guarded([&] {
        const auto k = structural_constants(d, greens);
        return 2.0 * need(k.a_d, "a_d", d);
    });
    c.monotonicity_d12 = guarded([&] { return derivative_bound_totals(d, greens).grand_total; });
    c.positivity_d9 = guarded([&] { return positivity_expression(d, greens); });
    return c;
}

BoundReport bound_report(int d, double beta, double mu, const GreensTable& greens) {
    const WalkParams checked(d, beta, mu);
    BoundReport r{d, beta, mu, structural_constants(d, greens), {}, {}, {}, certificates(d, greens)};
    if (r.constants.E0) {
        const auto t = pi_bound_totals(d, beta, mu, greens);
        r.pi_total_N1 = t.N1_term;
        if (!t.divergent) r.pi_total_tail = t.tail_total;
    }
    if (r.certificates.monotonicity_d12.evaluable) r.derivative = derivative_bound_totals(d, greens);
    return r;
}

}  // namespace erwd
