#include "erwd/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "erwd/errors.hpp"

namespace erwd {

namespace {

void require_finite(int d, int n) {
    if (n < 1) throw DomainError("convolution power n must be >= 1, got " + std::to_string(n));
    if (!greens_finite(d, n)) {
        throw DivergenceError("G_" + std::to_string(d) + "^{*" + std::to_string(n) +
                              "} diverges: need d > 2n");
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double scaled_bessel_i0(double a) {
    a = std::abs(a);
    if (a <= 15.0) {
        const double q = 0.25 * a * a;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum * std::exp(-a);
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * a);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * a);
}

GreensValue greens_power_integral(int d, int n) {
    require_finite(d, n);
    const double norm = 1.0 / factorial(n - 1);
    const double dd = d;
    // integrand in u = log t: t^n (e^{-t/d} I_0(t/d))^d / (n-1)!
    auto h = [&](double u) {
        const double t = std::exp(u);
        return norm * std::exp(n * u) * std::pow(scaled_bessel_i0(t / dd), dd);
    };
    constexpr double u_lo = -40.0;
    constexpr double u_hi = 40.0;
    double quad_err = 0.0;
    const double body =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(h, u_lo, u_hi, 20, 1e-14, &quad_err);

    // t < e^{u_lo}: integrand bounded by t^{n-1}/(n-1)!
    const double head = std::exp(n * u_lo) / factorial(n);
    // t > T: (e^{-a} I_0(a))^d = (2 pi a)^{-d/2} (1 + d/(8a) + O(a^-2)), a = t/d
    const double T = std::exp(u_hi);
    const double pref = norm * std::pow(dd / (2.0 * std::numbers::pi), dd / 2.0);
    const double lead = pref * std::pow(T, n - dd / 2.0) / (dd / 2.0 - n);
    const double corr = pref * dd * dd / 8.0 * std::pow(T, n - 1 - dd / 2.0) / (dd / 2.0 - n + 1);

    const double value = body + lead + corr;
    const double err = quad_err + head + std::abs(corr) + 1e-15 * value;
    if (!(err <= 1e-8)) {
        throw AccuracyError("quadrature for G_" + std::to_string(d) + "^{*" + std::to_string(n) +
                                "} did not converge, error estimate " + std::to_string(err),
                            err);
    }
    return {value, err};
}

std::vector<double> return_probabilities(int d, int K) {
    if (d < 1) throw DomainError("return_probabilities needs d >= 1");
    if (K < 0) throw DomainError("return_probabilities needs K >= 0");
    const auto size = static_cast<std::size_t>(K) + 1;
    std::vector<double> one(size, 0.0);
    one[0] = 1.0;
    for (int k = 2; k <= K; k += 2) {
        one[static_cast<std::size_t>(k)] =
            one[static_cast<std::size_t>(k - 2)] * (k - 1.0) / static_cast<double>(k);
    }
    std::vector<double> r = one;
    std::vector<double> next(size);
    std::vector<double> w(size);
    for (int a = 1; a < d; ++a) {
        // add one coordinate: i of the k steps go to the first a coordinates
        const double p = static_cast<double>(a) / (a + 1);
        const double odds = p / (1.0 - p);
        std::fill(next.begin(), next.end(), 0.0);
        next[0] = 1.0;
        for (int k = 2; k <= K; k += 2) {
            const int mode = std::min(k, static_cast<int>(std::floor((k + 1) * p)));
            // unnormalised binomial weights relative to the mode
            int lo = mode;
            int hi = mode;
            w[static_cast<std::size_t>(mode)] = 1.0;
            double total = 1.0;
            while (hi < k) {
                const double v = w[static_cast<std::size_t>(hi)] * (k - hi) / (hi + 1.0) * odds;
                if (v < 1e-80) break;
                ++hi;
                w[static_cast<std::size_t>(hi)] = v;
                total += v;
            }
            while (lo > 0) {
                const double v = w[static_cast<std::size_t>(lo)] * lo / ((k - lo + 1.0) * odds);
                if (v < 1e-80) break;
                --lo;
                w[static_cast<std::size_t>(lo)] = v;
                total += v;
            }
            double s = 0.0;
            for (int i = lo + (lo & 1); i <= hi; i += 2) {
                s += w[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)] *
                     one[static_cast<std::size_t>(k - i)];
            }
            next[static_cast<std::size_t>(k)] = s / total;
        }
        r.swap(next);
    }
    return r;
}

namespace {

/// sum_{i>=1} f(K + 2i) for f(x) = sum_j c_j x^{e_j}, all e_j < -1, by
/// Euler-Maclaurin with step 2 through the third derivative.
double power_tail_sum(const std::vector<std::pair<double, double>>& terms, double K) {
    double s = 0.0;
    for (auto [c, e] : terms) {
        const double integral = -std::pow(K, e + 1.0) / (e + 1.0);
        const double f = std::pow(K, e);
        const double f1 = e * std::pow(K, e - 1.0);
        const double f3 = e * (e - 1.0) * (e - 2.0) * std::pow(K, e - 3.0);
        s += c * (0.5 * integral - 0.5 * f - f1 / 6.0 + f3 / 90.0);
    }
    return s;
}

/// Tail of sum_k C(n-1+k,k) r_k with r_{2m} = L(2m) (1 + sum_l c_l m^{-l}).
double series_tail(int d, int n, int K, const std::vector<double>& c) {
    // C(n-1+k, k) = prod_{i=1}^{n-1} (k+i)/i as a polynomial in k
    std::vector<double> poly{1.0};
    for (int i = 1; i < n; ++i) {
        // multiply by (k + i)/i = 1 + k/i
        std::vector<double> q(poly.size() + 1, 0.0);
        for (std::size_t j = 0; j < poly.size(); ++j) {
            q[j] += poly[j];
            q[j + 1] += poly[j] / static_cast<double>(i);
        }
        poly = q;
    }
    const double dd = d;
    const double pref = 2.0 * std::pow(dd / (2.0 * std::numbers::pi), dd / 2.0);
    std::vector<std::pair<double, double>> terms;
    for (std::size_t j = 0; j < poly.size(); ++j) {
        // 1 + sum_l c_l (2/k)^l
        terms.emplace_back(pref * poly[j], static_cast<double>(j) - dd / 2.0);
        double scale = 1.0;
        for (std::size_t l = 0; l < c.size(); ++l) {
            scale *= 2.0;
            terms.emplace_back(pref * poly[j] * c[l] * scale, static_cast<double>(j) - dd / 2.0 - (l + 1.0));
        }
    }
    return power_tail_sum(terms, K);
}

/// Solves sum_l c_l x_i^l = y_i (l = 1..size) for small systems.
std::vector<double> fit_inverse_powers(const std::vector<double>& ms, const std::vector<double>& ys) {
    const std::size_t n = ms.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        double x = 1.0;
        for (std::size_t l = 0; l < n; ++l) {
            x /= ms[i];
            a[i][l] = x;
        }
        a[i][n] = ys[i];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
        }
    }
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = a[i][n] / a[i][i];
    return c;
}

}  // namespace

GreensSeries greens_power_series(int d, int n, int K, double target) {
    require_finite(d, n);
    if (K < 64) {
        throw AccuracyError("series truncation K = " + std::to_string(K) + " is too small to fit the tail", 1.0);
    }
    K -= K % 2;
    const auto r = return_probabilities(d, K);

    double partial = 0.0;
    double comp = 0.0;  // Neumaier compensation
    double binom = 1.0;  // C(n-1+k, k)
    for (int k = 0; k <= K; ++k) {
        if (k > 0) binom *= (n - 1.0 + k) / k;
        const double term = binom * r[static_cast<std::size_t>(k)];
        const double t = partial + term;
        comp += std::abs(partial) >= std::abs(term) ? (partial - t) + term : (term - t) + partial;
        partial = t;
    }
    partial += comp;

    const double dd = d;
    auto ratio = [&](int m) {
        const double k = 2.0 * m;
        const double lead = 2.0 * std::pow(dd / (2.0 * std::numbers::pi * k), dd / 2.0);
        return r[static_cast<std::size_t>(2 * m)] / lead - 1.0;
    };
    const int M = K / 2;
    const std::vector<double> m3{double(M), double(M / 2), double(M / 4)};
    const std::vector<double> m2{double(M), double(M / 2)};
    const auto c3 = fit_inverse_powers(m3, {ratio(M), ratio(M / 2), ratio(M / 4)});
    const auto c2 = fit_inverse_powers(m2, {ratio(M), ratio(M / 2)});
    const double tail3 = series_tail(d, n, K, c3);
    const double tail2 = series_tail(d, n, K, c2);
    const double uncertainty = std::abs(tail3 - tail2) + 1e-13 * std::abs(tail3) + 1e-14;
    if (uncertainty > target) {
        throw AccuracyError("series tail uncertainty " + std::to_string(uncertainty) + " exceeds target " +
                                std::to_string(target) + " at K = " + std::to_string(K),
                            uncertainty);
    }
    return {K, partial, tail3, tail3 + uncertainty};
}

std::string to_string(GreensMethod m) {
    switch (m) {
        case GreensMethod::integral: return "integral";
        case GreensMethod::series: return "series";
        case GreensMethod::published: return "published";
    }
    return "unknown";
}

GreensTable GreensTable::computed(int d_min, int d_max, int n_max) {
    GreensTable t;
    for (int d = std::max(1, d_min); d <= d_max; ++d) {
        for (int n = 1; n <= n_max; ++n) {
            if (!greens_finite(d, n)) continue;
            const auto g = greens_power_integral(d, n);
            t.set(d, n, {g.value, GreensMethod::integral, g.error_estimate});
        }
    }
    return t;
}

GreensTable GreensTable::published() {
    GreensTable t;
    t.set(8, 1, {1.07865, GreensMethod::published, 0.0});
    t.set(8, 2, {1.28901, GreensMethod::published, 0.0});
    t.set(11, 1, {1.05314, GreensMethod::published, 0.0});
    t.set(11, 2, {1.18018, GreensMethod::published, 0.0});
    t.set(11, 3, {1.43043, GreensMethod::published, 0.0});
    t.set(5, 2, {25.0 / 12.0, GreensMethod::published, 0.0});
    return t;
}

const GreensEntry& GreensTable::at(int d, int n) const {
    if (!greens_finite(d, n)) {
        throw DivergenceError("G_" + std::to_string(d) + "^{*" + std::to_string(n) + "} diverges: need d > 2n");
    }
    auto it = entries_.find({d, n});
    if (it == entries_.end()) {
        throw DomainError("Green's table has no entry for d = " + std::to_string(d) + ", n = " + std::to_string(n));
    }
    return it->second;
}

}  // namespace erwd
