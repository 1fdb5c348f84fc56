#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace erwd {

/// e^{-a} I_0(a) for a >= 0, relative error below 1e-12.
double scaled_bessel_i0(double a);

struct GreensValue {
    double value;
    double error_estimate;
};

/// G_d^{*n}(0) for simple random walk on Z^d from
///
///   G_d^{*n}(0) = 1/(n-1)! * int_0^inf t^{n-1} (e^{-t/d} I_0(t/d))^d dt,
///
/// which follows from the Fourier form of the step distribution and
/// (1-x)^{-n} = int t^{n-1} e^{-t(1-x)} dt / (n-1)!. The integral is taken in
/// log t with adaptive Gauss-Kronrod; the polynomially decaying tail beyond
/// t = e^40 is added from the Bessel asymptotics. Throws DivergenceError when
/// d <= 2n and AccuracyError if the error estimate exceeds 1e-8.
GreensValue greens_power_integral(int d, int n);

/// r_k = P(simple random walk on Z^d is at the origin after k steps), k = 0..K.
///
/// Computed exactly up to rounding by splitting the k steps binomially between
/// one coordinate and the rest, starting from the 1-d values C(k,k/2)/2^k.
std::vector<double> return_probabilities(int d, int K);

/// Series evaluation G_d^{*n}(0) = sum_k C(n-1+k, k) r_k truncated at K.
struct GreensSeries {
    int K;
    /// Partial sum up to K; a lower bound since every term is nonnegative.
    double value_lower;
    /// Estimate of the discarded terms from the local-limit expansion of r_k.
    double tail_estimate;
    /// Upper bound used for the discarded terms (estimate plus fit uncertainty).
    double tail_bound;

    double value() const { return value_lower + tail_estimate; }
    double upper() const { return value_lower + tail_bound; }
};

/// Throws DivergenceError when d <= 2n and AccuracyError when the tail
/// uncertainty exceeds `target` (K too small).
GreensSeries greens_power_series(int d, int n, int K = 10000, double target = 1e-6);

enum class GreensMethod { integral, series, published };

std::string to_string(GreensMethod m);

struct GreensEntry {
    double value;
    GreensMethod method;
    double error_estimate;
};

/// Values of G_d^{*n} = G_d^{*n}(0) keyed by (d, n).
class GreensTable {
public:
    /// Every finite entry with d_min <= d <= d_max and 1 <= n <= n_max, by the
    /// integral method.
    static GreensTable computed(int d_min, int d_max, int n_max = 3);

    /// The rigorous upper bounds G_8, G_8^{*2}, G_11, G_11^{*2}, G_11^{*3}
    /// and G_5^{*2} < 25/12 quoted with the high-dimensional certificates.
    static GreensTable published();

    void set(int d, int n, GreensEntry e) { entries_[{d, n}] = e; }
    bool contains(int d, int n) const { return entries_.count({d, n}) != 0; }

    /// Throws DivergenceError if d <= 2n, DomainError if the entry is missing.
    const GreensEntry& at(int d, int n) const;
    double value(int d, int n) const { return at(d, n).value; }

    const std::map<std::pair<int, int>, GreensEntry>& entries() const { return entries_; }

private:
    std::map<std::pair<int, int>, GreensEntry> entries_;
};

inline bool greens_finite(int d, int n) { return d > 2 * n; }

}  // namespace erwd
