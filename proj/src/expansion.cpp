#include "erwd/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "erwd/bounds.hpp"
#include "erwd/errors.hpp"

namespace erwd {

namespace {

bool adjacent(const LatticePoint& a, const LatticePoint& b) {
    if (a.dimension() != b.dimension()) return false;
    std::int64_t dist = 0;
    for (int i = 0; i < a.dimension(); ++i) dist += std::abs(static_cast<std::int64_t>(a[i]) - b[i]);
    return dist == 1;
}

void check_path(std::span<const LatticePoint> path, int d, const char* name) {
    if (path.empty()) throw DomainError(std::string(name) + " path is empty");
    for (const auto& p : path) {
        if (p.dimension() != d) throw DomainError(std::string(name) + " path has the wrong dimension");
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (!adjacent(path[i - 1], path[i])) {
            throw DomainError(std::string(name) + " path is not nearest-neighbour at index " + std::to_string(i));
        }
    }
}

bool occurs_before_last(std::span<const LatticePoint> path, const LatticePoint& x) {
    return std::find(path.begin(), path.end() - 1, x) != path.end() - 1;
}

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double c = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + c; }
};

/// Depth-first enumeration of the sub-walk decompositions. `walks_` holds
/// the points of every sub-walk so far; only the last two are consulted.
class Enumerator {
public:
    Enumerator(const WalkParams& params, int m, int N) : p_(params), m_(m), N_(N), d_(params.d()) {
        scale_ = 1.0 / (2.0 * d_);
        delta_mag_ = (params.beta() + params.mu()) * scale_;
    }

    std::map<std::pair<LatticePoint, LatticePoint>, CompensatedSum> run() {
        const LatticePoint o = LatticePoint::origin(d_);
        for (int dir = 0; dir < 2 * d_; ++dir) {
            const Step s = Step::from_direction(dir);
            const double w = kernel(true, s);
            if (w == 0.0) continue;
            prev_ = {o, o + s};
            cur_ = {o + s};
            walk_index_ = 1;
            extend(w, m_ - N_ - 1);
        }
        return std::move(sums_);
    }

private:
    double kernel(bool fresh, Step s) const {
        const int e = s.first();
        if (e == 0) return scale_;
        const double drift = fresh ? p_.beta() : -p_.mu();
        return (1.0 + e * drift) * scale_;
    }

    bool in_history(const LatticePoint& x) const {
        return occurs_before_last(prev_, x) || occurs_before_last(cur_, x);
    }

    /// `remaining` kernel steps are still to be distributed over the current
    /// and later sub-walks.
    void extend(double weight, int remaining) {
        const LatticePoint x = cur_.back();
        // close the current sub-walk with a Delta step
        if (walk_index_ < N_ || remaining == 0) {
            if (occurs_before_last(prev_, x) && !occurs_before_last(cur_, x)) {
                for (int sign : {1, -1}) {
                    const Step s{0, sign};
                    const double w = weight * (-delta_mag_ * sign);
                    if (w == 0.0) continue;
                    const LatticePoint y = x + s;
                    if (walk_index_ == N_) {
                        sums_[{x, y}].add(w);
                    } else {
                        auto saved_prev = std::move(prev_);
                        auto saved_cur = cur_;
                        prev_ = cur_;
                        prev_.push_back(y);
                        cur_ = {y};
                        ++walk_index_;
                        extend(w, remaining);
                        --walk_index_;
                        prev_ = std::move(saved_prev);
                        cur_ = std::move(saved_cur);
                    }
                }
            }
        }
        if (remaining == 0) return;
        const bool fresh = !in_history(x);
        for (int dir = 0; dir < 2 * d_; ++dir) {
            const Step s = Step::from_direction(dir);
            const double w = weight * kernel(fresh, s);
            if (w == 0.0) continue;
            cur_.push_back(x + s);
            extend(w, remaining - 1);
            cur_.pop_back();
        }
    }

    const WalkParams& p_;
    int m_;
    int N_;
    int d_;
    double scale_ = 0.0;
    double delta_mag_ = 0.0;
    int walk_index_ = 1;
    std::vector<LatticePoint> prev_;
    std::vector<LatticePoint> cur_;
    std::map<std::pair<LatticePoint, LatticePoint>, CompensatedSum> sums_;
};

}  // namespace

double delta_weight(const WalkParams& params, std::span<const LatticePoint> previous,
                    std::span<const LatticePoint> current, Step step) {
    const int d = params.d();
    if (step.axis < 0 || step.axis >= d || (step.sign != 1 && step.sign != -1)) {
        throw DomainError("step is not a unit vector of Z^" + std::to_string(d));
    }
    check_path(previous, d, "previous");
    check_path(current, d, "current");
    if (!(previous.back() == current.front())) {
        throw DomainError("previous path does not end where the current path starts");
    }
    const LatticePoint& x = current.back();
    if (step.first() == 0) return 0.0;
    if (!occurs_before_last(previous, x) || occurs_before_last(current, x)) return 0.0;
    return -(params.beta() + params.mu()) * step.first() / (2.0 * d);
}

double enumeration_cost(int d, int m, int N) {
    if (m < 0 || N < 0 || N > m) return 0.0;
    double binom = 1.0;
    for (int i = 1; i <= N; ++i) binom = binom * (m - N + i) / i;
    return std::pow(2.0 * d, m) * binom;
}

ExpansionCoefficient expansion_coefficient(const WalkParams& params, int m, int N, double budget) {
    if (N < 1) throw DomainError("expansion order N must be >= 1");
    if (params.d() > kMaxDimension) throw DomainError("dimension exceeds " + std::to_string(kMaxDimension));
    ExpansionCoefficient out;
    out.m = m;
    out.N = N;
    if (m < N + 1) return out;
    const double cost = enumeration_cost(params.d(), m, N);
    if (cost > budget) {
        throw BudgetError("enumeration of (m=" + std::to_string(m) + ", N=" + std::to_string(N) +
                          ", d=" + std::to_string(params.d()) + ") needs " + std::to_string(cost) +
                          " work units, over the budget of " + std::to_string(budget));
    }
    auto sums = Enumerator(params, m, N).run();
    CompensatedSum abs_total;
    CompensatedSum drift;
    for (const auto& [key, acc] : sums) {
        const double v = acc.value();
        if (v == 0.0) continue;
        out.value_by_displacement.emplace(key, v);
        abs_total.add(std::abs(v));
        drift.add((key.second[0] - key.first[0]) * v);
    }
    out.abs_total = abs_total.value();
    out.signed_drift = drift.value();
    return out;
}

PartialSpeed partial_speed(const WalkParams& params, int M, const GreensTable& greens, double budget) {
    const int d = params.d();
    if (d < 6) throw DomainError("partial_speed requires d >= 6, got d = " + std::to_string(d));
    if (M < 1) throw DomainError("truncation M must be >= 1");
    const double s = params.beta() + params.mu();
    const auto c = structural_constants(d, greens);
    if (s > 0.0 && s * *c.a_d >= 1.0) {
        throw DivergenceError("order bounds do not sum: (beta + mu) a_d = " + std::to_string(s * *c.a_d) + " >= 1");
    }

    PartialSpeed out;
    out.enumerated_abs_by_order.assign(static_cast<std::size_t>(std::max(M, 1)), 0.0);
    CompensatedSum v;
    v.add(params.beta() / d);
    for (int m = 2; m <= M; ++m) {
        for (int N = 1; N < m; ++N) {
            const auto pi = expansion_coefficient(params, m, N, budget);
            v.add(pi.signed_drift);
            out.enumerated_abs_by_order[static_cast<std::size_t>(N)] += pi.abs_total;
        }
    }
    out.velocity = v.value();
    if (s == 0.0) return out;

    CompensatedSum tail;
    for (int N = 1; N < M; ++N) {
        const double rest = pi_bound_for_order(d, s, N, greens) - out.enumerated_abs_by_order[static_cast<std::size_t>(N)];
        tail.add(std::max(rest, 0.0));
    }
    tail.add(pi_bound_tail_from(d, s, std::max(M, 2), greens));
    if (M < 2) tail.add(pi_bound_for_order(d, s, 1, greens));
    out.tail_bound = tail.value();
    return out;
}

}  // namespace erwd
