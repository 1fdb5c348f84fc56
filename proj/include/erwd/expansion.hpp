#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "erwd/greens.hpp"
#include "erwd/lattice.hpp"
#include "erwd/params.hpp"

namespace erwd {

/// Kernel difference at the end of a sub-walk.
///
/// `previous` is the whole previous sub-walk (its last point is the first
/// point of `current`); `current` is the current sub-walk so far, ending at
/// the site x the step leaves from. The result is the one-step kernel with
/// the previous sub-walk counted as history minus the kernel without it:
/// nonzero only for a first-coordinate step from a site visited before by
/// `previous` (excluding its endpoint) and not earlier by `current`, and then
/// equal to -(beta+mu) (e1 . step) / (2d).
///
/// Throws DomainError if a path is not nearest-neighbour, the two do not
/// concatenate, or the step is not a unit vector of Z^d.
double delta_weight(const WalkParams& params, std::span<const LatticePoint> previous,
                    std::span<const LatticePoint> current, Step step);

/// Order-N expansion coefficient of length index m.
///
/// Sub-walk 0 takes one kernel step from the origin. Sub-walk n (1..N)
/// starts where the previous one ended, takes j_n kernel steps whose history
/// is the previous sub-walk together with its own earlier sites, then one
/// Delta step from x to y, which starts sub-walk n+1. The j_n sum to m-N-1.
/// The value at (x, y) is the signed total weight of all such histories whose
/// final Delta step goes from x to y.
struct ExpansionCoefficient {
    int m = 0;
    int N = 0;
    std::map<std::pair<LatticePoint, LatticePoint>, double> value_by_displacement;
    /// sum over (x, y) of |value|
    double abs_total = 0.0;
    /// sum over (x, y) of (y - x) . e1 * value
    double signed_drift = 0.0;
};

inline constexpr double kDefaultEnumerationBudget = 1e9;

/// Work units of an (m, N) enumeration: (2d)^m * C(m, N).
double enumeration_cost(int d, int m, int N);

/// Throws BudgetError if enumeration_cost exceeds `budget`. Returns a zero
/// coefficient when m < N + 1.
ExpansionCoefficient expansion_coefficient(const WalkParams& params, int m, int N,
                                           double budget = kDefaultEnumerationBudget);

struct PartialSpeed {
    /// beta/d + sum_{m=2}^{M} sum_N signed drift of the (m, N) coefficient.
    double velocity = 0.0;
    /// Bound on the magnitude of every discarded (m > M) contribution.
    double tail_bound = 0.0;
    /// Enumerated sum over m <= M of abs_total, indexed by N (entry 0 unused).
    std::vector<double> enumerated_abs_by_order;
};

/// Truncated velocity expansion with a rigorous tail from the order bounds:
/// for each N the mass not yet enumerated is at most the order-N bound minus
/// the enumerated absolute totals, and every N >= M is bounded whole.
///
/// Requires d >= 6 and (beta + mu) a_d < 1 (DomainError otherwise).
PartialSpeed partial_speed(const WalkParams& params, int M, const GreensTable& greens,
                           double budget = kDefaultEnumerationBudget);

}  // namespace erwd
