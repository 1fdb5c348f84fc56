#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "erwd/cookie_field.hpp"
#include "erwd/lattice.hpp"
#include "erwd/params.hpp"

namespace erwd {

using Rational = boost::multiprecision::cpp_rational;

/// Kernel parameters over an arbitrary scalar (double or exact Rational).
template <class T>
struct KernelParams {
    int d;
    T beta;
    T mu;
};

KernelParams<double> kernel_params(const WalkParams& p);
/// Exact rational image of the (binary) double parameters.
KernelParams<Rational> exact_kernel_params(const WalkParams& p);

/// Read-only cookie lookup over a field, with an optional single-site override.
class CookieView {
public:
    explicit CookieView(const CookieField& field) : field_(&field) {}

    CookieView with_override(const LatticePoint& x, bool has_cookie) const {
        CookieView v = *this;
        v.override_ = std::make_pair(x, has_cookie);
        return v;
    }

    bool has_cookie(const LatticePoint& x) const {
        if (override_ && override_->first == x) return override_->second;
        return field_->has_cookie(x);
    }

    int dimension() const { return field_->dimension(); }

private:
    const CookieField* field_;
    std::optional<std::pair<LatticePoint, bool>> override_;
};

/// Law of the first-coordinate displacement after three steps.
template <class T>
struct ThreeStepLaw {
    std::array<T, 7> probs{};  // probs[k + 3] = P(eta_3^[1] = k)
    T mean{};

    const T& prob(int k) const { return probs[static_cast<std::size_t>(k + 3)]; }
    T& prob(int k) { return probs[static_cast<std::size_t>(k + 3)]; }
    T total() const {
        T s{};
        for (const T& p : probs) s += p;
        return s;
    }
    T positive() const { return prob(1) + prob(2) + prob(3); }
    T negative() const { return prob(-1) + prob(-2) + prob(-3); }
};

/// Closed-form three-step law from the walk's A_x / B_x weights, with the
/// mass at displacement 0 taken as one minus the other six. Requires d >= 2.
template <class T>
ThreeStepLaw<T> three_step_distribution(const KernelParams<T>& params, const CookieView& cookies);

/// Same law by enumerating all (2d)^3 paths from `start` with online cookie
/// updates. Independent of the closed form.
template <class T>
ThreeStepLaw<T> brute_force_three_step(const KernelParams<T>& params, const CookieView& cookies,
                                       const LatticePoint& start);

template <class T>
ThreeStepLaw<T> brute_force_three_step(const KernelParams<T>& params, const CookieView& cookies) {
    return brute_force_three_step(params, cookies, LatticePoint::origin(params.d));
}

/// A single three-step path with its probability.
template <class T>
struct ThreeStepPath {
    std::array<Step, 3> steps;
    T weight;
    int displacement;
};

/// All positive-probability three-step paths from `start`, in direction order.
template <class T>
std::vector<ThreeStepPath<T>> three_step_paths(const KernelParams<T>& params, const CookieView& cookies,
                                               const LatticePoint& start);

/// Effect of the cookie at one site on the three-step law.
struct CookieMonotonicity {
    double positive_with_cookie;
    double positive_without_cookie;
    double negative_with_cookie;
    double negative_without_cookie;

    double positive_difference() const { return positive_with_cookie - positive_without_cookie; }
    double negative_difference() const { return negative_with_cookie - negative_without_cookie; }
    /// P(>0) nondecreasing and P(<0) nonincreasing in the cookie indicator.
    bool monotone(double tol = 1e-15) const {
        return positive_difference() >= -tol && negative_difference() <= tol;
    }
};

CookieMonotonicity monotonicity_in_cookie(const WalkParams& params, const CookieField& field, const LatticePoint& x);

extern template ThreeStepLaw<double> three_step_distribution(const KernelParams<double>&, const CookieView&);
extern template ThreeStepLaw<Rational> three_step_distribution(const KernelParams<Rational>&, const CookieView&);
extern template ThreeStepLaw<double> brute_force_three_step(const KernelParams<double>&, const CookieView&,
                                                            const LatticePoint&);
extern template ThreeStepLaw<Rational> brute_force_three_step(const KernelParams<Rational>&, const CookieView&,
                                                              const LatticePoint&);
extern template std::vector<ThreeStepPath<double>> three_step_paths(const KernelParams<double>&, const CookieView&,
                                                                    const LatticePoint&);
extern template std::vector<ThreeStepPath<Rational>> three_step_paths(const KernelParams<Rational>&,
                                                                      const CookieView&, const LatticePoint&);

}  // namespace erwd
