#include "erwd/coupling.hpp"

#include <array>
#include <cmath>
#include <string>

#include "erwd/errors.hpp"
#include "erwd/rng.hpp"

namespace erwd {

namespace {

constexpr double kTieWindow = 1e-12;

ThreeStepLaw<double> to_double(const ThreeStepLaw<Rational>& law) {
    ThreeStepLaw<double> out;
    for (int k = -3; k <= 3; ++k) out.prob(k) = static_cast<double>(law.prob(k));
    out.mean = static_cast<double>(law.mean);
    return out;
}

template <class T>
int inverse_class(const ThreeStepLaw<T>& law, const T& u) {
    T cdf{};
    for (int k = -3; k < 3; ++k) {
        cdf += law.prob(k);
        if (u < cdf) return k;
    }
    return 3;
}

/// True if u is within the tie window of any partial sum of the law.
bool near_threshold(const ThreeStepLaw<double>& law, double u) {
    double cdf = 0.0;
    for (int k = -3; k < 3; ++k) {
        cdf += law.prob(k);
        if (std::abs(u - cdf) < kTieWindow) return true;
    }
    return false;
}

}  // namespace

bool CoupledPair::dominated() const {
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i] < 0) return false;
        if (i > 0 && gaps[i] < gaps[i - 1]) return false;
    }
    return true;
}

int inverse_transform(const ThreeStepLaw<double>& law, double u) { return inverse_class(law, u); }

ThreeStepLaw<Rational> full_cookie_law(const KernelParams<Rational>& params) {
    const CookieField empty(params.d, 8);
    return three_step_distribution(params, CookieView(empty));
}

CoupledPair run_coupled(const WalkParams& params, int n_blocks, std::uint64_t seed) {
    const int d = params.d();
    if (d < 2) throw DomainError("run_coupled requires d >= 2");
    if (n_blocks < 0) throw DomainError("n_blocks must be >= 0");

    const auto kp = kernel_params(params);
    const auto exact_kp = exact_kernel_params(params);
    const auto full_exact = full_cookie_law(exact_kp);
    const auto full = to_double(full_exact);

    CoupledPair out;
    out.coupling_seed = seed;
    out.omega_path.start = LatticePoint::origin(d);
    out.omega_path.first_coord_path.push_back(0);
    out.gaps.push_back(0);
    out.omega_blocks.reserve(static_cast<std::size_t>(n_blocks));
    out.nu_blocks.reserve(static_cast<std::size_t>(n_blocks));

    CookieField field(d, 3 * static_cast<std::int64_t>(n_blocks));
    Rng rng(seed);
    LatticePoint pos = out.omega_path.start;
    std::int64_t omega1 = 0;
    std::int64_t nu1 = 0;

    for (int b = 0; b < n_blocks; ++b) {
        const double u = rng.uniform01();
        const double u_path = rng.uniform01();

        const CookieView view(field);
        const auto paths = three_step_paths(kp, view, pos);
        ThreeStepLaw<double> law;
        for (const auto& p : paths) law.prob(p.displacement) += p.weight;

        int k_omega = inverse_class(law, u);
        int k_nu = inverse_class(full, u);
        if (near_threshold(law, u) || near_threshold(full, u)) {
            const Rational ue(u);
            k_omega = inverse_class(brute_force_three_step(exact_kp, view, pos), ue);
            k_nu = inverse_class(full_exact, ue);
        }

        // path of the walk inside its class, proportional to probability
        const double target = u_path * law.prob(k_omega);
        const ThreeStepPath<double>* chosen = nullptr;
        double acc = 0.0;
        for (const auto& p : paths) {
            if (p.displacement != k_omega) continue;
            chosen = &p;
            acc += p.weight;
            if (target < acc) break;
        }
        if (chosen == nullptr) throw Error("coupling: empty displacement class");

        for (Step s : chosen->steps) {
            field.insert(pos);
            pos += s;
            omega1 += s.first();
            out.omega_path.steps.push_back(s);
            out.omega_path.first_coord_path.push_back(omega1);
        }
        nu1 += k_nu;
        out.omega_blocks.push_back(k_omega);
        out.nu_blocks.push_back(k_nu);
        out.gaps.push_back(nu1 - omega1);
    }
    return out;
}

double beta_star_bound(int d, double mu) {
    if (d < 2) throw DomainError("beta_star_bound requires d >= 2");
    const WalkParams checked(d, 0.0, mu);
    if (mu <= 0.0) throw DomainError("beta_star_bound requires mu > 0 (no negative-drift regime at mu = 0)");

    const Rational cube = Rational(2 * d) * Rational(2 * d) * Rational(2 * d);
    const Rational delta = Rational(2 * d) * Rational(mu) / cube;
    auto mean_at = [&](double beta) {
        const WalkParams p(d, beta, mu);
        return full_cookie_law(exact_kernel_params(p)).mean;
    };
    auto ok = [&](double beta) { return mean_at(beta) <= -delta; };

    if (ok(1.0)) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace erwd
