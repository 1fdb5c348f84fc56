#include "erwd/estimator.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "erwd/errors.hpp"
#include "erwd/model.hpp"
#include "erwd/parallel.hpp"
#include "erwd/rng.hpp"

namespace erwd {

namespace {

/// Appends endpoints of walks first..first+count-1 (seeded by index) to `out`.
void collect_endpoints(const WalkParams& params, std::int64_t first, std::int64_t count, std::int64_t n_steps,
                       std::uint64_t seed, int workers, std::vector<std::int64_t>& out) {
    const std::size_t base = out.size();
    out.resize(base + static_cast<std::size_t>(count));
    if (workers <= 0) workers = default_workers();
    std::vector<std::unique_ptr<WalkEngine>> engines(static_cast<std::size_t>(workers));
    parallel_for(
        static_cast<std::size_t>(count), workers,
        [&](std::size_t i, int w) {
            auto& engine = engines[static_cast<std::size_t>(w)];
            if (!engine) engine = std::make_unique<WalkEngine>(params, n_steps);
            const auto index = static_cast<std::uint64_t>(first) + i;
            out[base + i] = engine->endpoint_first_coordinate(derive_seed(seed, index));
        },
        4);
}

VelocityEstimate summarize(const std::vector<std::int64_t>& endpoints, std::int64_t n_steps, std::uint64_t seed,
                           double z) {
    const auto n = static_cast<double>(endpoints.size());
    const auto steps = static_cast<double>(n_steps);
    double sum = 0.0;
    double comp = 0.0;
    for (std::int64_t x : endpoints) {
        const double v = static_cast<double>(x) / steps;
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    const double mean = (sum + comp) / n;
    double ss = 0.0;
    for (std::int64_t x : endpoints) {
        const double r = static_cast<double>(x) / steps - mean;
        ss += r * r;
    }
    VelocityEstimate e;
    e.v1_hat = mean;
    e.std_error = std::sqrt(ss / (n - 1.0) / n);
    e.n_walks = static_cast<std::int64_t>(endpoints.size());
    e.n_steps = n_steps;
    e.seed = seed;
    e.z = z;
    e.verdict = sign_verdict(e.v1_hat, e.std_error, z);
    return e;
}

void check_budget(std::int64_t n_walks, std::int64_t n_steps) {
    if (n_walks < 2) throw DomainError("n_walks must be >= 2, got " + std::to_string(n_walks));
    if (n_steps < 1) throw DomainError("n_steps must be >= 1, got " + std::to_string(n_steps));
    if (n_steps > kMaxWalkSteps) throw BudgetError("n_steps exceeds the walk limit");
}

}  // namespace

std::string to_string(SignVerdict v) {
    switch (v) {
        case SignVerdict::positive: return "positive";
        case SignVerdict::negative: return "negative";
        case SignVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

SignVerdict sign_verdict(double v1_hat, double std_error, double z) {
    if (std::abs(v1_hat) > z * std_error) return v1_hat > 0 ? SignVerdict::positive : SignVerdict::negative;
    return SignVerdict::inconclusive;
}

VelocityEstimate estimate_velocity(const WalkParams& params, std::int64_t n_walks, std::int64_t n_steps,
                                   std::uint64_t seed, int workers, double z) {
    check_budget(n_walks, n_steps);
    std::vector<std::int64_t> endpoints;
    endpoints.reserve(static_cast<std::size_t>(n_walks));
    collect_endpoints(params, 0, n_walks, n_steps, seed, workers, endpoints);
    return summarize(endpoints, n_steps, seed, z);
}

std::vector<double> unit_grid(int n) {
    if (n < 2) throw DomainError("grid needs at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
    return g;
}

PhaseGrid phase_sweep(int d, const std::vector<double>& beta_grid, const std::vector<double>& mu_grid,
                      std::int64_t n_walks, std::int64_t n_steps, std::uint64_t base_seed, int workers, double z,
                      const SweepProgress& progress) {
    check_budget(n_walks, n_steps);
    if (beta_grid.empty() || mu_grid.empty()) throw DomainError("phase grid axes must be nonempty");
    for (double b : beta_grid) WalkParams(d, b, 0.0);
    for (double m : mu_grid) WalkParams(d, 0.0, m);

    PhaseGrid grid{d, beta_grid, mu_grid, {}};
    const std::size_t total = beta_grid.size() * mu_grid.size();
    grid.cells.reserve(total);
    for (std::size_t im = 0; im < mu_grid.size(); ++im) {
        for (std::size_t ib = 0; ib < beta_grid.size(); ++ib) {
            const std::size_t cell = im * beta_grid.size() + ib;
            const WalkParams p(d, beta_grid[ib], mu_grid[im]);
            grid.cells.push_back(estimate_velocity(p, n_walks, n_steps, derive_seed(base_seed, cell), workers, z));
            if (progress) progress(cell + 1, total);
        }
    }
    return grid;
}

void write_phase_csv(const PhaseGrid& grid, std::ostream& os) {
    os << kPhaseCsvHeader << '\n';
    std::ostringstream line;
    for (std::size_t im = 0; im < grid.mu_grid.size(); ++im) {
        for (std::size_t ib = 0; ib < grid.beta_grid.size(); ++ib) {
            const auto& c = grid.at(ib, im);
            line.str("");
            line << std::setprecision(17) << grid.d << ',' << grid.beta_grid[ib] << ',' << grid.mu_grid[im] << ','
                 << c.n_walks << ',' << c.n_steps << ',' << c.v1_hat << ',' << c.std_error << ','
                 << to_string(c.verdict) << ',' << c.seed;
            os << line.str() << '\n';
        }
    }
}

namespace {

/// Samples one beta with escalating walk counts until a verdict is reached.
class PointSampler {
public:
    PointSampler(int d, double mu, const RootBudget& budget, std::uint64_t seed, int workers)
        : d_(d), mu_(mu), budget_(budget), seed_(seed), workers_(workers) {}

    VelocityEstimate operator()(double beta) {
        const WalkParams p(d_, beta, mu_);
        const std::uint64_t seed = derive_seed(seed_, points_++);
        std::vector<std::int64_t> endpoints;
        std::int64_t multiplier = 1;
        while (true) {
            const std::int64_t want = budget_.base_walks * multiplier;
            const auto have = static_cast<std::int64_t>(endpoints.size());
            collect_endpoints(p, have, want - have, budget_.base_steps, seed, workers_, endpoints);
            const auto e = summarize(endpoints, budget_.base_steps, seed, budget_.z);
            if (e.verdict != SignVerdict::inconclusive || multiplier * budget_.escalation > budget_.max_multiplier) {
                return e;
            }
            multiplier *= budget_.escalation;
        }
    }

private:
    int d_;
    double mu_;
    RootBudget budget_;
    std::uint64_t seed_;
    int workers_;
    std::uint64_t points_ = 0;
};

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

}  // namespace

RootResult find_beta0(int d, double mu, double target_width, const RootBudget& budget, std::uint64_t seed,
                      int workers) {
    const WalkParams checked(d, 0.0, mu);
    if (!(mu > 0.0)) throw DomainError("find_beta0 requires 0 < mu <= 1");
    if (!(target_width >= 0.005)) throw DomainError("target_width must be >= 0.005");
    check_budget(budget.base_walks, budget.base_steps);
    if (budget.escalation < 2 || budget.max_multiplier < 1) throw DomainError("invalid escalation settings");

    RootResult r;
    r.d = d;
    r.mu = mu;
    PointSampler sample(d, mu, budget, seed, workers);
    auto eval = [&](double beta) {
        r.evaluations.push_back({beta, sample(beta)});
        return r.evaluations.back().estimate.verdict;
    };

    const SignVerdict at0 = eval(0.0);
    const SignVerdict at1 = eval(1.0);
    if (at0 != SignVerdict::negative || at1 != SignVerdict::positive) {
        r.found = false;
        r.confidence_note = "no sign change bracketed in [0, 1]: verdict " + to_string(at0) + " at beta = 0, " +
                            to_string(at1) + " at beta = 1";
        return r;
    }
    r.found = true;
    double lo = 0.0;
    double hi = 1.0;
    // moves an end of the bracket to beta if the verdict there is conclusive
    auto apply = [&](double beta, SignVerdict v) {
        if (!(lo < beta && beta < hi)) return false;
        if (v == SignVerdict::negative) {
            lo = beta;
            return true;
        }
        if (v == SignVerdict::positive) {
            hi = beta;
            return true;
        }
        return false;
    };
    std::string note;
    while (hi - lo > target_width) {
        const double mid = 0.5 * (lo + hi);
        if (apply(mid, eval(mid))) continue;
        const double q1 = 0.5 * (lo + mid);
        const double q3 = 0.5 * (mid + hi);
        const bool moved_lo = apply(q1, eval(q1));
        const bool moved_hi = apply(q3, eval(q3));
        if (!moved_lo && !moved_hi) {
            note = "stopped early: beta = " + fmt(q1) + ", " + fmt(mid) + " and " + fmt(q3) +
                   " stay inconclusive at " + std::to_string(budget.max_multiplier) + "x the base budget; ";
            break;
        }
    }
    r.lo = lo;
    r.hi = hi;
    std::ostringstream os;
    os << note << "velocity negative at beta = " << fmt(lo) << " and positive at beta = " << fmt(hi) << " (z = "
       << budget.z << ", " << budget.base_steps << " steps); interval width " << fmt(hi - lo)
       << (hi - lo <= target_width ? " meets" : " exceeds") << " the target " << fmt(target_width);
    r.confidence_note = os.str();
    return r;
}

}  // namespace erwd
