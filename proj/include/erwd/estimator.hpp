#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "erwd/params.hpp"

namespace erwd {

enum class SignVerdict { positive, negative, inconclusive };

std::string to_string(SignVerdict v);

inline constexpr double kDefaultZ = 4.0;

struct VelocityEstimate {
    /// Mean over walks of omega^[1]_n / n.
    double v1_hat = 0.0;
    /// Standard error from the across-walk sample variance.
    double std_error = 0.0;
    std::int64_t n_walks = 0;
    std::int64_t n_steps = 0;
    SignVerdict verdict = SignVerdict::inconclusive;
    std::uint64_t seed = 0;
    double z = kDefaultZ;
};

/// Verdict positive or negative only when |v1_hat| > z * stderr.
SignVerdict sign_verdict(double v1_hat, double std_error, double z);

/// Runs n_walks independent walks of n_steps steps; walk i uses the seed
/// derive_seed(seed, i). The result does not depend on `workers` (0 means
/// one per hardware thread). Requires n_walks >= 2 and n_steps >= 1.
VelocityEstimate estimate_velocity(const WalkParams& params, std::int64_t n_walks, std::int64_t n_steps,
                                   std::uint64_t seed, int workers = 0, double z = kDefaultZ);

/// n evenly spaced values from 0 to 1 (n >= 2).
std::vector<double> unit_grid(int n);

struct PhaseGrid {
    int d = 0;
    std::vector<double> beta_grid;
    std::vector<double> mu_grid;
    /// cells[i_mu * beta_grid.size() + i_beta]
    std::vector<VelocityEstimate> cells;

    const VelocityEstimate& at(std::size_t i_beta, std::size_t i_mu) const {
        return cells[i_mu * beta_grid.size() + i_beta];
    }
};

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Estimates every (beta, mu) cell; cell (i_beta, i_mu) uses the seed
/// derive_seed(base_seed, i_mu * beta_grid.size() + i_beta).
PhaseGrid phase_sweep(int d, const std::vector<double>& beta_grid, const std::vector<double>& mu_grid,
                      std::int64_t n_walks, std::int64_t n_steps, std::uint64_t base_seed, int workers = 0,
                      double z = kDefaultZ, const SweepProgress& progress = {});

inline constexpr const char* kPhaseCsvHeader = "d,beta,mu,n_walks,n_steps,v1_hat,stderr,verdict,seed";

/// One row per cell, mu-major, after kPhaseCsvHeader.
void write_phase_csv(const PhaseGrid& grid, std::ostream& os);

struct RootBudget {
    std::int64_t base_walks = 1000;
    std::int64_t base_steps = 7000;
    /// Walk count multiplier per inconclusive round.
    int escalation = 4;
    /// Largest multiple of base_walks spent on one point.
    int max_multiplier = 64;
    double z = kDefaultZ;
};

struct RootEvaluation {
    double beta;
    VelocityEstimate estimate;
};

struct RootResult {
    int d = 0;
    double mu = 0.0;
    /// False when no sign change was bracketed in [0, 1].
    bool found = false;
    double lo = 0.0;
    double hi = 1.0;
    std::string confidence_note;
    std::vector<RootEvaluation> evaluations;

    double width() const { return hi - lo; }
};

/// Stochastic bisection for the sign change of the velocity in beta.
///
/// The ends of [lo, hi] always carry a negative (lo) and positive (hi)
/// verdict. Each point is sampled with base_walks walks, multiplied by
/// `escalation` while inconclusive up to max_multiplier. An inconclusive
/// midpoint triggers probes at the two quarter points; if those are
/// inconclusive too the search stops and says so in the note.
/// Requires 0 < mu <= 1 and target_width >= 0.005.
RootResult find_beta0(int d, double mu, double target_width, const RootBudget& budget, std::uint64_t seed,
                      int workers = 0);

}  // namespace erwd
