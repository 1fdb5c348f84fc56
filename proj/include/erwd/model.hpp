#pragma once

#include <cstdint>
#include <vector>

#include "erwd/cookie_field.hpp"
#include "erwd/lattice.hpp"
#include "erwd/params.hpp"
#include "erwd/rng.hpp"

namespace erwd {

/// Probabilities of the 2d nearest-neighbour displacements, indexed by
/// Step::direction().
struct StepDistribution {
    int d = 0;
    std::vector<double> probs;

    double operator()(Step s) const { return probs[static_cast<std::size_t>(s.direction())]; }
    double right() const { return probs[0]; }
    double left() const { return probs[1]; }
};

/// One-step kernel. With a cookie at the current site the walk uses the
/// beta-branch, otherwise the mu-branch; perpendicular moves get 1/(2d).
StepDistribution step_distribution(const WalkParams& params, bool has_cookie);

/// Probability of the +e1 move.
inline double right_probability(const WalkParams& p, bool has_cookie) {
    return (has_cookie ? 1.0 + p.beta() : 1.0 - p.mu()) / (2.0 * p.d());
}

/// Maps a uniform u in [0,1) to a displacement drawn from the kernel.
///
/// [0, 1/d) is split between +e1 and -e1, the rest of [0,1) is cut into
/// 2d-2 equal cells for the perpendicular moves.
inline Step pick_step(double u, int d, double p_right) {
    const double inv_d = 1.0 / d;
    if (u < inv_d) return u < p_right ? Step{0, 1} : Step{0, -1};
    int j = static_cast<int>((u - inv_d) * (2.0 * d));
    if (j > 2 * d - 3) j = 2 * d - 3;
    return Step::from_direction(2 + j);
}

/// Draws one step from `position`, using the cookie there, then marks
/// `position` visited. Returns the new position.
LatticePoint sample_step(const WalkParams& params, CookieField& field, const LatticePoint& position, Rng& rng);

/// A sampled path from the origin.
struct Trajectory {
    LatticePoint start;
    std::vector<Step> steps;
    /// first_coord_path[i] is the first coordinate after i steps (size steps+1).
    std::vector<std::int64_t> first_coord_path;

    std::size_t size() const { return steps.size(); }
    LatticePoint endpoint() const;
    std::vector<LatticePoint> points() const;
};

/// Samples `n_steps` steps of the walk from the origin with its own field.
Trajectory run_walk(const WalkParams& params, std::int64_t n_steps, std::uint64_t seed);

/// Largest number of steps run_walk and WalkEngine accept.
inline constexpr std::int64_t kMaxWalkSteps = std::int64_t{1} << 31;

/// Reusable single-walk sampler that tracks only the packed position key and
/// the first coordinate. Produces exactly the same path as run_walk for the
/// same seed; the field's storage is recycled between walks.
class WalkEngine {
public:
    WalkEngine(const WalkParams& params, std::int64_t n_steps);

    /// First coordinate after n_steps steps of the walk with this seed.
    std::int64_t endpoint_first_coordinate(std::uint64_t seed);

private:
    WalkParams params_;
    std::int64_t n_steps_;
    CookieField field_;
    double p_right_cookie_;
    double p_right_eaten_;
    std::vector<PackedKey> units_;
};

}  // namespace erwd
