#pragma once

#include <cstdint>
#include <vector>

#include "erwd/model.hpp"
#include "erwd/params.hpp"
#include "erwd/three_step.hpp"

namespace erwd {

/// The walk omega and the comparison walk nu on one probability space.
///
/// nu moves in i.i.d. blocks of three steps, each with the law the walk
/// would have if every cookie were restored at the start of the block.
struct CoupledPair {
    /// Exact sample of the walk, 3 * n_blocks steps.
    Trajectory omega_path;
    /// First-coordinate increment of each omega block.
    std::vector<int> omega_blocks;
    /// First-coordinate increment of each nu block.
    std::vector<int> nu_blocks;
    /// gaps[n] = nu^[1]_{3n} - omega^[1]_{3n}, n = 0..n_blocks.
    std::vector<std::int64_t> gaps;
    std::uint64_t coupling_seed = 0;

    /// Every gap is >= 0 and the sequence never decreases.
    bool dominated() const;
};

/// Runs the monotone coupling for `n_blocks` blocks.
///
/// Per block a common uniform U picks both block increments by inverse
/// transform from the two laws ordered by displacement: the walk's law given
/// its current cookie field (enumerated) and the all-cookie law. A second
/// uniform picks the walk's three-step path inside its displacement class.
/// Requires d >= 2.
CoupledPair run_coupled(const WalkParams& params, int n_blocks, std::uint64_t seed);

/// Inverse-transform class of u under `law` (the least k with F(k) > u).
int inverse_transform(const ThreeStepLaw<double>& law, double u);

/// Exact all-cookie three-step law.
ThreeStepLaw<Rational> full_cookie_law(const KernelParams<Rational>& params);

/// Largest beta in [0, 1] at which the all-cookie block mean is still at most
/// -delta, delta being half of its magnitude 4 d mu / (2d)^3 at beta = 0.
/// Found by bisection to 1e-12. Rejects mu = 0 and d < 2.
double beta_star_bound(int d, double mu);

}  // namespace erwd
