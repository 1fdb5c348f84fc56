#include "erwd/model.hpp"

#include <new>
#include <string>

#include "erwd/errors.hpp"

namespace erwd {

StepDistribution step_distribution(const WalkParams& params, bool has_cookie) {
    const int d = params.d();
    StepDistribution dist{d, std::vector<double>(static_cast<std::size_t>(2 * d), 1.0 / (2.0 * d))};
    if (has_cookie) {
        dist.probs[0] = (1.0 + params.beta()) / (2.0 * d);
        dist.probs[1] = (1.0 - params.beta()) / (2.0 * d);
    } else {
        dist.probs[0] = (1.0 - params.mu()) / (2.0 * d);
        dist.probs[1] = (1.0 + params.mu()) / (2.0 * d);
    }
    return dist;
}

LatticePoint sample_step(const WalkParams& params, CookieField& field, const LatticePoint& position, Rng& rng) {
    if (field.dimension() != params.d() || position.dimension() != params.d()) {
        throw DomainError("sample_step: dimension mismatch between params, field and position");
    }
    const bool cookie = field.insert(position);
    return position + pick_step(rng.uniform01(), params.d(), right_probability(params, cookie));
}

LatticePoint Trajectory::endpoint() const {
    LatticePoint p = start;
    for (Step s : steps) p += s;
    return p;
}

std::vector<LatticePoint> Trajectory::points() const {
    std::vector<LatticePoint> out;
    out.reserve(steps.size() + 1);
    out.push_back(start);
    for (Step s : steps) out.push_back(out.back() + s);
    return out;
}

namespace {

void check_steps(std::int64_t n_steps) {
    if (n_steps < 0) throw DomainError("n_steps must be >= 0, got " + std::to_string(n_steps));
    if (n_steps > kMaxWalkSteps) {
        throw BudgetError("n_steps " + std::to_string(n_steps) + " exceeds the walk limit " +
                          std::to_string(kMaxWalkSteps));
    }
}

}  // namespace

Trajectory run_walk(const WalkParams& params, std::int64_t n_steps, std::uint64_t seed) {
    check_steps(n_steps);
    const int d = params.d();
    Trajectory traj{LatticePoint::origin(d), {}, {}};
    try {
        traj.steps.reserve(static_cast<std::size_t>(n_steps));
        traj.first_coord_path.reserve(static_cast<std::size_t>(n_steps) + 1);
    } catch (const std::bad_alloc&) {
        throw BudgetError("not enough memory to record a walk of " + std::to_string(n_steps) + " steps");
    }
    CookieField field(d, n_steps);
    Rng rng(seed);
    LatticePoint pos = traj.start;
    std::int64_t x1 = 0;
    traj.first_coord_path.push_back(0);
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const bool cookie = field.insert(pos);
        const Step s = pick_step(rng.uniform01(), d, right_probability(params, cookie));
        pos += s;
        x1 += s.first();
        traj.steps.push_back(s);
        traj.first_coord_path.push_back(x1);
    }
    return traj;
}

WalkEngine::WalkEngine(const WalkParams& params, std::int64_t n_steps)
    : params_(params),
      n_steps_(n_steps),
      field_(params.d(), n_steps),
      p_right_cookie_(right_probability(params, true)),
      p_right_eaten_(right_probability(params, false)) {
    check_steps(n_steps);
    if (field_.packed()) {
        for (int a = 0; a < params.d(); ++a) units_.push_back(field_.coder().unit(a));
    }
}

std::int64_t WalkEngine::endpoint_first_coordinate(std::uint64_t seed) {
    const int d = params_.d();
    Rng rng(seed);
    field_.clear();
    std::int64_t x1 = 0;
    if (!field_.packed()) {
        LatticePoint pos = LatticePoint::origin(d);
        for (std::int64_t i = 0; i < n_steps_; ++i) {
            const bool cookie = field_.insert(pos);
            const Step s = pick_step(rng.uniform01(), d, cookie ? p_right_cookie_ : p_right_eaten_);
            pos += s;
            x1 += s.first();
        }
        return x1;
    }
    PackedKey key = field_.coder().encode(LatticePoint::origin(d));
    const PackedKey e1 = units_[0];
    for (std::int64_t i = 0; i < n_steps_; ++i) {
        const bool cookie = field_.insert_key(key);
        const Step s = pick_step(rng.uniform01(), d, cookie ? p_right_cookie_ : p_right_eaten_);
        if (s.axis == 0) {
            if (s.sign > 0) {
                key += e1;
                ++x1;
            } else {
                key -= e1;
                --x1;
            }
        } else if (s.sign > 0) {
            key += units_[static_cast<std::size_t>(s.axis)];
        } else {
            key -= units_[static_cast<std::size_t>(s.axis)];
        }
    }
    return x1;
}

}  // namespace erwd
