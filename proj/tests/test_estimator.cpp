#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <sstream>

#include "erwd/errors.hpp"
#include "erwd/estimator.hpp"
#include "erwd/expansion.hpp"
#include "erwd/rng.hpp"
#include "erwd/three_step.hpp"

using namespace erwd;

TEST_CASE("results do not depend on the worker count") {
    const WalkParams p(3, 0.4, 0.6);
    const auto a = estimate_velocity(p, 300, 500, 17, 1);
    const auto b = estimate_velocity(p, 300, 500, 17, 3);
    const auto c = estimate_velocity(p, 300, 500, 17, 8);
    CHECK(a.v1_hat == b.v1_hat);
    CHECK(a.std_error == b.std_error);
    CHECK(a.v1_hat == c.v1_hat);
    const auto g1 = phase_sweep(2, unit_grid(3), unit_grid(3), 50, 100, 5, 1);
    const auto g2 = phase_sweep(2, unit_grid(3), unit_grid(3), 50, 100, 5, 4);
    std::ostringstream s1;
    std::ostringstream s2;
    write_phase_csv(g1, s1);
    write_phase_csv(g2, s2);
    CHECK(s1.str() == s2.str());
}

TEST_CASE("sign verdict threshold") {
    CHECK(sign_verdict(0.5, 0.1, 4.0) == SignVerdict::positive);
    CHECK(sign_verdict(-0.5, 0.1, 4.0) == SignVerdict::negative);
    CHECK(sign_verdict(0.4, 0.1, 4.0) == SignVerdict::inconclusive);
    CHECK(sign_verdict(0.4, 0.1, 3.0) == SignVerdict::positive);
    CHECK(to_string(SignVerdict::inconclusive) == "inconclusive");
}

TEST_CASE("simple random walk rarely gets a sign") {
    const WalkParams p(2, 0.0, 0.0);
    int false_signs = 0;
    for (std::uint64_t r = 0; r < 1000; ++r) {
        const auto e = estimate_velocity(p, 200, 100, derive_seed(123, r), 1);
        if (e.verdict != SignVerdict::inconclusive) ++false_signs;
    }
    CHECK(false_signs <= 1);
}

TEST_CASE("three-step estimate matches the exact mean") {
    for (auto [beta, mu] : {std::pair{0.5, 0.5}, std::pair{0.0, 0.8}, std::pair{1.0, 0.2}}) {
        const WalkParams p(2, beta, mu);
        const auto e = estimate_velocity(p, 400000, 3, 77);
        const CookieField empty(2, 8);
        const double exact = static_cast<double>(three_step_distribution(exact_kernel_params(p), CookieView(empty)).mean);
        CHECK(std::abs(3 * e.v1_hat - exact) < 4 * 3 * e.std_error);
    }
}

TEST_CASE("clear cases at the figure budget") {
    CHECK(estimate_velocity(WalkParams(2, 0.5, 0.0), 1000, 7000, 1).verdict == SignVerdict::positive);
    CHECK(estimate_velocity(WalkParams(2, 0.02, 0.5), 1000, 7000, 1).verdict == SignVerdict::negative);
}

TEST_CASE("estimate_velocity preconditions") {
    const WalkParams p(2, 0.5, 0.5);
    CHECK_THROWS_AS(estimate_velocity(p, 1, 10, 1), DomainError);
    CHECK_THROWS_AS(estimate_velocity(p, 10, 0, 1), DomainError);
    CHECK_THROWS_AS(unit_grid(1), DomainError);
    CHECK_THROWS_AS(phase_sweep(2, {0.0, 1.5}, {0.0}, 10, 10, 1), DomainError);
}

TEST_CASE("phase grid layout and CSV") {
    const auto g = phase_sweep(2, unit_grid(4), unit_grid(3), 20, 50, 99, 2);
    REQUIRE(g.cells.size() == 12);
    CHECK(g.at(1, 2).seed == derive_seed(99, 2 * 4 + 1));
    CHECK(g.at(1, 2).v1_hat == estimate_velocity(WalkParams(2, 1.0 / 3, 1.0), 20, 50, derive_seed(99, 9)).v1_hat);
    std::ostringstream os;
    write_phase_csv(g, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kPhaseCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(rows == 12);
}

TEST_CASE("find_beta0 is deterministic and brackets a sign change") {
    RootBudget b;
    b.base_walks = 100;
    b.base_steps = 1000;
    b.max_multiplier = 16;
    const auto r1 = find_beta0(2, 0.8, 0.1, b, 3, 1);
    const auto r2 = find_beta0(2, 0.8, 0.1, b, 3, 2);
    REQUIRE(r1.found);
    CHECK(r1.lo == r2.lo);
    CHECK(r1.hi == r2.hi);
    CHECK(r1.confidence_note == r2.confidence_note);
    CHECK(r1.lo < r1.hi);
    CHECK(r1.evaluations.size() == r2.evaluations.size());
    for (const auto& e : r1.evaluations) {
        if (e.beta == r1.lo) CHECK(e.estimate.verdict == SignVerdict::negative);
        if (e.beta == r1.hi) CHECK(e.estimate.verdict == SignVerdict::positive);
    }
}

TEST_CASE("find_beta0 reports a missing bracket") {
    RootBudget b;
    b.base_walks = 20;
    b.base_steps = 50;
    b.max_multiplier = 1;
    const auto r = find_beta0(2, 0.001, 0.1, b, 1, 1);
    CHECK_FALSE(r.found);
    CHECK(r.confidence_note.find("no sign change") != std::string::npos);
    CHECK_THROWS_AS(find_beta0(2, 0.0, 0.1, b, 1), DomainError);
    CHECK_THROWS_AS(find_beta0(2, 0.5, 0.001, b, 1), DomainError);
}

TEST_CASE("Monte Carlo agrees with the truncated expansion in d = 6") {
    const auto table = GreensTable::computed(5, 5, 2);
    for (auto [beta, mu] : {std::pair{1.0, 0.0}, std::pair{0.5, 0.5}}) {
        const WalkParams p(6, beta, mu);
        const auto ps = partial_speed(p, 5, table);
        const auto e = estimate_velocity(p, 4000, 4000, 11);
        CHECK(std::abs(ps.velocity - e.v1_hat) <= ps.tail_bound + 4 * e.std_error);
    }
}
