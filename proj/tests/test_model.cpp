#include <doctest.h>

#include <cmath>
#include <set>

#include "erwd/cookie_field.hpp"
#include "erwd/errors.hpp"
#include "erwd/model.hpp"
#include "erwd/three_step.hpp"
#include "stats.hpp"

using namespace erwd;

TEST_CASE("parameters outside the unit square are rejected") {
    CHECK_THROWS_AS(WalkParams(2, 1.5, 0.0), DomainError);
    CHECK_THROWS_AS(WalkParams(2, 0.5, -0.1), DomainError);
    CHECK_THROWS_AS(WalkParams(0, 0.5, 0.5), DomainError);
    CHECK_NOTHROW(WalkParams(1, 1.0, 1.0));
    try {
        WalkParams(2, 1.5, 0.0);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("[0,1]") != std::string::npos);
    }
}

TEST_CASE("one-step kernel") {
    const WalkParams p(3, 0.4, 0.7);
    const auto fresh = step_distribution(p, true);
    const auto eaten = step_distribution(p, false);
    CHECK(fresh.right() == doctest::Approx(1.4 / 6));
    CHECK(fresh.left() == doctest::Approx(0.6 / 6));
    CHECK(eaten.right() == doctest::Approx(0.3 / 6));
    CHECK(eaten.left() == doctest::Approx(1.7 / 6));
    for (const auto* dist : {&fresh, &eaten}) {
        double total = 0.0;
        for (double q : dist->probs) total += q;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
        for (int dir = 2; dir < 6; ++dir) CHECK(dist->probs[static_cast<std::size_t>(dir)] == doctest::Approx(1.0 / 6));
    }
    // the mean first-coordinate drift is beta/d on a fresh site and -mu/d otherwise
    CHECK(fresh.right() - fresh.left() == doctest::Approx(0.4 / 3));
    CHECK(eaten.right() - eaten.left() == doctest::Approx(-0.7 / 3));
}

TEST_CASE("pick_step partitions the unit interval by the kernel") {
    const int d = 3;
    const double pr = 0.25;
    CHECK(pick_step(0.0, d, pr) == Step{0, 1});
    CHECK(pick_step(0.2499, d, pr) == Step{0, 1});
    CHECK(pick_step(0.25, d, pr) == Step{0, -1});
    CHECK(pick_step(1.0 / 3 - 1e-12, d, pr) == Step{0, -1});
    CHECK(pick_step(1.0 / 3 + 1e-12, d, pr) == Step{1, 1});
    CHECK(pick_step(0.9999999999, d, pr) == Step{2, -1});
    // each perpendicular direction gets a cell of length 1/(2d)
    std::vector<int> hits(6, 0);
    const int n = 60000;
    for (int i = 0; i < n; ++i) hits[static_cast<std::size_t>(pick_step((i + 0.5) / n, d, pr).direction())]++;
    CHECK(hits[0] == n / 4);
    CHECK(hits[1] == n / 12);
    for (int dir = 2; dir < 6; ++dir) CHECK(hits[static_cast<std::size_t>(dir)] == n / 6);
}

TEST_CASE("packed keys round trip and the fallback set agrees") {
    for (int d : {1, 2, 5, 12, 16}) {
        CookieField packed(d, 100);
        CookieField sparse(d, 1'000'000'000);
        Rng rng(7 + d);
        std::set<std::vector<int>> seen;
        for (int i = 0; i < 2000; ++i) {
            LatticePoint x(d);
            std::vector<int> key;
            for (int a = 0; a < d; ++a) {
                x[a] = static_cast<int>(rng() % 9) - 4;
                key.push_back(x[a]);
            }
            const bool fresh = seen.insert(key).second;
            CHECK(packed.insert(x) == fresh);
            CHECK(sparse.insert(x) == fresh);
        }
        CHECK(packed.size() == seen.size());
        CHECK(sparse.size() == seen.size());
        if (d <= 12) CHECK(packed.packed());
        if (d > 4) CHECK_FALSE(sparse.packed());
    }
}

TEST_CASE("run_walk is deterministic and nearest-neighbour") {
    const WalkParams p(2, 0.3, 0.6);
    const auto a = run_walk(p, 500, 42);
    const auto b = run_walk(p, 500, 42);
    const auto c = run_walk(p, 500, 43);
    CHECK(a.first_coord_path == b.first_coord_path);
    CHECK(a.steps == b.steps);
    CHECK(a.first_coord_path != c.first_coord_path);
    REQUIRE(a.first_coord_path.size() == 501);
    for (std::size_t i = 1; i < a.first_coord_path.size(); ++i) {
        CHECK(std::abs(a.first_coord_path[i] - a.first_coord_path[i - 1]) <= 1);
    }
    CHECK(a.endpoint()[0] == a.first_coord_path.back());
    CHECK(run_walk(p, 0, 1).steps.empty());
    CHECK_THROWS_AS(run_walk(p, -1, 1), DomainError);
    CHECK_THROWS_AS(run_walk(p, kMaxWalkSteps + 1, 1), BudgetError);
}

TEST_CASE("WalkEngine reproduces run_walk exactly") {
    for (int d : {1, 2, 3, 6, 12, 16}) {
        const WalkParams p(d, 0.8, 0.4);
        WalkEngine engine(p, 300);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            CHECK(engine.endpoint_first_coordinate(seed) == run_walk(p, 300, seed).first_coord_path.back());
        }
    }
}

TEST_CASE("a site loses its cookie only when the walk leaves it") {
    const WalkParams p(2, 1.0, 1.0);
    // with beta = mu = 1 the walk never steps left from a fresh site and
    // never steps right from an eaten one
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto t = run_walk(p, 50, seed);
        const auto pts = t.points();
        std::set<LatticePoint> visited;
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            const bool fresh = visited.insert(pts[i]).second;
            if (fresh) CHECK(t.steps[i] != Step{0, -1});
            if (!fresh) CHECK(t.steps[i] != Step{0, 1});
        }
    }
}

TEST_CASE("three-step endpoint law of the sampler matches exact enumeration") {
    for (int d : {2, 3}) {
        const WalkParams p(d, 0.6, 0.9);
        const CookieField empty(d, 8);
        const auto exact = brute_force_three_step(kernel_params(p), CookieView(empty));
        std::vector<long long> counts(7, 0);
        const int n = 200000;
        WalkEngine engine(p, 3);
        for (int i = 0; i < n; ++i) counts[static_cast<std::size_t>(engine.endpoint_first_coordinate(derive_seed(99, i)) + 3)]++;
        std::vector<double> probs(exact.probs.begin(), exact.probs.end());
        CHECK(erwd::testing::chi_square_p(counts, probs) > 1e-6);
    }
}

TEST_CASE("derived seeds differ across streams") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 10000; ++i) seeds.insert(derive_seed(1, i));
    CHECK(seeds.size() == 10000);
    Rng a(5);
    Rng b(5);
    for (int i = 0; i < 10; ++i) CHECK(a() == b());
    Rng u(11);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}
