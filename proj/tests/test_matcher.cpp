#include <cmath>

#include "desk_run.hpp"
#include "doctest.h"
#include "zsf/eigensolver.hpp"
#include "zsf/error.hpp"
#include "zsf/matcher.hpp"

using namespace zsf;

TEST_SUITE("matcher") {

TEST_CASE("target lists") {
    const auto& t = desk::run().table;
    const auto a = build_targets(0, t, 3);
    REQUIRE(a.size() == 3);
    CHECK(a.matched_count == 0);
    for (std::size_t k = 0; k < 3; ++k) CHECK(a.targets[k] == smooth_zero(k + 1));

    const auto b = build_targets(2, t, 1);
    REQUIRE(b.size() == 3);
    CHECK(b.targets[0] == doctest::Approx(14.1347).epsilon(1e-5));
    CHECK(b.targets[1] == doctest::Approx(21.0220).epsilon(1e-5));
    CHECK(b.targets[2] == doctest::Approx(27.2).epsilon(3e-3));

    const auto c = build_targets(34, t, 2);
    CHECK(c.targets[33] == t.zero(34));
    CHECK(c.targets[33] > smooth_zero(34));

    CHECK_THROWS_AS(build_targets(t.size() + 1, t, 1), ConfigError);
}

TEST_CASE("sequence invariants on the desk run") {
    const auto& r = desk::run();
    const std::size_t N = r.config.n_max;
    REQUIRE(r.seq.potentials.size() == N);
    REQUIRE(r.seq.corrections.size() == N);
    for (std::size_t n = 1; n <= N; ++n) {
        INFO("n = " << n);
        const auto tele = r.seq.telescoped(n);
        double worst = 0.0;
        for (std::size_t i = 0; i < tele.size(); ++i) {
            worst = std::max(worst, std::abs(tele[i] - r.v(n)[i]));
            REQUIRE(r.c(n).values[i] == doctest::Approx(r.v(n)[i] - r.v(n - 1)[i]).epsilon(1e-12));
        }
        CHECK(worst <= 1e-12 * 200.0);
        // Every stage keeps all earlier zeros and matches the new one.
        const auto ev = lowest_eigenvalues(build_hamiltonian(r.v(n)), n);
        for (std::size_t k = 1; k <= n; ++k) CHECK(std::abs(ev[k - 1] - r.table.zero(k)) <= r.config.stage_tol);
        CHECK(r.seq.stages[n - 1].max_matched_residual <= r.config.stage_tol);
    }
}

TEST_CASE("first corrections: two tails, then one more period per zero") {
    const auto& r = desk::run();
    CHECK(r.summary(1).period_count == 0);
    CHECK(r.summary(1).x_star == 0.0);
    for (std::size_t n = 2; n <= 4; ++n) CHECK(r.summary(n).period_count == static_cast<int>(n) - 1);
}

TEST_CASE("sign of the central extremum") {
    const auto& r = desk::run();
    for (std::size_t n = 1; n <= r.config.n_max; ++n) {
        const auto& s = r.summary(n);
        // Extremum nearest the center.
        const Extremum* best = &s.extrema.front();
        for (const auto& e : s.extrema) {
            if (std::abs(e.x) < std::abs(best->x)) best = &e;
        }
        const double expect = (n % 2 ? -1.0 : 1.0) * (approximation_error(n, r.table) > 0 ? 1.0 : -1.0);
        INFO("n = " << n);
        CHECK(best->value * expect > 0.0);
    }
}

TEST_CASE("corrections become local as n grows") {
    const auto& r = desk::run();
    const auto& g = r.v0.grid();
    std::vector<double> ratio;
    for (std::size_t n = 1; n <= r.config.n_max; ++n) {
        const double xt = turning_point(r.v(n), r.table.zero(n));
        double outside = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(g.x(i)) > 1.5 * xt) outside = std::max(outside, std::abs(r.c(n).values[i]));
        }
        ratio.push_back(outside / std::abs(r.summary(n).amplitude));
    }
    // Far field of the first corrections is sizable; it dies off with n.
    CHECK(ratio.front() < 0.25);
    CHECK(ratio.back() <= 0.01);
    CHECK(ratio[ratio.size() - 1] < ratio[0]);
}

TEST_CASE("too many zeros requested") {
    const auto& r = desk::run();
    MatchConfig mc;
    mc.n_max = r.table.size() + 1;
    CHECK_THROWS_AS(match_sequence(r.v0, r.table, mc), ConfigError);
}

}
