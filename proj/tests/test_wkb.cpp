#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "zsf/eigensolver.hpp"
#include "zsf/error.hpp"
#include "zsf/wkb.hpp"
#include "zsf/zeta.hpp"

using namespace zsf;
using std::numbers::pi;

namespace {

HalfProfile parabola_profile(double x_end, double h) {
    HalfProfile p;
    for (double x = 0.0; x <= x_end + 1e-12; x += h) p.points.emplace_back(x, x * x);
    return p;
}

double sup_diff(const SampledPotential& a, const SampledPotential& b, double x_lim) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.grid().x(i)) <= x_lim) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace

TEST_SUITE("wkb") {

TEST_CASE("ground value") {
    const double e0 = ground_value();
    CHECK(e0 == doctest::Approx(13.544).epsilon(1e-3 / 13.544));
    CHECK(std::abs(phase_rhs(e0)) <= 1e-9);
    CHECK(e0 < 2.0 * pi * std::exp(1.0));
}

TEST_CASE("phase integral of a parabola") {
    const auto p = parabola_profile(6.0, 1e-3);
    CHECK(phase_integral(p, 0.0) == 0.0);
    for (double e : {1.0, 4.0, 9.5, 20.0}) {
        CHECK(phase_integral(p, e) == doctest::Approx(pi * e / 2.0).epsilon(1e-4));
    }
    double prev = 0.0;
    for (double e = 0.1; e < 30.0; e += 0.37) {
        const double v = phase_integral(p, e);
        REQUIRE(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(phase_integral(p, -0.5), DomainError);
}

TEST_CASE("phase integral at the ground value of a marched profile") {
    const auto p = march_potential(30.0, 0.05);
    CHECK(phase_integral(p, ground_value()) == 0.0);
    CHECK_THROWS_AS(phase_integral(p, ground_value() - 0.1), DomainError);
}

TEST_CASE("first march step") {
    const double de = 0.05;
    const auto p = march_potential(ground_value() + 0.5 * de, de);
    REQUIRE(p.points.size() == 2);
    const double expect = 3.0 / (4.0 * std::sqrt(de)) * phase_rhs(ground_value() + de);
    CHECK(p.points[1].first == doctest::Approx(expect).epsilon(1e-14));
    CHECK(p.points[0].first == 0.0);
    CHECK(p.points[0].second == ground_value());
}

TEST_CASE("harmonic oracle: a linear phase target marches out x^2") {
    const auto p = march_potential(26.0, 1e-3, [](double e) { return pi * e / 2.0; }, 0.0);
    double worst = 0.0;
    for (const auto& [x0, e] : p.points) {
        if (x0 <= 5.0) worst = std::max(worst, std::abs(e - x0 * x0));
    }
    CHECK(worst <= 1e-3);
    const Grid g(5.0, 1001);
    const auto v = sample_symmetric(p.points, g);
    double grid_worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) grid_worst = std::max(grid_worst, std::abs(v[i] - g.x(i) * g.x(i)));
    CHECK(grid_worst <= 1e-3);
}

TEST_CASE("profile invariants and self-consistency") {
    const double de = 0.05;
    const auto p = march_potential(150.0, de);
    CHECK(p.points.front().second == ground_value());
    for (std::size_t k = 1; k < p.points.size(); ++k) {
        REQUIRE(p.points[k].first > p.points[k - 1].first);
        REQUIRE(p.points[k].second > p.points[k - 1].second);
    }
    double worst = 0.0;
    for (const auto& [x0, e] : p.points) worst = std::max(worst, std::abs(phase_integral(p, e) - phase_rhs(e)));
    CHECK(worst <= 5.0 * de);
}

TEST_CASE("shape of the smooth potential") {
    const Grid g(12.0, 4001);
    const auto v = smooth_potential(g, 150.0, 0.05);
    CHECK(v[g.center()] == doctest::Approx(ground_value()));
    double x100 = 0.0;
    for (std::size_t i = g.center(); i < g.size(); ++i) {
        if (v[i] >= 100.0) { x100 = g.x(i); break; }
    }
    CHECK(x100 >= 6.5);
    CHECK(x100 <= 8.0);
    // Grows slower than a parabola: doubling x less than quadruples V - V(0).
    const double v0 = v[g.center()];
    CHECK(v.at(6.0) - v0 < 4.0 * (v.at(3.0) - v0));
    for (std::size_t i = g.center() + 1; i < g.size(); ++i) REQUIRE(v[i] >= v[i - 1]);
}

TEST_CASE("halving the energy step converges linearly") {
    const Grid g(12.0, 4001);
    const auto a = smooth_potential(g, 150.0, 0.1);
    const auto b = smooth_potential(g, 150.0, 0.05);
    const auto c = smooth_potential(g, 150.0, 0.025);
    const double d1 = sup_diff(a, b, 8.0);
    const double d2 = sup_diff(b, c, 8.0);
    CHECK(d2 < d1);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.5));
}

TEST_CASE("eigenvalue preview of the marched potential") {
    const Grid g(12.0, 4001);
    const auto v = smooth_potential(g, 1.5 * smooth_zero(30), 0.05);
    const auto ev = lowest_eigenvalues(build_hamiltonian(v), 20);
    for (std::size_t n = 2; n <= 20; ++n) {
        INFO("n = " << n);
        CHECK(std::abs(ev[n - 1] - smooth_zero(n)) <= 0.2);
    }
    // The ground state carries the largest semiclassical error.
    CHECK(std::abs(ev[0] - smooth_zero(1)) <= 0.25);
}

TEST_CASE("bad march arguments") {
    CHECK_THROWS_AS(march_potential(100.0, 0.0), ConfigError);
    CHECK_THROWS_AS(march_potential(10.0, 0.05), ConfigError);
    // A phase target that decreases cannot be marched.
    CHECK_THROWS_AS(march_potential(5.0, 0.1, [](double e) { return -e; }, 0.0), NumericalError);
}

}
