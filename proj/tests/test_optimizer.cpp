#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "zsf/eigensolver.hpp"
#include "zsf/matcher.hpp"
#include "zsf/optimizer.hpp"
#include "zsf/wkb.hpp"
#include "zsf/zeta.hpp"

using namespace zsf;

namespace {

// Harmonic well with a bump, so eigenvectors are not textbook functions.
SampledPotential bumpy(const Grid& g) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        v[i] = x * x + 1.5 * std::exp(-4.0 * (x - 0.3) * (x - 0.3));
    }
    return SampledPotential(g, v);
}

TargetSpectrum own_spectrum(const SampledPotential& v, std::size_t k) {
    return {lowest_eigenvalues(build_hamiltonian(v), k, {}, 1e-13), 0};
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("objective of the potential's own spectrum is zero") {
    const auto v = bumpy(Grid(8.0, 801));
    const auto spec = own_spectrum(v, 6);
    CHECK(objective(v, spec) <= 1e-18);
    auto shifted = spec;
    shifted.targets.resize(1);
    shifted.targets[0] -= 0.125;
    CHECK(objective(v, shifted) == doctest::Approx(0.125 * 0.125).epsilon(1e-8));
}

TEST_CASE("gradient vanishes at zero residual") {
    const auto v = bumpy(Grid(8.0, 801));
    for (double gi : gradient(v, own_spectrum(v, 5))) REQUIRE(std::abs(gi) <= 1e-8);
}

TEST_CASE("discrete gradient matches central finite differences") {
    const Grid g(8.0, 801);
    const auto v = bumpy(g);
    std::vector<double> targets;
    for (int k = 0; k < 6; ++k) targets.push_back(2.0 * k + 1.4 + 0.1 * k * k);
    const auto vals = std::vector<double>(v.values().begin(), v.values().end());
    const auto eval = evaluate_spectrum(g, vals, targets);
    const auto grad = raw_gradient(g, eval);
    oracle::SplitMix rng(2024);
    int checked = 0;
    double worst = 0.0;
    while (checked < 20) {
        // Nodes inside the well, where the gradient is not negligible.
        const auto i = static_cast<std::size_t>(rng.uniform(250.0, 550.0));
        for (double rel_h : {1e-6, 1e-4}) {
            const double h = rel_h * std::max(1.0, std::abs(vals[i]));
            auto plus = vals, minus = vals;
            plus[i] += h;
            minus[i] -= h;
            const double fd = (objective_of_values(g, plus, targets) -
                               objective_of_values(g, minus, targets)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - grad[i]) / std::abs(grad[i]));
        }
        ++checked;
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("gradient of a symmetric potential is exactly symmetric") {
    const Grid g(8.0, 801);
    const auto v = bumpy(g);
    TargetSpectrum spec{{1.0, 3.5, 5.2, 7.9}, 0};
    const auto grad = gradient(v, spec);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(grad[i] == grad[g.mirror(i)]);
}

TEST_CASE("refine leaves an optimal potential unchanged") {
    const auto v = bumpy(Grid(8.0, 801));
    auto [out, rep] = refine(v, own_spectrum(v, 5));
    CHECK(rep.iterations == 0);
    for (std::size_t i = 0; i < v.size(); ++i) REQUIRE(out[i] == v[i]);
}

TEST_CASE("refine descends, stays symmetric, and hits its targets") {
    const Grid g(8.0, 801);
    const auto v = oracle::harmonic(g);
    TargetSpectrum spec{{1.2, 3.1, 5.3, 6.9, 9.05}, 0};
    OptimizerConfig cfg;
    cfg.gradient_check_every = 10;
    auto [out, rep] = refine(v, spec, cfg);
    CHECK(rep.final_objective <= rep.initial_objective);
    CHECK(rep.max_abs_residual(spec.size()) <= 1e-4);
    for (std::size_t k = 1; k < rep.trace.size(); ++k) {
        REQUIRE(rep.trace[k].objective < rep.trace[k - 1].objective);
    }
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(out[i] == out[g.mirror(i)]);
    CHECK(rep.worst_gradient_check <= 1e-4);
    CHECK_FALSE(rep.stop_reason.empty());
}

TEST_CASE("smooth-stage refinement at desk scale") {
    const Grid g(12.0, 4001);
    MatchConfig mc;
    const auto spec = smooth_targets(mc);
    const auto raw = smooth_potential(g, 1.5 * spec.targets.back(), 0.05);
    const double f0 = objective(raw, spec);
    CHECK(f0 > 1e-2);
    CHECK(f0 < 10.0);
    auto [v0, rep] = refine(raw, spec);
    const auto ev = lowest_eigenvalues(build_hamiltonian(v0), 20);
    for (std::size_t n = 1; n <= 20; ++n) CHECK(std::abs(ev[n - 1] - smooth_zero(n)) <= 1e-3);
    CHECK(rep.final_objective < f0);
}

}
