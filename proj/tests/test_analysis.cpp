#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "desk_run.hpp"
#include "doctest.h"
#include "zsf/analysis.hpp"
#include "zsf/error.hpp"
#include "zsf/reconstruction.hpp"
#include "zsf/wkb.hpp"

using namespace zsf;
using std::numbers::pi;

namespace {

// a cos(kx) for |x| <= m pi / k, then a Gaussian decay from the last extremum.
CorrectionProfile windowed_cosine(const Grid& g, double a, double k, int m, std::size_t n) {
    const double x_star = m * pi / k;
    const double end = a * std::cos(m * pi);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = std::abs(g.x(i));
        v[i] = x <= x_star ? a * std::cos(k * x) : end * std::exp(-std::pow((x - x_star) / 0.7, 2));
    }
    return {g, v, n};
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("windowed cosine: amplitude, periods, region") {
    const Grid g(12.0, 4001);
    for (int m : {1, 2, 5}) {
        const std::size_t n = static_cast<std::size_t>(m) + 1;
        const auto c = windowed_cosine(g, 2.0, 3.0, m, n);
        const auto s = summarize_oscillation(c);
        CHECK(s.period_count == m);
        CHECK(std::abs(s.amplitude) == doctest::Approx(2.0).epsilon(1e-3));
        CHECK(s.amplitude * (n % 2 ? -1.0 : 1.0) > 0.0);
        CHECK(s.x_star == doctest::Approx(m * pi / 3.0).epsilon(1e-3));
        CHECK(s.zero_crossings.size() == static_cast<std::size_t>(2 * m));
    }
}

TEST_CASE("a single bump is the degenerate two-tail case") {
    const Grid g(6.0, 1201);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = 3.0 * std::exp(-g.x(i) * g.x(i));
    const auto s = summarize_oscillation({g, v, 1});
    CHECK(s.period_count == 0);
    CHECK(s.x_star == 0.0);
    CHECK(std::abs(s.amplitude) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("a zero correction is rejected") {
    const Grid g(6.0, 101);
    CHECK_THROWS_AS(summarize_oscillation({g, std::vector<double>(g.size(), 0.0), 3}), DataError);
}

TEST_CASE("amplitude law residual is zero for the law itself") {
    const auto& t = desk::run().table;
    std::vector<OscillationSummary> sums;
    for (std::size_t n = 1; n <= 5; ++n) {
        OscillationSummary s;
        s.n = n;
        s.amplitude = 2.0 * approximation_error(n, t);
        sums.push_back(s);
    }
    for (double r : amplitude_law_residuals(sums, t)) CHECK(r == 0.0);
}

TEST_CASE("wavelengths of a pure cosine") {
    const Grid g(12.0, 4001);
    const double k = 2.5;
    const auto c = windowed_cosine(g, 1.0, k, 6, 7);
    const auto zc = wavelength_zero_crossing(c);
    REQUIRE(!zc.empty());
    for (const auto& w : zc) CHECK(w.wavelength == doctest::Approx(2.0 * pi / k).epsilon(1e-4));
    const auto cv = wavelength_curvature(c);
    REQUIRE(!cv.empty());
    const auto s = summarize_oscillation(c);
    for (const auto& w : cv) {
        if (std::abs(w.x) < s.x_star - 0.05) {
            REQUIRE(w.wavelength == doctest::Approx(2.0 * pi / k).epsilon(1e-3));
        }
        const auto i = g.center() + static_cast<std::size_t>(std::lround(w.x / g.spacing()));
        REQUIRE(std::abs(c.values[i]) >= 0.1 * std::abs(s.amplitude));
    }
    CHECK(wavelength_zero_crossing({g, std::vector<double>(g.size(), 1.0), 1}).empty());
}

TEST_CASE("curvature exclusion zone is exactly the small-|C| set") {
    const Grid g(12.0, 4001);
    const auto c = windowed_cosine(g, 1.0, 2.5, 6, 7);
    const auto s = summarize_oscillation(c);
    const auto cv = wavelength_curvature(c);
    std::size_t expected = 0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        if (std::abs(c.values[i]) >= 0.1 * std::abs(s.amplitude)) ++expected;
    }
    CHECK(cv.size() == expected);
}

TEST_CASE("WKB wavelength") {
    const Grid g(4.0, 401);
    const auto flat = SampledPotential::constant(g, 0.0);
    CHECK(wkb_wavelength(flat, pi * pi, 1.3) == doctest::Approx(1.0));
    const auto& r = desk::run();
    CHECK(wkb_wavelength(r.v0, r.table.zero(1), 0.0) == doctest::Approx(pi / std::sqrt(r.table.zero(1) - r.v0[r.v0.grid().center()])));
    const auto bowl = SampledPotential::constant(g, 13.544);
    CHECK(wkb_wavelength(bowl, 14.1347, 0.0) == doctest::Approx(4.09).epsilon(1e-3));
    const double xt = turning_point(r.v(5), r.table.zero(5));
    CHECK(wkb_wavelength(r.v(5), r.table.zero(5), xt - 1e-3) > 5.0 * wkb_wavelength(r.v(5), r.table.zero(5), 0.0));
    CHECK_THROWS_AS(wkb_wavelength(r.v(5), r.table.zero(5), xt + 0.1), DomainError);
}

TEST_CASE("tails: round trip, symmetry, averaging") {
    const Grid g(12.0, 4001);
    const auto c = windowed_cosine(g, 2.0, 3.0, 2, 3);
    const auto s = summarize_oscillation(c);
    const auto right = extract_tail(c, s, Side::right);
    const auto left = extract_tail(c, s, Side::left);
    REQUIRE(right.values.size() == left.values.size());
    for (std::size_t i = 0; i < right.values.size(); ++i) {
        REQUIRE(right.values[i] == left.values[i]);
        const double x = s.x_star + right.offsets[i];
        REQUIRE(right.values[i] * s.amplitude == doctest::Approx(c.values[g.center() + static_cast<std::size_t>(std::lround(x / g.spacing()))]));
    }
    CHECK(right.offsets.front() == 0.0);
    const auto same = average_tails({right, right, right});
    for (std::size_t i = 0; i < same.values.size(); ++i) {
        REQUIRE(same.values[i] == doctest::Approx(right.values[i] / -right.values[0]));
        REQUIRE(same.spread[i] == doctest::Approx(0.0));
    }
    CHECK(same.values[0] == -1.0);
    CHECK(tail_value(same, -0.1) == 0.0);
    CHECK(tail_value(same, same.offsets.back() + 0.1) == 0.0);
    CHECK_THROWS_AS(average_tails({}), ConfigError);
}

TEST_CASE("desk corrections: period law, amplitude law, sign law") {
    const auto& r = desk::run();
    std::vector<double> abs_res;
    for (double x : amplitude_law_residuals(r.summaries, r.table)) abs_res.push_back(std::abs(x));
    std::sort(abs_res.begin(), abs_res.end());
    CHECK(abs_res[abs_res.size() / 2] <= 0.15);
    for (std::size_t n = 1; n <= r.config.n_max; ++n) {
        INFO("n = " << n);
        CHECK(r.summary(n).period_count == static_cast<int>(n) - 1);
        CHECK(r.summary(n).amplitude > 0.0);
    }
}

TEST_CASE("desk corrections: nearly constant amplitude of the last one") {
    const auto& s = desk::run().summaries.back();
    double mean = 0.0, sq = 0.0;
    for (const auto& e : s.extrema) mean += std::abs(e.value);
    mean /= static_cast<double>(s.extrema.size());
    for (const auto& e : s.extrema) sq += std::pow(std::abs(e.value) - mean, 2);
    CHECK(std::sqrt(sq / static_cast<double>(s.extrema.size())) / mean <= 0.15);
}

TEST_CASE("desk corrections: wavelengths") {
    const auto& r = desk::run();
    const std::size_t n = r.config.n_max;
    const auto& c = r.c(n);
    const auto zc = wavelength_zero_crossing(c);
    const auto cv = wavelength_curvature(c);
    const double xt = turning_point(r.v(n), r.table.zero(n));
    REQUIRE(zc.size() >= 10);
    // Wavelength grows away from the center.
    std::vector<double> right;
    for (const auto& w : zc) {
        if (w.x >= 0.0) right.push_back(w.wavelength);
    }
    CHECK(right.back() > right.front());
    // Both numerical methods agree within 10% where both report.
    double worst = 0.0;
    for (const auto& w : zc) {
        if (std::abs(w.x) > 0.8 * xt) continue;
        const auto it = std::min_element(cv.begin(), cv.end(), [&](const auto& a, const auto& b) {
            return std::abs(a.x - w.x) < std::abs(b.x - w.x);
        });
        if (std::abs(it->x - w.x) > 0.01) continue;
        worst = std::max(worst, std::abs(it->wavelength / w.wavelength - 1.0));
    }
    CHECK(worst <= 0.10);
    // Interval-averaged WKB wavelength agrees within 5% off the turning region.
    double worst_wkb = 0.0;
    for (const auto& w : zc) {
        if (std::abs(w.x) > 0.8 * xt) continue;
        const double ref = wkb_wavelength_interval(r.v(n), r.table.zero(n), w.left_crossing, w.right_crossing);
        worst_wkb = std::max(worst_wkb, std::abs(w.wavelength / ref - 1.0));
    }
    CHECK(worst_wkb <= 0.05);
}

TEST_CASE("desk corrections: tails and template") {
    const auto& r = desk::run();
    for (std::size_t n = 1; n <= r.config.n_max; ++n) {
        INFO("n = " << n);
        CHECK(r.tails[n - 1].values[0] == doctest::Approx(-1.0).epsilon(0.1));
    }
    const auto& t = r.tail;
    CHECK(t.values[0] == -1.0);
    double mean = 0.0;
    for (double v : t.values) mean += v;
    mean /= static_cast<double>(t.values.size());
    CHECK(std::abs(mean) <= 0.02);
    CHECK(*std::max_element(t.spread.begin(), t.spread.end()) <= 0.3);
}

}
