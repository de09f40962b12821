#include "zsf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zsf/error.hpp"

namespace zsf {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double parity(std::size_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Extremum candidate on the non-negative half, refined by a parabola through
// the raw samples around node k.
Extremum refine_extremum(std::span<const double> h, std::size_t k, double x0, double dx) {
    if (k == 0 || k + 1 >= h.size()) return {x0 + static_cast<double>(k) * dx, h[k]};
    const double a = h[k - 1], b = h[k], c = h[k + 1];
    const double denom = a - 2.0 * b + c;
    double delta = (denom != 0.0) ? 0.5 * (a - c) / denom : 0.0;
    delta = std::clamp(delta, -1.0, 1.0);
    return {x0 + (static_cast<double>(k) + delta) * dx, b - 0.25 * (a - c) * delta};
}

}  // namespace

OscillationSummary summarize_oscillation(const CorrectionProfile& c) {
    const Grid& grid = c.grid;
    if (c.values.size() != grid.size()) throw ConfigError("correction length does not match grid");
    double vmax = 0.0;
    for (double v : c.values) vmax = std::max(vmax, std::abs(v));
    if (!(vmax > 1e-12)) throw DataError("correction is numerically zero");

    const std::size_t ci = grid.center();
    const double dx = grid.spacing();
    const std::span<const double> h(c.values.data() + ci, ci + 1);
    const std::size_t last = h.size() - 1;

    // 3-point moving average, used for locating extrema only.
    std::vector<double> s(h.size());
    s[0] = (h[0] + 2.0 * h[1]) / 3.0;
    for (std::size_t k = 1; k < last; ++k) s[k] = (h[k - 1] + h[k] + h[k + 1]) / 3.0;
    s[last] = h[last];

    std::vector<std::size_t> accepted{0};
    std::vector<Extremum> right{{0.0, h[0]}};
    double sum_abs = std::abs(h[0]);
    for (std::size_t k = 1; k < last; ++k) {
        if (!((s[k] - s[k - 1]) * (s[k + 1] - s[k]) < 0.0)) continue;
        const Extremum e = refine_extremum(h, k, 0.0, dx);
        const double mean = sum_abs / static_cast<double>(right.size());
        if (std::abs(e.value) < kOscillationFraction * mean) break;
        if (sign_of(e.value) == sign_of(right.back().value)) continue;
        accepted.push_back(k);
        right.push_back(e);
        sum_abs += std::abs(e.value);
    }

    std::vector<double> crossings_right;
    for (std::size_t m = 1; m < accepted.size(); ++m) {
        for (std::size_t j = accepted[m - 1]; j < accepted[m]; ++j) {
            if (h[j] == 0.0) {
                crossings_right.push_back(static_cast<double>(j) * dx);
                break;
            }
            if (h[j] * h[j + 1] < 0.0) {
                crossings_right.push_back((static_cast<double>(j) + h[j] / (h[j] - h[j + 1])) * dx);
                break;
            }
        }
    }

    OscillationSummary out;
    out.n = c.n;
    out.x_star = right.back().x;
    for (std::size_t m = right.size(); m-- > 1;) out.extrema.push_back({-right[m].x, right[m].value});
    for (const auto& e : right) out.extrema.push_back(e);
    for (std::size_t m = crossings_right.size(); m-- > 0;) out.zero_crossings.push_back(-crossings_right[m]);
    for (double z : crossings_right) out.zero_crossings.push_back(z);

    double total = 0.0;
    for (const auto& e : out.extrema) total += std::abs(e.value);
    out.amplitude = total / static_cast<double>(out.extrema.size());
    if (sign_of(h[0]) * parity(c.n) < 0.0) out.amplitude = -out.amplitude;
    out.period_count = static_cast<int>(right.size()) - 1;
    return out;
}

std::vector<double> amplitude_law_residuals(const std::vector<OscillationSummary>& summaries,
                                            const ZeroTable& table) {
    std::vector<double> out;
    out.reserve(summaries.size());
    for (const auto& s : summaries) {
        const double law = 2.0 * approximation_error(s.n, table);
        out.push_back((s.amplitude - law) / std::abs(law));
    }
    return out;
}

std::vector<WavelengthSample> wavelength_zero_crossing(const CorrectionProfile& c) {
    const auto s = summarize_oscillation(c);
    std::vector<WavelengthSample> out;
    if (s.zero_crossings.size() < 2) return out;
    for (const auto& e : s.extrema) {
        const auto right = std::upper_bound(s.zero_crossings.begin(), s.zero_crossings.end(), e.x);
        if (right == s.zero_crossings.begin() || right == s.zero_crossings.end()) continue;
        const double l = *(right - 1);
        out.push_back({e.x, 2.0 * (*right - l), l, *right});
    }
    return out;
}

std::vector<WavelengthSample> wavelength_curvature(const CorrectionProfile& c) {
    const auto s = summarize_oscillation(c);
    const double threshold = 0.1 * std::abs(s.amplitude);
    const double dx = c.grid.spacing();
    const auto& v = c.values;
    std::vector<WavelengthSample> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (std::abs(v[i]) < threshold) continue;
        const double second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dx * dx);
        const double ratio = std::abs(second / v[i]);
        if (!(ratio > 0.0)) continue;
        out.push_back({c.grid.x(i), 2.0 * std::numbers::pi / std::sqrt(ratio), 0.0, 0.0});
    }
    return out;
}

double wkb_wavelength(const SampledPotential& v, double zero, double x) {
    const double gap = zero - v.at(x);
    if (!(gap > 0.0)) throw DomainError("wkb_wavelength: x lies beyond the turning point");
    return std::numbers::pi / std::sqrt(gap);
}

double wkb_wavelength_interval(const SampledPotential& v, double zero, double a, double b) {
    if (!(b > a)) throw ConfigError("wkb_wavelength_interval needs a < b");
    const double dx = v.grid().spacing();
    const auto m = static_cast<std::size_t>(std::max(8.0, std::ceil(4.0 * (b - a) / dx)));
    const double h = (b - a) / static_cast<double>(m);
    double integral = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double gap = zero - v.at(a + static_cast<double>(k) * h);
        if (!(gap > 0.0)) throw DomainError("wkb_wavelength_interval: interval crosses a turning point");
        const double w = (k == 0 || k == m) ? 0.5 : 1.0;
        integral += w * std::sqrt(gap);
    }
    integral *= h;
    return std::numbers::pi * (b - a) / integral;
}

double turning_point(const SampledPotential& v, double zero) {
    const Grid& g = v.grid();
    const std::size_t ci = g.center();
    if (!(v[ci] < zero)) throw DomainError("energy does not exceed the potential minimum");
    for (std::size_t i = ci + 1; i < g.size(); ++i) {
        if (v[i] >= zero) {
            const double t = (zero - v[i - 1]) / (v[i] - v[i - 1]);
            return g.x(i - 1) + t * g.spacing();
        }
    }
    return g.x_max();
}

NormalizedTail extract_tail(const CorrectionProfile& c, const OscillationSummary& s, Side side) {
    const Grid& g = c.grid;
    const std::size_t ci = g.center();
    const double dx = g.spacing();
    if (s.amplitude == 0.0) throw DomainError("cannot normalize a tail by zero amplitude");
    const auto k_star = static_cast<std::size_t>(std::lround(s.x_star / dx));
    NormalizedTail t;
    for (std::size_t k = k_star; k <= ci; ++k) {
        const std::size_t i = (side == Side::right) ? ci + k : ci - k;
        t.offsets.push_back(static_cast<double>(k - k_star) * dx);
        t.values.push_back(c.values[i] / s.amplitude);
    }
    return t;
}

namespace {
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1.0 - t) * ys[j - 1] + t * ys[j];
}
}  // namespace

TailTemplate average_tails(const std::vector<NormalizedTail>& tails) {
    if (tails.empty()) throw ConfigError("average_tails needs at least one tail");
    double support = tails.front().offsets.back();
    std::size_t base = 0;
    for (std::size_t k = 0; k < tails.size(); ++k) {
        if (tails[k].offsets.empty()) throw DataError("empty tail in average");
        if (tails[k].offsets.back() < support) {
            support = tails[k].offsets.back();
            base = k;
        }
    }
    TailTemplate out;
    out.offsets = tails[base].offsets;
    const std::size_t m = out.offsets.size();
    out.values.assign(m, 0.0);
    out.spread.assign(m, 0.0);
    const auto count = static_cast<double>(tails.size());
    std::vector<double> sample(tails.size());
    for (std::size_t i = 0; i < m; ++i) {
        double mean = 0.0;
        for (std::size_t k = 0; k < tails.size(); ++k) {
            sample[k] = interpolate(tails[k].offsets, tails[k].values, out.offsets[i]);
            mean += sample[k];
        }
        mean /= count;
        double var = 0.0;
        for (double v : sample) var += (v - mean) * (v - mean);
        out.values[i] = mean;
        out.spread[i] = std::sqrt(var / count);
    }
    if (!(out.values[0] < 0.0)) {
        throw NumericalError("averaged tail does not start below zero; cannot rescale to -1");
    }
    const double scale = -1.0 / out.values[0];
    for (double& v : out.values) v *= scale;
    out.values[0] = -1.0;
    return out;
}

double tail_value(const TailTemplate& tail, double offset) {
    if (tail.offsets.empty() || offset < 0.0 || offset > tail.offsets.back()) return 0.0;
    return interpolate(tail.offsets, tail.values, offset);
}

}  // namespace zsf
