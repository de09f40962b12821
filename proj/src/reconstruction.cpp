#include "zsf/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zsf/eigensolver.hpp"
#include "zsf/error.hpp"

namespace zsf {

namespace {

double parity(std::size_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Cumulative trapezoid of sqrt(max(Z - base - s, 0)) from the center outward.
std::vector<double> half_phase(const SampledPotential& base, double zero, double shift) {
    const Grid& g = base.grid();
    const std::size_t ci = g.center();
    const double dx = g.spacing();
    std::vector<double> phi(ci + 1, 0.0);
    double prev = std::sqrt(std::max(zero - base[ci] - shift, 0.0));
    for (std::size_t k = 1; k <= ci; ++k) {
        const double cur = std::sqrt(std::max(zero - base[ci + k] - shift, 0.0));
        phi[k] = phi[k - 1] + 0.5 * dx * (prev + cur);
        prev = cur;
    }
    return phi;
}

}  // namespace

double model_amplitude(std::size_t n, const ZeroTable& table) {
    return 2.0 * approximation_error(n, table);
}

double model_shift(double amplitude) { return (amplitude - 1.0) / 3.0; }

Oscillation reconstruct_oscillation(std::size_t n, const SampledPotential& base, double zero,
                                    double amplitude, double shift) {
    if (n == 0) throw ConfigError("correction index must be >= 1");
    const Grid& g = base.grid();
    const std::size_t ci = g.center();
    const auto phi = half_phase(base, zero, shift);
    const double end_phase = 0.5 * static_cast<double>(n - 1) * std::numbers::pi;
    // Last node of the classically allowed region around the center.
    std::size_t k_turn = 0;
    while (k_turn < ci && zero - base[ci + k_turn + 1] - shift > 0.0) ++k_turn;
    std::size_t k_star = 0;
    while (k_star < k_turn && phi[k_star] < end_phase) ++k_star;
    bool truncated = phi[k_star] < end_phase;
    if (truncated && n > 1 && phi[k_turn] == 0.0) {
        throw DomainError("no classically allowed region for correction " + std::to_string(n));
    }
    // Pick whichever neighboring node is closer to the exact trough.
    if (!truncated && k_star > 0 && end_phase - phi[k_star - 1] < phi[k_star] - end_phase) --k_star;

    Oscillation osc;
    osc.n = n;
    osc.amplitude = amplitude;
    osc.x_star = static_cast<double>(k_star) * g.spacing();
    osc.truncated_at_turning_point = truncated;
    osc.values.assign(g.size(), 0.0);
    const double a = amplitude * parity(n);
    for (std::size_t k = 0; k <= k_star; ++k) {
        const double v = a * std::cos(2.0 * phi[k]);
        osc.values[ci + k] = v;
        osc.values[ci - k] = v;
    }
    return osc;
}

CorrectionProfile attach_tails(const Oscillation& oscillation, const Grid& grid,
                               const TailTemplate& tail) {
    CorrectionProfile c{grid, oscillation.values, oscillation.n};
    const std::size_t ci = grid.center();
    const double dx = grid.spacing();
    const auto k_star = static_cast<std::size_t>(std::lround(oscillation.x_star / dx));
    // The template starts at -1, so scaling by -C(x*) keeps the junction continuous;
    // at a regular last trough this is exactly the signed amplitude.
    const double scale = -oscillation.values[ci + k_star];
    for (std::size_t k = k_star + 1; k <= ci; ++k) {
        const double v = scale * tail_value(tail, static_cast<double>(k - k_star) * dx);
        c.values[ci + k] = v;
        c.values[ci - k] = v;
    }
    return c;
}

double fit_shift(const CorrectionProfile& actual, const SampledPotential& base, double zero,
                 double amplitude) {
    const auto summary = summarize_oscillation(actual);
    const Grid& g = actual.grid;
    const std::size_t ci = g.center();
    const auto k_end = static_cast<std::size_t>(std::floor(summary.x_star / g.spacing()));
    const double a = amplitude * parity(actual.n);

    auto cost = [&](double s) {
        const auto phi = half_phase(base, zero, s);
        double sum = 0.0;
        for (std::size_t k = 0; k <= k_end; ++k) {
            const double d = actual.values[ci + k] - a * std::cos(2.0 * phi[k]);
            sum += (k == 0 ? 1.0 : 2.0) * d * d;
        }
        return sum;
    };

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = -2.0, hi = 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = cost(x1), f2 = cost(x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = cost(x2);
        }
    }
    return 0.5 * (lo + hi);
}

AssemblyResult assemble_and_verify(const SampledPotential& v0, const ReconstructionModel& model,
                                   const ZeroTable& table, std::size_t n_zeros,
                                   const std::optional<SampledPotential>& direct) {
    if (n_zeros > table.size()) throw ConfigError("not enough zeros in the table");
    if (model.shift_rule == ShiftRule::fitted && model.actual.size() < n_zeros) {
        throw ConfigError("fitted shift rule needs measured corrections for every n");
    }
    const Grid& g = v0.grid();
    std::vector<double> running(v0.values().begin(), v0.values().end());
    AssemblyResult result{v0, {}, {}};
    for (std::size_t n = 1; n <= n_zeros; ++n) {
        const SampledPotential base(g, running);
        const double zero = table.zero(n);
        const double amp = model_amplitude(n, table);
        const double shift = (model.shift_rule == ShiftRule::model)
                                 ? model_shift(amp)
                                 : fit_shift(model.actual[n - 1], base, zero, amp);
        const auto osc = reconstruct_oscillation(n, base, zero, amp, shift);
        auto c = attach_tails(osc, g, model.tail);
        for (std::size_t i = 0; i < running.size(); ++i) running[i] += c.values[i];
        result.report.shifts.push_back(shift);
        result.report.x_stars.push_back(osc.x_star);
        result.report.max_abs_amplitude = std::max(result.report.max_abs_amplitude, std::abs(amp));
        result.corrections.push_back(std::move(c));
    }
    result.potential = SampledPotential(g, running);

    const std::size_t k = std::max<std::size_t>(n_zeros, 1);
    const auto eig = lowest_eigenvalues(build_hamiltonian(result.potential), k);
    for (std::size_t n = 1; n <= k; ++n) {
        const double target = (n_zeros == 0) ? smooth_zero(n) : table.zero(n);
        const double r = eig[n - 1] - target;
        result.report.rows.push_back({n, target, eig[n - 1], r});
        result.report.max_abs_residual = std::max(result.report.max_abs_residual, std::abs(r));
    }
    if (direct) {
        double sup = 0.0;
        for (std::size_t i = 0; i < running.size(); ++i) {
            sup = std::max(sup, std::abs(result.potential[i] - (*direct)[i]));
        }
        result.report.sup_norm_vs_direct = sup;
    }
    return result;
}

}  // namespace zsf
