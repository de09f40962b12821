#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "zsf/analysis.hpp"
#include "zsf/grid.hpp"
#include "zsf/zeta.hpp"

namespace zsf {

enum class ShiftRule { model, fitted };

/// Closed-form description of every correction: amplitude 2(Z_{n,a} - Z_n),
/// WKB phase with a constant shift, and the universal tail.
struct ReconstructionModel {
    TailTemplate tail;
    ShiftRule shift_rule = ShiftRule::model;
    /// Measured corrections C_1..C_N, required by ShiftRule::fitted.
    std::vector<CorrectionProfile> actual;
};

double model_amplitude(std::size_t n, const ZeroTable& table);

/// s_n = (A_n - 1) / 3.
double model_shift(double amplitude);

/// Oscillating part of a modeled correction on the grid:
/// A (-1)^n cos(2 Phi(x)), Phi(x) = integral_0^|x| sqrt(max(Z - base - s, 0)).
/// The oscillation stops at x_star, the node where 2 Phi first reaches
/// (n - 1) pi (the last trough), or at the turning point of base + s if the
/// phase runs out first. Values beyond x_star are zero.
struct Oscillation {
    std::vector<double> values;
    double x_star = 0.0;
    bool truncated_at_turning_point = false;
    std::size_t n = 0;
    double amplitude = 0.0;
};

Oscillation reconstruct_oscillation(std::size_t n, const SampledPotential& base, double zero,
                                    double amplitude, double shift);

/// Appends the tail beyond +-x_star, scaled so that it starts at C(x_star).
CorrectionProfile attach_tails(const Oscillation& oscillation, const Grid& grid,
                               const TailTemplate& tail);

/// Golden-section search for the shift s in [-2, 2] minimizing the squared
/// difference between the measured and modeled oscillation over the measured
/// oscillating region.
double fit_shift(const CorrectionProfile& actual, const SampledPotential& base, double zero,
                 double amplitude);

struct SpectrumRow {
    std::size_t n = 0;
    double target = 0.0;
    double eigenvalue = 0.0;
    double residual = 0.0;
};

struct VerificationReport {
    std::vector<SpectrumRow> rows;
    double max_abs_residual = 0.0;
    std::optional<double> sup_norm_vs_direct;
    double max_abs_amplitude = 0.0;
    std::vector<double> shifts;  // s_n used for each n
    std::vector<double> x_stars;
};

struct AssemblyResult {
    SampledPotential potential;
    std::vector<CorrectionProfile> corrections;
    VerificationReport report;
};

/// V_N = V0 + sum of modeled C_n, built sequentially with the running
/// reconstructed potential as phase base; then compares its lowest N
/// eigenvalues with the true zeros (smooth targets when N = 0).
AssemblyResult assemble_and_verify(const SampledPotential& v0, const ReconstructionModel& model,
                                   const ZeroTable& table, std::size_t n_zeros,
                                   const std::optional<SampledPotential>& direct = std::nullopt);

}  // namespace zsf
