#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "zsf/analysis.hpp"
#include "zsf/optimizer.hpp"
#include "zsf/zeta.hpp"

namespace zsf {

/// First n true zeros followed by smooth_zero(n+1 .. n+buffer).
TargetSpectrum build_targets(std::size_t n, const ZeroTable& table, std::size_t buffer);

struct MatchConfig {
    std::size_t n_max = 20;
    /// Smooth targets pinned beyond the last matched zero at n = n_max. Every
    /// stage uses the same total n_max + buffer, so stage n only moves e_n.
    std::size_t buffer = 10;
    double stage_tol = 1e-3;
    OptimizerConfig optimizer;
};

struct StageRecord {
    std::size_t n = 0;
    OptimizerReport report;
    double max_matched_residual = 0.0;
    double seconds = 0.0;
};

struct MatchSequence {
    SampledPotential base;
    std::vector<SampledPotential> potentials;   // V_1 .. V_N
    std::vector<CorrectionProfile> corrections; // C_1 .. C_N
    std::vector<StageRecord> stages;

    /// V_0 + sum_{i<=n} C_i.
    SampledPotential telescoped(std::size_t n) const;
};

using StageCallback = std::function<void(const StageRecord&)>;

/// Total smooth targets used to refine V_0 for a run of n_max zeros.
TargetSpectrum smooth_targets(const MatchConfig& config);

/// Matches one more zero per stage, warm-starting each stage from the
/// previous potential. Raises NumericalError naming the failing stage.
MatchSequence match_sequence(const SampledPotential& v0, const ZeroTable& table,
                             const MatchConfig& config, const StageCallback& on_stage = {});

}  // namespace zsf
