#include "zsf/matcher.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "zsf/error.hpp"

namespace zsf {

TargetSpectrum build_targets(std::size_t n, const ZeroTable& table, std::size_t buffer) {
    if (n > table.size()) {
        throw ConfigError("cannot match " + std::to_string(n) + " zeros from a table of " +
                          std::to_string(table.size()));
    }
    TargetSpectrum spec;
    spec.matched_count = n;
    spec.targets.reserve(n + buffer);
    for (std::size_t k = 1; k <= n; ++k) spec.targets.push_back(table.zero(k));
    for (std::size_t k = n + 1; k <= n + buffer; ++k) spec.targets.push_back(smooth_zero(k));
    for (std::size_t k = 1; k < spec.targets.size(); ++k) {
        if (!(spec.targets[k] > spec.targets[k - 1])) {
            throw DataError("target spectrum not ascending at position " + std::to_string(k + 1));
        }
    }
    return spec;
}

TargetSpectrum smooth_targets(const MatchConfig& config) {
    TargetSpectrum spec;
    for (std::size_t k = 1; k <= config.n_max + config.buffer; ++k) {
        spec.targets.push_back(smooth_zero(k));
    }
    return spec;
}

SampledPotential MatchSequence::telescoped(std::size_t n) const {
    std::vector<double> v(base.values().begin(), base.values().end());
    for (std::size_t k = 0; k < n && k < corrections.size(); ++k) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += corrections[k].values[i];
    }
    return SampledPotential(base.grid(), v);
}

MatchSequence match_sequence(const SampledPotential& v0, const ZeroTable& table,
                             const MatchConfig& config, const StageCallback& on_stage) {
    if (config.n_max > table.size()) {
        throw ConfigError("n_max " + std::to_string(config.n_max) + " exceeds the " +
                          std::to_string(table.size()) + " zeros available");
    }
    const std::size_t total = config.n_max + config.buffer;
    MatchSequence seq{v0, {}, {}, {}};
    SampledPotential current = v0;
    for (std::size_t n = 1; n <= config.n_max; ++n) {
        const auto start = std::chrono::steady_clock::now();
        const auto spec = build_targets(n, table, total - n);
        auto [next, report] = refine(current, spec, config.optimizer);

        StageRecord rec;
        rec.n = n;
        rec.max_matched_residual = report.max_abs_residual(n);
        rec.report = std::move(report);
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!(rec.max_matched_residual <= config.stage_tol)) {
            std::ostringstream msg;
            msg << "stage n=" << n << " failed: max residual on matched zeros "
                << rec.max_matched_residual << " exceeds stage tolerance " << config.stage_tol
                << " (" << rec.report.stop_reason << ")";
            throw NumericalError(msg.str());
        }

        const auto diff = next - current;
        seq.corrections.push_back({next.grid(), {diff.values().begin(), diff.values().end()}, n});
        seq.potentials.push_back(next);
        current = std::move(next);
        if (on_stage) on_stage(rec);
        seq.stages.push_back(std::move(rec));
    }
    return seq;
}

}  // namespace zsf
