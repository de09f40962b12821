#pragma once

// One desk-scale pipeline run (4001 nodes, 20 zeros), computed on first use
// and shared by every test that needs real corrections.

#include <vector>

#include "zsf/analysis.hpp"
#include "zsf/matcher.hpp"
#include "zsf/optimizer.hpp"
#include "zsf/zeta.hpp"

namespace desk {

struct Run {
    zsf::ZeroTable table;
    zsf::MatchConfig config;
    zsf::SampledPotential v0_raw;
    zsf::SampledPotential v0;
    zsf::OptimizerReport v0_report;
    zsf::MatchSequence seq;
    std::vector<zsf::OscillationSummary> summaries;
    std::vector<zsf::NormalizedTail> tails;
    zsf::TailTemplate tail;

    /// V_n for n = 0..N.
    const zsf::SampledPotential& v(std::size_t n) const { return n == 0 ? v0 : seq.potentials[n - 1]; }
    const zsf::CorrectionProfile& c(std::size_t n) const { return seq.corrections[n - 1]; }
    const zsf::OscillationSummary& summary(std::size_t n) const { return summaries[n - 1]; }
};

const Run& run();

}  // namespace desk
