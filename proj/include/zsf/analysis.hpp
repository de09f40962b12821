#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "zsf/grid.hpp"
#include "zsf/zeta.hpp"

namespace zsf {

/// One correction C_n = V_n - V_{n-1} sampled on the grid.
struct CorrectionProfile {
    Grid grid;
    std::vector<double> values;
    std::size_t n = 0;
};

struct Extremum {
    double x = 0.0;
    double value = 0.0;
};

/// Oscillating part of a correction. The region [-x_star, x_star] spans the
/// extrema of oscillation size; x_star is the outermost such extremum, i.e.
/// the trough where the decaying tail takes over.
struct OscillationSummary {
    std::size_t n = 0;
    double x_star = 0.0;
    std::vector<Extremum> extrema;        // ascending x, full symmetric region
    std::vector<double> zero_crossings;   // ascending x, inside the region
    double amplitude = 0.0;               // signed, comparable to 2(Z_{n,a} - Z_n)
    int period_count = 0;
};

/// An extremum belongs to the oscillation while its magnitude is at least
/// this fraction of the running mean of the accepted extrema.
inline constexpr double kOscillationFraction = 0.4;

OscillationSummary summarize_oscillation(const CorrectionProfile& c);

/// (A_n - 2(Z_{n,a} - Z_n)) / |2(Z_{n,a} - Z_n)| for each summary.
std::vector<double> amplitude_law_residuals(const std::vector<OscillationSummary>& summaries,
                                            const ZeroTable& table);

struct WavelengthSample {
    double x = 0.0;
    double wavelength = 0.0;
    double left_crossing = 0.0;   // flanking zero crossings (zero-crossing method only)
    double right_crossing = 0.0;
};

/// Twice the distance between the zero crossings flanking each extremum,
/// reported at the extremum. Empty when fewer than two crossings exist.
std::vector<WavelengthSample> wavelength_zero_crossing(const CorrectionProfile& c);

/// 2pi / sqrt(|C''/C|) from central second differences; nodes where
/// |C| < 0.1 |A_n| are excluded.
std::vector<WavelengthSample> wavelength_curvature(const CorrectionProfile& c);

/// pi / sqrt(Z - V(x)): the local wavelength with doubled WKB frequency.
double wkb_wavelength(const SampledPotential& v, double zero, double x);

/// The same quantity averaged consistently over [a, b]:
/// pi (b - a) / integral_a^b sqrt(Z - V) dx. This is what the distance
/// between two zero crossings measures.
double wkb_wavelength_interval(const SampledPotential& v, double zero, double a, double b);

/// Outermost x >= 0 with V(x) < Z (classical turning point).
double turning_point(const SampledPotential& v, double zero);

enum class Side { left, right };

struct NormalizedTail {
    std::vector<double> offsets;
    std::vector<double> values;
};

/// C beyond the region divided by the signed amplitude, shifted so the
/// attachment node sits at offset 0.
NormalizedTail extract_tail(const CorrectionProfile& c, const OscillationSummary& s, Side side);

struct TailTemplate {
    std::vector<double> offsets;
    std::vector<double> values;   // values[0] == -1
    std::vector<double> spread;   // pointwise std of the input tails
};

/// Pointwise mean over the shortest common support, rescaled to start at -1.
TailTemplate average_tails(const std::vector<NormalizedTail>& tails);

/// Linear interpolation in the template; zero beyond its support.
double tail_value(const TailTemplate& tail, double offset);

}  // namespace zsf
