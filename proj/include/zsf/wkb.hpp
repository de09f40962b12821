#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "zsf/grid.hpp"

namespace zsf {

/// Marched half potential: turning points x0 >= 0 against their energies,
/// both strictly increasing; the potential between points is linear.
struct HalfProfile {
    std::vector<std::pair<double, double>> points;  // (x0, E)
};

/// Target phase as a function of energy: the integral of sqrt(E - V) over
/// the full classically allowed interval must equal phase(E).
using PhaseFunction = std::function<double(double)>;

/// V(0): root of phase_rhs(E) = 0 on (2pi, 2pi e), about 13.544.
double ground_value();

/// Integral of sqrt(max(E - V, 0)) over [-x0(E), x0(E)] for the piecewise
/// linear profile (extended linearly past its last point). Each linear
/// segment is integrated in closed form, which also captures the square-root
/// behavior at the turning point exactly.
double phase_integral(const HalfProfile& profile, double E);

/// Builds the smooth potential by stepping the energy in increments of dE
/// from the ground value and placing each new turning point so that the
/// phase condition holds at the new energy. Stops at the first E >= e_max.
HalfProfile march_potential(double e_max, double dE);

/// Same with an injected phase function and explicit starting energy
/// (phase(e_start) must be 0). Used for harmonic-oscillator checks.
HalfProfile march_potential(double e_max, double dE, const PhaseFunction& phase, double e_start);

/// Marches to e_max and samples the result on the grid.
SampledPotential smooth_potential(const Grid& grid, double e_max, double dE);

}  // namespace zsf
