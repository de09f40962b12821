#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zsf/grid.hpp"

namespace zsf {

/// Eigenvalue with its eigenvector, normalized so that sum(v_i^2) * dx == 1.
/// Sign convention: v[center] >= 0; for states vanishing at the center the
/// first entry of significant magnitude is positive.
struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

/// Pivots smaller than this in magnitude are replaced by +-floor in the
/// Sturm recurrence.
inline constexpr double kSturmPivotFloor = 1e-300;

/// Number of eigenvalues strictly less than lambda (Sturm sign count).
std::size_t count_below(const TridiagonalOperator& op, double lambda);

/// Gershgorin interval containing the whole spectrum.
std::pair<double, double> gershgorin_bounds(const TridiagonalOperator& op);

/// Lowest k eigenvalues in ascending order by bisection on count_below. Each
/// value is bracketed to width <= rel_tol * max(1, |lambda|). Optional hints
/// (approximate eigenvalues, e.g. from a previous optimizer iterate) only
/// speed up bracketing; the result does not depend on them beyond rounding.
std::vector<double> lowest_eigenvalues(const TridiagonalOperator& op, std::size_t k,
                                       std::span<const double> hints = {},
                                       double rel_tol = 1e-10);

/// Inverse iteration at a converged eigenvalue. `previous` holds already
/// computed pairs of the same operator; the iterate is orthogonalized
/// against those with nearby eigenvalues. The returned value is the
/// Rayleigh quotient of the converged vector.
EigenPair eigenvector(const TridiagonalOperator& op, double lambda, double dx = 1.0,
                      std::span<const EigenPair> previous = {});

/// Convenience: lowest k eigenvalues followed by their eigenvectors.
std::vector<EigenPair> lowest_eigenpairs(const TridiagonalOperator& op, std::size_t k,
                                         double dx = 1.0, std::span<const double> hints = {});

}  // namespace zsf
