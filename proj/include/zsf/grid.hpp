#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace zsf {

/// Uniform grid on [-x_max, x_max] with an odd number of nodes, so that
/// x = 0 is always a node. Abscissae are mirror symmetric bit-for-bit.
class Grid {
public:
    Grid(double x_max, std::size_t n_points);

    double x_max() const { return x_max_; }
    std::size_t size() const { return x_.size(); }
    double spacing() const { return dx_; }
    std::size_t center() const { return x_.size() / 2; }
    std::size_t mirror(std::size_t i) const { return x_.size() - 1 - i; }

    double x(std::size_t i) const { return x_[i]; }
    std::span<const double> abscissae() const { return x_; }

    bool operator==(const Grid& other) const {
        return x_max_ == other.x_max_ && x_.size() == other.x_.size();
    }

private:
    double x_max_;
    double dx_;
    std::vector<double> x_;
};

Grid make_grid(double x_max, std::size_t n_points);

/// Potential sampled on a Grid. Symmetry values[i] == values[n-1-i] holds
/// exactly: every constructor writes the non-negative half and mirrors it.
class SampledPotential {
public:
    /// Takes full-length values and symmetrizes them by averaging mirror pairs.
    SampledPotential(Grid grid, std::span<const double> values);

    /// Builds from the half x >= 0 (center node first, length n/2 + 1).
    static SampledPotential from_half(Grid grid, std::span<const double> half);

    static SampledPotential constant(Grid grid, double value);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Linear interpolation at an arbitrary abscissa, clamped to the grid.
    double at(double x) const;

    SampledPotential operator+(const SampledPotential& other) const;
    SampledPotential operator-(const SampledPotential& other) const;
    SampledPotential shifted(double c) const;

private:
    SampledPotential(Grid grid, std::vector<double> values, bool /*already_symmetric*/);

    Grid grid_;
    std::vector<double> values_;
};

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
struct TridiagonalOperator {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;

    std::size_t size() const { return diagonal.size(); }
};

/// Monotone piecewise-linear interpolation of a half profile (x >= 0, V)
/// onto the grid, mirrored to x < 0. Beyond the last profile point the
/// profile is extended linearly with the last segment's slope.
SampledPotential sample_symmetric(std::span<const std::pair<double, double>> half_profile,
                                  const Grid& grid);

/// Finite-difference Hamiltonian -d^2/dx^2 + V with Dirichlet endpoints:
/// diagonal 2/dx^2 + V_i, off-diagonal -1/dx^2.
TridiagonalOperator build_hamiltonian(const SampledPotential& potential);
TridiagonalOperator build_hamiltonian(const Grid& grid, std::span<const double> values);

}  // namespace zsf
