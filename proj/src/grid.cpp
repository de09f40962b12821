#include "zsf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zsf/error.hpp"

namespace zsf {

Grid::Grid(double x_max, std::size_t n_points) : x_max_(x_max) {
    if (!(x_max > 0.0) || !std::isfinite(x_max)) {
        throw ConfigError("grid half-width must be positive, got " + std::to_string(x_max));
    }
    if (n_points < 3 || n_points % 2 == 0) {
        throw ConfigError("grid point count must be odd and >= 3, got " +
                          std::to_string(n_points));
    }
    dx_ = 2.0 * x_max / static_cast<double>(n_points - 1);
    x_.resize(n_points);
    const std::size_t c = n_points / 2;
    x_[c] = 0.0;
    for (std::size_t k = 1; k <= c; ++k) {
        const double xk = (k == c) ? x_max : static_cast<double>(k) * dx_;
        x_[c + k] = xk;
        x_[c - k] = -xk;
    }
}

Grid make_grid(double x_max, std::size_t n_points) { return Grid(x_max, n_points); }

SampledPotential::SampledPotential(Grid grid, std::vector<double> values, bool)
    : grid_(std::move(grid)), values_(std::move(values)) {}

SampledPotential::SampledPotential(Grid grid, std::span<const double> values)
    : grid_(std::move(grid)) {
    if (values.size() != grid_.size()) {
        throw ConfigError("potential length " + std::to_string(values.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
    }
    values_.resize(values.size());
    const std::size_t n = values.size();
    for (std::size_t i = 0; i <= n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const double v = (i == j) ? values[i] : 0.5 * (values[i] + values[j]);
        values_[i] = v;
        values_[j] = v;
    }
}

SampledPotential SampledPotential::from_half(Grid grid, std::span<const double> half) {
    const std::size_t n = grid.size();
    const std::size_t c = grid.center();
    if (half.size() != c + 1) {
        throw ConfigError("half profile must have " + std::to_string(c + 1) + " values");
    }
    std::vector<double> v(n);
    for (std::size_t k = 0; k <= c; ++k) {
        v[c + k] = half[k];
        v[c - k] = half[k];
    }
    return SampledPotential(std::move(grid), std::move(v), true);
}

SampledPotential SampledPotential::constant(Grid grid, double value) {
    std::vector<double> v(grid.size(), value);
    return SampledPotential(std::move(grid), std::move(v), true);
}

double SampledPotential::at(double x) const {
    const double dx = grid_.spacing();
    const double s = (x + grid_.x_max()) / dx;
    if (s <= 0.0) return values_.front();
    const auto last = static_cast<double>(values_.size() - 1);
    if (s >= last) return values_.back();
    const auto i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    return (1.0 - t) * values_[i] + t * values_[i + 1];
}

SampledPotential SampledPotential::operator+(const SampledPotential& other) const {
    if (!(grid_ == other.grid_)) throw ConfigError("potentials live on different grids");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + other.values_[i];
    return SampledPotential(grid_, std::move(v), true);
}

SampledPotential SampledPotential::operator-(const SampledPotential& other) const {
    if (!(grid_ == other.grid_)) throw ConfigError("potentials live on different grids");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - other.values_[i];
    return SampledPotential(grid_, std::move(v), true);
}

SampledPotential SampledPotential::shifted(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x += c;
    return SampledPotential(grid_, std::move(v), true);
}

SampledPotential sample_symmetric(std::span<const std::pair<double, double>> half_profile,
                                  const Grid& grid) {
    if (half_profile.empty()) throw DataError("empty half profile");
    for (std::size_t k = 1; k < half_profile.size(); ++k) {
        if (!(half_profile[k].first > half_profile[k - 1].first)) {
            throw DataError("half profile abscissae not strictly increasing at point " +
                            std::to_string(k));
        }
        if (half_profile[k].second < half_profile[k - 1].second) {
            throw DataError("half profile values decrease at point " + std::to_string(k));
        }
    }
    if (half_profile.front().first < 0.0) throw DataError("half profile starts at negative x");

    const std::size_t c = grid.center();
    std::vector<double> half(c + 1);
    const std::size_t m = half_profile.size();
    double last_slope = 0.0;
    if (m >= 2) {
        const auto& [xa, va] = half_profile[m - 2];
        const auto& [xb, vb] = half_profile[m - 1];
        last_slope = (vb - va) / (xb - xa);
    }
    std::size_t seg = 0;
    for (std::size_t k = 0; k <= c; ++k) {
        const double x = grid.x(c + k);
        if (x <= half_profile.front().first) {
            half[k] = half_profile.front().second;
            continue;
        }
        if (x >= half_profile.back().first) {
            half[k] = half_profile.back().second + last_slope * (x - half_profile.back().first);
            continue;
        }
        while (half_profile[seg + 1].first < x) ++seg;
        const auto& [xa, va] = half_profile[seg];
        const auto& [xb, vb] = half_profile[seg + 1];
        const double t = (x - xa) / (xb - xa);
        half[k] = va + t * (vb - va);
    }
    return SampledPotential::from_half(grid, half);
}

TridiagonalOperator build_hamiltonian(const Grid& grid, std::span<const double> values) {
    const double inv_dx2 = 1.0 / (grid.spacing() * grid.spacing());
    TridiagonalOperator op;
    op.diagonal.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) op.diagonal[i] = 2.0 * inv_dx2 + values[i];
    op.off_diagonal.assign(values.empty() ? 0 : values.size() - 1, -inv_dx2);
    return op;
}

TridiagonalOperator build_hamiltonian(const SampledPotential& potential) {
    return build_hamiltonian(potential.grid(), potential.values());
}

}  // namespace zsf
