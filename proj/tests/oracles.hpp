#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "zsf/grid.hpp"

namespace oracle {

/// All eigenvalues of a dense symmetric matrix (row-major, n x n) by cyclic
/// Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                total += at(i, j) * at(i, j);
                if (i != j) off += at(i, j) * at(i, j);
            }
        }
        if (off <= 1e-30 * total) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline std::vector<double> jacobi_eigenvalues(const zsf::TridiagonalOperator& op) {
    const std::size_t n = op.size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = op.diagonal[i];
        if (i + 1 < n) {
            a[i * n + i + 1] = op.off_diagonal[i];
            a[(i + 1) * n + i] = op.off_diagonal[i];
        }
    }
    return jacobi_eigenvalues(std::move(a), n);
}

/// Small deterministic generator (SplitMix64) so oracle cases do not depend
/// on the standard library's distribution implementations.
struct SplitMix {
    std::uint64_t state;
    explicit SplitMix(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

inline zsf::TridiagonalOperator random_tridiagonal(std::uint64_t seed, std::size_t n) {
    SplitMix rng(seed);
    zsf::TridiagonalOperator op;
    for (std::size_t i = 0; i < n; ++i) op.diagonal.push_back(rng.uniform(-5.0, 5.0));
    for (std::size_t i = 0; i + 1 < n; ++i) op.off_diagonal.push_back(rng.uniform(-2.0, 2.0));
    return op;
}

/// Eigenvalues of the V = 0 Dirichlet Laplacian with n interior nodes.
inline double laplacian_eigenvalue(std::size_t j, std::size_t n, double dx) {
    return (2.0 - 2.0 * std::cos(static_cast<double>(j) * M_PI / static_cast<double>(n + 1))) /
           (dx * dx);
}

inline zsf::SampledPotential harmonic(const zsf::Grid& g) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = g.x(i) * g.x(i);
    return zsf::SampledPotential(g, v);
}

}  // namespace oracle
