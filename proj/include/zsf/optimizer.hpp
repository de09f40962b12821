#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zsf/eigensolver.hpp"
#include "zsf/grid.hpp"

namespace zsf {

/// Target eigenvalues: the first `matched_count` are true zeros, the rest
/// smooth approximations.
struct TargetSpectrum {
    std::vector<double> targets;
    std::size_t matched_count = 0;

    std::size_t size() const { return targets.size(); }
};

struct OptimizerConfig {
    double tol_abs = 1e-10;
    double tol_rel = 1e-8;
    int max_iter = 500;
    int n_restart = 25;
    double armijo_c = 1e-4;
    int max_backtracks = 50;
    /// Every this many iterations, compare the gradient against central
    /// differences at a few nodes (0 disables the check).
    int gradient_check_every = 0;

    bool operator==(const OptimizerConfig&) const = default;
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double step = 0.0;
};

struct OptimizerReport {
    int iterations = 0;
    double initial_objective = 0.0;
    double final_objective = 0.0;
    std::vector<double> residuals;  // e_n - E_n at the final iterate
    bool stalled = false;
    std::string stop_reason;
    std::vector<IterationRecord> trace;
    /// Largest relative gradient-vs-finite-difference mismatch seen by the
    /// periodic spot check (0 when disabled).
    double worst_gradient_check = 0.0;

    double max_abs_residual(std::size_t count) const;
};

/// Eigenpairs of the discretized Hamiltonian together with the residuals
/// against a target list.
struct SpectrumEvaluation {
    double objective = 0.0;
    std::vector<EigenPair> pairs;
    std::vector<double> residuals;
};

SpectrumEvaluation evaluate_spectrum(const Grid& grid, std::span<const double> values,
                                     std::span<const double> targets,
                                     std::span<const double> hints = {});

/// F = sum_n (e_n - E_n)^2 for arbitrary (not necessarily symmetric) node values.
double objective_of_values(const Grid& grid, std::span<const double> values,
                           std::span<const double> targets);

/// Discrete gradient g_i = 2 sum_n (e_n - E_n) psi_n(x_i)^2 dx, without
/// symmetrization. This is the partial derivative of F with respect to V_i.
std::vector<double> raw_gradient(const Grid& grid, const SpectrumEvaluation& eval);

double objective(const SampledPotential& potential, const TargetSpectrum& spec);

/// Symmetrized discrete gradient of F.
std::vector<double> gradient(const SampledPotential& potential, const TargetSpectrum& spec);

/// Polak-Ribiere conjugate gradient with Armijo backtracking.
std::pair<SampledPotential, OptimizerReport> refine(const SampledPotential& potential,
                                                    const TargetSpectrum& spec,
                                                    const OptimizerConfig& config = {});

}  // namespace zsf
