#include "zsf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "zsf/error.hpp"

namespace zsf {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> symmetrize(std::vector<double> g) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const double avg = 0.5 * (g[i] + g[j]);
        g[i] = avg;
        g[j] = avg;
    }
    return g;
}

// Directional derivative of each eigenvalue along d: sum_i psi_n(x_i)^2 dx d_i.
std::vector<double> eigenvalue_sensitivity(const Grid& grid, const SpectrumEvaluation& eval,
                                           std::span<const double> d) {
    const double dx = grid.spacing();
    std::vector<double> out(eval.pairs.size());
    for (std::size_t k = 0; k < eval.pairs.size(); ++k) {
        const auto& psi = eval.pairs[k].vector;
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) s += psi[i] * psi[i] * d[i];
        out[k] = s * dx;
    }
    return out;
}

// Largest relative mismatch between the gradient and central differences of
// F at a handful of nodes inside the bulk of the wavefunctions.
double spot_check_gradient(const Grid& grid, std::span<const double> values,
                           std::span<const double> targets, std::span<const double> grad) {
    const std::size_t n = values.size();
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    if (gmax == 0.0) return 0.0;
    std::vector<double> v(values.begin(), values.end());
    double worst = 0.0;
    const double h = 1e-6;
    int checked = 0;
    for (std::size_t i = n / 2; i < n && checked < 5; i += std::max<std::size_t>(1, n / 40)) {
        if (std::abs(grad[i]) < 1e-3 * gmax) continue;
        const double orig = v[i];
        v[i] = orig + h;
        const double fp = objective_of_values(grid, v, targets);
        v[i] = orig - h;
        const double fm = objective_of_values(grid, v, targets);
        v[i] = orig;
        const double fd = (fp - fm) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - grad[i]) / std::abs(grad[i]));
        ++checked;
    }
    return worst;
}

}  // namespace

double OptimizerReport::max_abs_residual(std::size_t count) const {
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(count, residuals.size()); ++i) {
        m = std::max(m, std::abs(residuals[i]));
    }
    return m;
}

SpectrumEvaluation evaluate_spectrum(const Grid& grid, std::span<const double> values,
                                     std::span<const double> targets,
                                     std::span<const double> hints) {
    const auto op = build_hamiltonian(grid, values);
    SpectrumEvaluation eval;
    eval.pairs = lowest_eigenpairs(op, targets.size(), grid.spacing(), hints);
    eval.residuals.resize(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        eval.residuals[k] = eval.pairs[k].value - targets[k];
        eval.objective += eval.residuals[k] * eval.residuals[k];
    }
    return eval;
}

double objective_of_values(const Grid& grid, std::span<const double> values,
                           std::span<const double> targets) {
    return evaluate_spectrum(grid, values, targets).objective;
}

std::vector<double> raw_gradient(const Grid& grid, const SpectrumEvaluation& eval) {
    const double dx = grid.spacing();
    std::vector<double> g(grid.size(), 0.0);
    for (std::size_t k = 0; k < eval.pairs.size(); ++k) {
        const double w = 2.0 * eval.residuals[k] * dx;
        if (w == 0.0) continue;
        const auto& psi = eval.pairs[k].vector;
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += w * psi[i] * psi[i];
    }
    return g;
}

double objective(const SampledPotential& potential, const TargetSpectrum& spec) {
    return objective_of_values(potential.grid(), potential.values(), spec.targets);
}

std::vector<double> gradient(const SampledPotential& potential, const TargetSpectrum& spec) {
    const auto eval = evaluate_spectrum(potential.grid(), potential.values(), spec.targets);
    return symmetrize(raw_gradient(potential.grid(), eval));
}

std::pair<SampledPotential, OptimizerReport> refine(const SampledPotential& potential,
                                                    const TargetSpectrum& spec,
                                                    const OptimizerConfig& config) {
    const Grid& grid = potential.grid();
    const std::size_t n = grid.size();
    if (spec.targets.empty()) throw ConfigError("empty target spectrum");
    for (std::size_t k = 1; k < spec.targets.size(); ++k) {
        if (!(spec.targets[k] > spec.targets[k - 1])) {
            throw ConfigError("target spectrum is not ascending at index " + std::to_string(k));
        }
    }

    std::vector<double> x(potential.values().begin(), potential.values().end());
    auto eval = evaluate_spectrum(grid, x, spec.targets);
    if (!std::isfinite(eval.objective)) throw NumericalError("objective is not finite");

    OptimizerReport report;
    report.initial_objective = eval.objective;
    report.trace.push_back({0, eval.objective, 0.0});

    auto finish = [&](std::string reason) {
        report.final_objective = eval.objective;
        report.residuals = eval.residuals;
        report.stop_reason = std::move(reason);
        return std::pair{SampledPotential(grid, x), std::move(report)};
    };

    if (eval.objective < config.tol_abs) return finish("objective below absolute tolerance");

    auto g = symmetrize(raw_gradient(grid, eval));
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    std::deque<double> history{eval.objective};
    double last_alpha = 1.0;
    std::vector<double> trial(n);

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            slope = dot(g, d);
        }
        if (!(slope < 0.0)) return finish("zero gradient");

        // Gauss-Newton step along d from the linearized eigenvalue response.
        const auto jd = eigenvalue_sensitivity(grid, eval, d);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < jd.size(); ++k) {
            num -= eval.residuals[k] * jd[k];
            den += jd[k] * jd[k];
        }
        double alpha = (den > 0.0 && num > 0.0) ? num / den : last_alpha;
        if (!std::isfinite(alpha) || alpha <= 0.0) alpha = 1.0;

        std::vector<double> hints(eval.pairs.size());
        bool accepted = false;
        SpectrumEvaluation next;
        for (int bt = 0; bt <= config.max_backtracks; ++bt) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + alpha * d[i];
            for (std::size_t k = 0; k < hints.size(); ++k) {
                hints[k] = eval.pairs[k].value + alpha * jd[k];
            }
            next = evaluate_spectrum(grid, trial, spec.targets, hints);
            if (std::isfinite(next.objective) &&
                next.objective <= eval.objective + config.armijo_c * alpha * slope &&
                next.objective < eval.objective) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            report.stalled = true;
            return finish("line search failed");
        }

        x.swap(trial);
        eval = std::move(next);
        last_alpha = alpha;
        report.iterations = iter;
        report.trace.push_back({iter, eval.objective, alpha});

        auto g_new = symmetrize(raw_gradient(grid, eval));
        if (config.gradient_check_every > 0 && iter % config.gradient_check_every == 0) {
            report.worst_gradient_check = std::max(
                report.worst_gradient_check,
                spot_check_gradient(grid, x, spec.targets, raw_gradient(grid, eval)));
        }

        if (eval.objective < config.tol_abs) return finish("objective below absolute tolerance");
        history.push_back(eval.objective);
        if (history.size() > 6) history.pop_front();
        if (history.size() == 6 && history.front() - history.back() < config.tol_rel * history.front()) {
            return finish("relative decrease below tolerance");
        }

        double beta = 0.0;
        if (config.n_restart <= 0 || iter % config.n_restart != 0) {
            double gg = dot(g, g);
            double num_pr = 0.0;
            for (std::size_t i = 0; i < n; ++i) num_pr += g_new[i] * (g_new[i] - g[i]);
            beta = (gg > 0.0) ? std::max(0.0, num_pr / gg) : 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) d[i] = -g_new[i] + beta * d[i];
        g.swap(g_new);
    }
    return finish("maximum iterations reached");
}

}  // namespace zsf
