#include "zsf/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "zsf/error.hpp"

namespace zsf {

namespace {

double operator_scale(const TridiagonalOperator& op) {
    double s = 0.0;
    const std::size_t n = op.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::abs(op.diagonal[i]);
        if (i > 0) r += std::abs(op.off_diagonal[i - 1]);
        if (i + 1 < n) r += std::abs(op.off_diagonal[i]);
        s = std::max(s, r);
    }
    return s;
}

// Solves (T - shift I) y = b in place by Gaussian elimination with partial
// pivoting on the tridiagonal band. Exactly singular pivots are perturbed to
// `tiny`, which is what inverse iteration wants anyway.
void shifted_solve(const TridiagonalOperator& op, double shift, double tiny,
                   std::span<double> b) {
    const std::size_t n = op.size();
    if (n == 1) {
        double p = op.diagonal[0] - shift;
        if (std::abs(p) < tiny) p = tiny;
        b[0] /= p;
        return;
    }
    // Row i after elimination: u0[i] x_i + u1[i] x_{i+1} + u2[i] x_{i+2}.
    std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0);
    double d = op.diagonal[0] - shift;
    double du = op.off_diagonal[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double sub = op.off_diagonal[i];
        const double dnext = op.diagonal[i + 1] - shift;
        const double unext = (i + 2 < n) ? op.off_diagonal[i + 1] : 0.0;
        if (std::abs(d) >= std::abs(sub)) {
            if (std::abs(d) < tiny) d = tiny;
            const double m = sub / d;
            u0[i] = d;
            u1[i] = du;
            u2[i] = 0.0;
            b[i + 1] -= m * b[i];
            d = dnext - m * du;
            du = unext;
        } else {
            // Swap rows i and i+1.
            const double m = d / sub;
            u0[i] = sub;
            u1[i] = dnext;
            u2[i] = unext;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= m * b[i];
            d = du - m * dnext;
            du = -m * unext;
        }
    }
    if (std::abs(d) < tiny) d = tiny;
    u0[n - 1] = d;
    b[n - 1] /= u0[n - 1];
    b[n - 2] = (b[n - 2] - u1[n - 2] * b[n - 1]) / u0[n - 2];
    for (std::size_t ii = n - 2; ii-- > 0;) {
        b[ii] = (b[ii] - u1[ii] * b[ii + 1] - u2[ii] * b[ii + 2]) / u0[ii];
    }
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double residual_norm(const TridiagonalOperator& op, double lambda, std::span<const double> v) {
    const std::size_t n = op.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (op.diagonal[i] - lambda) * v[i];
        if (i > 0) r += op.off_diagonal[i - 1] * v[i - 1];
        if (i + 1 < n) r += op.off_diagonal[i] * v[i + 1];
        s += r * r;
    }
    return std::sqrt(s);
}

long double rayleigh_quotient(const TridiagonalOperator& op, std::span<const double> v) {
    const std::size_t n = op.size();
    long double num = 0.0L;
    long double den = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double vi = v[i];
        num += static_cast<long double>(op.diagonal[i]) * vi * vi;
        if (i + 1 < n) num += 2.0L * static_cast<long double>(op.off_diagonal[i]) * vi * v[i + 1];
        den += vi * vi;
    }
    return num / den;
}

void apply_sign_convention(std::span<double> v) {
    const std::size_t c = v.size() / 2;
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    const double thresh = 1e-6 * vmax;
    double ref = 0.0;
    if (std::abs(v[c]) > thresh) {
        ref = v[c];
    } else {
        for (double x : v) {
            if (std::abs(x) > thresh) {
                ref = x;
                break;
            }
        }
    }
    if (ref < 0.0) {
        for (double& x : v) x = -x;
    }
}

}  // namespace

std::size_t count_below(const TridiagonalOperator& op, double lambda) {
    const std::size_t n = op.size();
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e2 = (i == 0) ? 0.0 : op.off_diagonal[i - 1] * op.off_diagonal[i - 1];
        q = op.diagonal[i] - lambda - (i == 0 ? 0.0 : e2 / q);
        if (std::abs(q) < kSturmPivotFloor) q = (q < 0.0) ? -kSturmPivotFloor : kSturmPivotFloor;
        if (q < 0.0) ++count;
    }
    return count;
}

std::pair<double, double> gershgorin_bounds(const TridiagonalOperator& op) {
    const std::size_t n = op.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(op.off_diagonal[i - 1]);
        if (i + 1 < n) r += std::abs(op.off_diagonal[i]);
        lo = std::min(lo, op.diagonal[i] - r);
        hi = std::max(hi, op.diagonal[i] + r);
    }
    // Widen slightly so that count_below(hi) == n even with rounding.
    const double pad = 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max({std::abs(lo), std::abs(hi), 1.0}) * static_cast<double>(n) +
                       kSturmPivotFloor;
    return {lo - pad, hi + pad};
}

std::vector<double> lowest_eigenvalues(const TridiagonalOperator& op, std::size_t k,
                                       std::span<const double> hints, double rel_tol) {
    const std::size_t n = op.size();
    if (k == 0) return {};
    if (n == 0 || k > n) {
        throw ConfigError("requested " + std::to_string(k) + " eigenvalues of a " +
                          std::to_string(n) + "x" + std::to_string(n) + " operator");
    }
    if (n == 1) return {op.diagonal[0]};

    const auto [glo, ghi] = gershgorin_bounds(op);
    // Invariant: count_below(lo[j]) <= j < count_below(hi[j]).
    std::vector<double> lo(k, glo), hi(k, ghi);
    auto record = [&](double x, std::size_t c) {
        for (std::size_t j = 0; j < k; ++j) {
            if (j < c) {
                hi[j] = std::min(hi[j], x);
            } else {
                lo[j] = std::max(lo[j], x);
            }
        }
    };

    for (std::size_t j = 0; j < std::min(k, hints.size()); ++j) {
        const double h = hints[j];
        if (!std::isfinite(h) || h <= glo || h >= ghi) continue;
        const double delta = 1e-7 * std::max(1.0, std::abs(h));
        for (double x : {h - delta, h + delta}) record(x, count_below(op, x));
    }

    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        while (true) {
            const double width = hi[j] - lo[j];
            const double mid = 0.5 * (lo[j] + hi[j]);
            if (width <= rel_tol * std::max(1.0, std::abs(mid)) || mid <= lo[j] || mid >= hi[j]) {
                out[j] = mid;
                break;
            }
            record(mid, count_below(op, mid));
        }
    }
    return out;
}

EigenPair eigenvector(const TridiagonalOperator& op, double lambda, double dx,
                      std::span<const EigenPair> previous) {
    const std::size_t n = op.size();
    if (n == 0) throw ConfigError("eigenvector of an empty operator");
    const double scale = std::max(operator_scale(op), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = eps * scale;
    const double cluster_tol = 1e-3 * scale;
    const double res_tol = 1e-8 * scale;
    const double sqrt_dx = std::sqrt(dx);

    std::vector<const EigenPair*> cluster;
    for (const auto& p : previous) {
        if (std::abs(p.value - lambda) <= cluster_tol && p.vector.size() == n) cluster.push_back(&p);
    }
    // Previous vectors are grid-normalized; project with Euclidean unit versions.
    auto orthogonalize = [&](std::span<double> v) {
        for (const EigenPair* p : cluster) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += p->vector[i] * v[i];
            dot *= dx;
            for (std::size_t i = 0; i < n; ++i) v[i] -= dot * p->vector[i];
        }
    };

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 1.0 + static_cast<double>(i + 1) / static_cast<double>(n);
    }
    orthogonalize(v);

    constexpr int kMaxIter = 12;
    double res = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (; iter < kMaxIter; ++iter) {
        double nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) break;
        for (double& x : v) x /= nv;
        shifted_solve(op, lambda, tiny, v);
        orthogonalize(v);
        nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) break;
        for (double& x : v) x /= nv;
        res = residual_norm(op, lambda, v);
        if (iter >= 1 && res <= res_tol) {
            ++iter;
            break;
        }
    }
    if (!(res <= res_tol)) {
        std::ostringstream msg;
        msg << "inverse iteration did not converge at lambda=" << lambda << " after " << iter
            << " iterations (residual " << res << ", tolerance " << res_tol << ")";
        throw NumericalError(msg.str());
    }

    apply_sign_convention(v);
    EigenPair pair;
    const long double rq = rayleigh_quotient(op, v);
    // The Rayleigh quotient is second-order accurate; keep it only if it stays
    // consistent with the bisection bracket.
    pair.value = (std::abs(static_cast<double>(rq) - lambda) <= 1e-8 * std::max(1.0, std::abs(lambda)))
                     ? static_cast<double>(rq)
                     : lambda;
    for (double& x : v) x /= sqrt_dx;
    pair.vector = std::move(v);
    return pair;
}

std::vector<EigenPair> lowest_eigenpairs(const TridiagonalOperator& op, std::size_t k, double dx,
                                         std::span<const double> hints) {
    const auto values = lowest_eigenvalues(op, k, hints);
    std::vector<EigenPair> pairs;
    pairs.reserve(k);
    for (double lambda : values) {
        pairs.push_back(eigenvector(op, lambda, dx, pairs));
    }
    return pairs;
}

}  // namespace zsf
