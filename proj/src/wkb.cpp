#include "zsf/wkb.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "zsf/error.hpp"
#include "zsf/zeta.hpp"

namespace zsf {

namespace {

// Integral of sqrt(E - V) over one segment where V goes linearly from va to vb
// (va <= vb assumed by the marching order, but either order works).
double segment_integral(double h, double va, double vb, double E) {
    double a = E - va;
    double b = E - vb;
    if (a < b) std::swap(a, b);
    if (a <= 0.0) return 0.0;
    if (b >= 0.0) {
        const double sa = std::sqrt(a);
        const double sb = std::sqrt(b);
        return (2.0 / 3.0) * h * (a + sa * sb + b) / (sa + sb);
    }
    // Turning point inside the segment.
    return (2.0 / 3.0) * h * a * std::sqrt(a) / (a - b);
}

// 2 * integral over the existing segments only (no extension).
double integral_over_segments(const std::vector<std::pair<double, double>>& pts, double E) {
    double s = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const auto& [xa, va] = pts[k - 1];
        const auto& [xb, vb] = pts[k];
        if (va >= E) break;
        s += segment_integral(xb - xa, va, vb, E);
    }
    return 2.0 * s;
}

}  // namespace

double ground_value() {
    double lo = 2.0 * std::numbers::pi;
    double hi = 2.0 * std::numbers::pi * std::numbers::e;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (phase_rhs(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double phase_integral(const HalfProfile& profile, double E) {
    const auto& pts = profile.points;
    if (pts.empty()) throw ConfigError("empty profile");
    if (E < pts.front().second) {
        throw DomainError("energy below the profile minimum");
    }
    double s = integral_over_segments(pts, E);
    const auto& [xl, vl] = pts.back();
    if (E > vl) {
        if (pts.size() < 2) throw DomainError("energy above a single-point profile");
        const auto& [xp, vp] = pts[pts.size() - 2];
        const double slope = (vl - vp) / (xl - xp);
        if (!(slope > 0.0)) throw DomainError("profile is flat at its end; no turning point");
        const double h = (E - vl) / slope;
        s += 2.0 * segment_integral(h, vl, E, E);
    }
    return s;
}

HalfProfile march_potential(double e_max, double dE, const PhaseFunction& phase, double e_start) {
    if (!(dE > 0.0)) throw ConfigError("energy step must be positive");
    if (!(e_max > e_start)) throw ConfigError("march end energy must exceed the start energy");
    HalfProfile profile;
    profile.points.emplace_back(0.0, e_start);
    const double prefactor = 3.0 / (4.0 * std::sqrt(dE));
    std::size_t step = 0;
    double E = e_start;
    while (E < e_max) {
        ++step;
        const double e_next = e_start + static_cast<double>(step) * dE;
        const double inner = integral_over_segments(profile.points, e_next);
        const double dx = prefactor * (phase(e_next) - inner);
        if (!(dx > 0.0)) {
            std::ostringstream msg;
            msg << "non-positive turning point increment " << dx << " at E=" << e_next
                << "; reduce the energy step (dE=" << dE << ")";
            throw NumericalError(msg.str());
        }
        profile.points.emplace_back(profile.points.back().first + dx, e_next);
        E = e_next;
    }
    return profile;
}

HalfProfile march_potential(double e_max, double dE) {
    return march_potential(e_max, dE, [](double e) { return phase_rhs(e); }, ground_value());
}

SampledPotential smooth_potential(const Grid& grid, double e_max, double dE) {
    const auto profile = march_potential(e_max, dE);
    return sample_symmetric(profile.points, grid);
}

}  // namespace zsf
