#include "zsf/zeta.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "zsf/error.hpp"

namespace zsf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}
}  // namespace

ZeroTable::ZeroTable(std::vector<double> zeros) : zeros_(std::move(zeros)) {
    if (zeros_.empty()) throw DataError("zero table is empty");
    for (std::size_t i = 0; i < zeros_.size(); ++i) {
        if (!(zeros_[i] > 0.0) || !std::isfinite(zeros_[i])) {
            throw DataError("zero #" + std::to_string(i + 1) + " is not a positive finite number");
        }
        if (i > 0 && !(zeros_[i] > zeros_[i - 1])) {
            throw DataError("zero #" + std::to_string(i + 1) + " is not ascending");
        }
    }
    if (zeros_[0] < 14.13 || zeros_[0] > 14.14) {
        throw DataError("first zero " + std::to_string(zeros_[0]) + " outside [14.13, 14.14]");
    }
}

double ZeroTable::zero(std::size_t n) const {
    if (n == 0 || n > zeros_.size()) {
        throw ConfigError("zero index " + std::to_string(n) + " outside 1.." +
                          std::to_string(zeros_.size()));
    }
    return zeros_[n - 1];
}

ZeroTable load_zeros(std::istream& in) {
    std::vector<double> zeros;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            throw DataError("line " + std::to_string(lineno) + ": cannot parse '" +
                            std::string(t) + "' as a number");
        }
        if (!zeros.empty() && !(value > zeros.back())) {
            throw DataError("line " + std::to_string(lineno) + ": zeros not strictly ascending");
        }
        zeros.push_back(value);
    }
    if (zeros.empty()) throw DataError("zeros file contains no entries");
    return ZeroTable(std::move(zeros));
}

ZeroTable load_zeros_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open zeros file '" + path + "'");
    return load_zeros(in);
}

double counting_function(double T) {
    if (!(T > 0.0)) throw DomainError("counting function requires T > 0");
    const double u = T / kTwoPi;
    return u * std::log(u) - u;
}

double phase_rhs(double E) {
    if (!(E > 0.0)) throw DomainError("phase function requires E > 0");
    return 0.5 * E * (std::log(E / kTwoPi) - 1.0) + 0.5 * std::numbers::pi;
}

double lambert_w(double y) {
    if (y < 0.0 || std::isnan(y)) throw DomainError("lambert_w requires y >= 0");
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return y;
    // Starting guess: log1p is accurate for small y, log(y) - log(log(y)) for large.
    double w = (y < 3.0) ? std::log1p(y) * (1.0 - std::log1p(std::log1p(y)) / (2.0 + std::log1p(y)))
                         : std::log(y) - std::log(std::log(y));
    if (!(w > 0.0)) w = y;
    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - y;
        // Halley step.
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        double next = w - f / denom;
        if (!(next > 0.0)) next = 0.5 * w;
        if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * next) {
            return next;
        }
        w = next;
    }
    return w;
}

double smooth_zero(std::size_t n) {
    if (n == 0) throw ConfigError("smooth_zero index must be >= 1");
    if (n == 1) return kTwoPi * std::numbers::e;
    const double m = static_cast<double>(n - 1);
    return kTwoPi * m / lambert_w(m / std::numbers::e);
}

double smooth_zero_by_phase(std::size_t n) {
    if (n == 0) throw ConfigError("smooth_zero index must be >= 1");
    const double target = (static_cast<double>(n) - 0.5) * std::numbers::pi;
    // phase_rhs is increasing above 2pi; its value at 2pi is pi/2 - pi < target.
    double lo = kTwoPi;
    double hi = 2.0 * kTwoPi * std::numbers::e;
    while (phase_rhs(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phase_rhs(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double approximation_error(std::size_t n, const ZeroTable& table) {
    return smooth_zero(n) - table.zero(n);
}

}  // namespace zsf
