#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace zsf {

/// Imaginary parts of the nontrivial Riemann zeros, ascending. Indexing
/// through `zero(n)` is 1-based to match the usual Z_1 = 14.1347...
class ZeroTable {
public:
    explicit ZeroTable(std::vector<double> zeros);

    std::size_t size() const { return zeros_.size(); }
    double zero(std::size_t n) const;
    const std::vector<double>& values() const { return zeros_; }

private:
    std::vector<double> zeros_;
};

/// Parses one decimal number per line; blank lines and lines starting with
/// '#' are ignored. Raises DataError naming the offending line.
ZeroTable load_zeros(std::istream& in);
ZeroTable load_zeros_file(const std::string& path);

/// Smooth main term of the Riemann-von Mangoldt counting function,
/// N(T) = (T/2pi) log(T/2pi) - T/2pi.
double counting_function(double T);

/// Right-hand side of the WKB phase condition, f(E) = (E/2)(log(E/2pi) - 1) + pi/2.
/// Identically f(E) = pi N(E) + pi/2.
double phase_rhs(double E);

/// Principal branch of the Lambert W function for y >= 0.
double lambert_w(double y);

/// Smooth approximation Z_{n,a}: the solution of N(E) = n - 1 above 2pi,
/// i.e. 2pi(n-1)/W((n-1)/e), with Z_{1,a} = 2pi e.
double smooth_zero(std::size_t n);

/// Same quantity obtained independently by bisection on phase_rhs(E) = (n - 1/2) pi.
double smooth_zero_by_phase(std::size_t n);

/// Signed approximation error Z_{n,a} - Z_n.
double approximation_error(std::size_t n, const ZeroTable& table);

}  // namespace zsf
