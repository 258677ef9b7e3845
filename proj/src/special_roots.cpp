#include "svoltails/special_roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "svoltails/errors.hpp"

namespace svt {

std::complex<double> phi(double s, std::complex<double> z) {
    return z * std::cos(z) + s * std::sin(z);
}

double phi(double s, double z) {
    return z * std::cos(z) + s * std::sin(z);
}

PhiDerivatives phi_derivatives(double s, double z) {
    double c = std::cos(z);
    double sn = std::sin(z);
    double first = (1.0 + s) * c - z * sn;
    double second = -2.0 * sn - (z * c + s * sn);
    return {first, second};
}

double smallest_root(const RootQuery& q) {
    constexpr double pi = std::numbers::pi;
    if (!(q.s >= 0.0) || !std::isfinite(q.s)) throw DomainError("smallest_root: s >= 0 violated");
    if (!(q.tolerance > 0.0)) throw DomainError("smallest_root: tolerance > 0 violated");
    if (q.s == 0.0) return pi / 2.0;
    if (q.s > 1e12) return std::clamp(pi - pi / q.s, std::nextafter(pi / 2.0, pi), std::nextafter(pi, 0.0));

    // phi(u) = -u / tan u increases from 0 to +inf on (pi/2, pi)
    auto g = [&](double u) { return -u / std::tan(u) - q.s; };
    double lo = pi / 2.0 + 1e-12;
    double hi = pi;
    if (!(g(lo) < 0.0 && g(hi) > 0.0)) throw NumericalError("smallest_root: bracket does not straddle the root");
    for (int it = 0; it < 200 && hi - lo > q.tolerance; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace svt
