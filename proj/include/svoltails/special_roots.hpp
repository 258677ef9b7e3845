#pragma once

#include <complex>

namespace svt {

struct RootQuery {
    double s = 0.0;
    double tolerance = 1e-13;
};

struct PhiDerivatives {
    double first;
    double second;
};

// Phi_s(z) = z cos z + s sin z
std::complex<double> phi(double s, std::complex<double> z);
double phi(double s, double z);

PhiDerivatives phi_derivatives(double s, double z);

// Smallest positive zero r_s of Phi_s, s >= 0.
double smallest_root(const RootQuery& q);
inline double smallest_root(double s) { return smallest_root(RootQuery{s, 1e-15}); }

}  // namespace svt
