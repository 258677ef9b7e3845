#pragma once

#include <cmath>
#include <complex>

// Hyperbolic kernels with the growth e^{z} factored out; all assume Re z >= 0.
namespace svt::detail {

using cplx = std::complex<double>;

inline cplx expm1(cplx u) {
    if (std::abs(u) < 0.5) {
        cplx term = u;
        cplx sum = u;
        for (int k = 2; k < 24; ++k) {
            term *= u / double(k);
            sum += term;
        }
        return sum;
    }
    return std::exp(u) - 1.0;
}

// e^{-z} cosh z
inline cplx ch_scaled(cplx z) { return 0.5 * (1.0 + std::exp(-2.0 * z)); }

// e^{-z} sinh z / z
inline cplx sh_scaled(cplx z) {
    if (z == cplx(0.0)) return 1.0;
    return -expm1(-2.0 * z) / (2.0 * z);
}

// e^{-z} (cosh z - 1) / z^2
inline cplx g3(cplx z) {
    if (z == cplx(0.0)) return 0.5;
    cplx e = expm1(-z);
    return e * e / (2.0 * z * z);
}

// e^{-z} (sinh z - z cosh z) / z^3
inline cplx g4(cplx z) {
    if (std::abs(z) < 2.0) {
        cplx z2 = z * z;
        cplx pw = 1.0;
        cplx sum = 0.0;
        double fact = 6.0;  // (2k+1)! at k = 1
        for (int k = 1; k < 30; ++k) {
            sum -= 2.0 * k * pw / fact;
            pw *= z2;
            fact *= double(2 * k + 2) * double(2 * k + 3);
        }
        return std::exp(-z) * sum;
    }
    cplx e2 = std::exp(-2.0 * z);
    return ((1.0 - e2) - z * (1.0 + e2)) / (2.0 * z * z * z);
}

// e^{-z} (2 cosh z - 2 - z sinh z) / z^4
inline cplx g5(cplx z) {
    if (std::abs(z) < 2.0) {
        cplx z2 = z * z;
        cplx pw = 1.0;
        cplx sum = 0.0;
        double fact = 24.0;  // (2k)! at k = 2
        for (int k = 2; k < 31; ++k) {
            sum += (2.0 - 2.0 * k) * pw / fact;
            pw *= z2;
            fact *= double(2 * k + 1) * double(2 * k + 2);
        }
        return std::exp(-z) * sum;
    }
    cplx e1 = std::exp(-z);
    cplx e2 = e1 * e1;
    return ((1.0 + e2) - 2.0 * e1 - 0.5 * z * (1.0 - e2)) / (z * z * z * z);
}

}  // namespace svt::detail
