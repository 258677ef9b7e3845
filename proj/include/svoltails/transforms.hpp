#pragma once

#include <complex>

#include "svoltails/params.hpp"

namespace svt {

using cplx = std::complex<double>;

// Half-plane Re(lambda) > re_lower where the integrated-variance transform is analytic.
struct TransformDomain {
    double re_lower;
    double decay_exponent;
};

TransformDomain transform_domain(const HestonParams& p, double t);
TransformDomain transform_domain(const SteinSteinParams& p, double t);
TransformDomain transform_domain(const Model& model, double t);

// E[exp(-(lam^2/2) int_0^t BESQ^delta_x)]
double besq_integrated_laplace(double x, double delta, double t, double lam);

// log E[exp(-nu int_0^tau BESQ^delta_x)], complex nu; entire in nu away from the cosh zeros.
cplx log_besq_laplace(double x, double delta, double tau, cplx nu);

// E[exp(-lam int_0^t Y ds)] for the CIR variance; b = 0 goes through the BESQ time change.
cplx log_cir_integrated_laplace(const HestonParams& p, double t, cplx lam);
cplx cir_integrated_laplace(const HestonParams& p, double t, cplx lam);

// E[exp(-lam int_0^t Y^2 ds)] for the OU volatility, normalized to 1 at lam = 0.
cplx log_ou2_integrated_laplace(const SteinSteinParams& p, double t, cplx lam);
cplx ou2_integrated_laplace(const SteinSteinParams& p, double t, cplx lam);

// Evaluator with the root r_s and the pole precomputed for one (model, t).
class LaplaceTransform {
public:
    LaplaceTransform(const Model& model, double t);

    cplx log_value(cplx lam) const;
    cplx operator()(cplx lam) const { return std::exp(log_value(lam)); }

    const TransformDomain& domain() const { return domain_; }
    const Model& model() const { return model_; }
    double horizon() const { return t_; }

private:
    Model model_;
    double t_;
    double root_;
    TransformDomain domain_;
};

cplx log_integrated_laplace(const Model& model, double t, cplx lam);
cplx integrated_laplace(const Model& model, double t, cplx lam);

// E[exp(-i xi V)] with V the integrated variance.
cplx char_fn(const Model& model, double t, double xi);

}  // namespace svt
