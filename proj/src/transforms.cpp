#include "svoltails/transforms.hpp"

#include <cmath>
#include <numbers>

#include "hyperbolic.hpp"
#include "svoltails/errors.hpp"
#include "svoltails/special_roots.hpp"

namespace svt {

namespace {

constexpr double pi = std::numbers::pi;

double heston_pole(const HestonParams& p, double t, double r0) {
    return -(p.b * p.b + 4.0 * r0 * r0 / (t * t)) / (2.0 * p.c * p.c);
}

double stein_pole(const SteinSteinParams& p, double t, double r0) {
    return -(r0 * r0 / (t * t) + p.q * p.q) / (2.0 * p.sigma * p.sigma);
}

double heston_root(const HestonParams& p, double t) { return smallest_root(0.5 * t * std::abs(p.b)); }
double stein_root(const SteinSteinParams& p, double t) { return smallest_root(p.q * t); }

// log(e^{-z}(cosh z + s sinh z / z)) continued along the half-plane. `f` is
// 1 + z^2/r0^2 computed from lambda without forming z^2.
cplx log_denominator(cplx h, cplx f) { return std::log(f) + std::log(h / f); }

cplx log_cir(const HestonParams& p, double t, double r0, cplx lam) {
    double c2 = p.c * p.c;
    if (p.b == 0.0) return log_besq_laplace(p.y0, 4.0 * p.a / c2, 0.25 * c2 * t, 4.0 * lam / c2);
    double kappa = -p.b;
    cplx z = 0.5 * t * std::sqrt(p.b * p.b + 2.0 * c2 * lam);
    cplx sh = detail::sh_scaled(z);
    cplx h = detail::ch_scaled(z) + 0.5 * kappa * t * sh;
    cplx f = (t * t * c2 / (2.0 * r0 * r0)) * (lam - heston_pole(p, t, r0));
    cplx log_h = log_denominator(h, f);
    return -p.a * p.b * t / c2 - (2.0 * p.a / c2) * (z + log_h) - p.y0 * lam * t * sh / h;
}

cplx log_ou2(const SteinSteinParams& p, double t, double r0, cplx lam) {
    double s2 = p.sigma * p.sigma;
    double q = p.q;
    cplx z = t * std::sqrt(q * q + 2.0 * s2 * lam);
    cplx sh = detail::sh_scaled(z);
    cplx h = detail::ch_scaled(z) + q * t * sh;
    cplx f = (2.0 * s2 * t * t / (r0 * r0)) * (lam - stein_pole(p, t, r0));
    cplx log_h = log_denominator(h, f);
    cplx num = -p.y0 * p.y0 * lam * t * sh;
    if (p.m != 0.0) {
        double mq = p.m * q;
        num += -2.0 * mq * p.y0 * lam * t * t * detail::g3(z) + mq * mq * lam * t * t * t * detail::g4(z) +
               mq * mq * q * lam * t * t * t * t * detail::g5(z);
    }
    return 0.5 * q * t - 0.5 * (z + log_h) + num / h;
}

void check_domain(const TransformDomain& d, cplx lam) {
    if (!(lam.real() > d.re_lower))
        throw DomainError("transform argument outside the analyticity half-plane (Re lambda must exceed " +
                          std::to_string(d.re_lower) + ")");
}

}  // namespace

TransformDomain transform_domain(const HestonParams& p, double t) {
    validate(p);
    validate_horizon(t);
    return {heston_pole(p, t, heston_root(p, t)), 0.5};
}

TransformDomain transform_domain(const SteinSteinParams& p, double t) {
    validate(p);
    validate_horizon(t);
    return {stein_pole(p, t, stein_root(p, t)), 0.5};
}

TransformDomain transform_domain(const Model& model, double t) {
    return std::visit([t](const auto& p) { return transform_domain(p, t); }, model);
}

double besq_integrated_laplace(double x, double delta, double t, double lam) {
    if (!(x >= 0.0) || !(delta >= 0.0) || !(t > 0.0) || !(lam >= 0.0))
        throw DomainError("besq_integrated_laplace: requires x >= 0, delta >= 0, t > 0, lam >= 0");
    double w = lam * t;
    double log_cosh = w + std::log1p(std::exp(-2.0 * w)) - std::log(2.0);
    return std::exp(-0.5 * delta * log_cosh - 0.5 * x * lam * std::tanh(w));
}

cplx log_besq_laplace(double x, double delta, double tau, cplx nu) {
    cplx w = std::sqrt(2.0 * nu) * tau;
    cplx ch = detail::ch_scaled(w);
    cplx f = 1.0 + 8.0 * nu * tau * tau / (pi * pi);
    cplx log_cosh = w + log_denominator(ch, f);
    return -0.5 * delta * log_cosh - x * nu * tau * detail::sh_scaled(w) / ch;
}

LaplaceTransform::LaplaceTransform(const Model& model, double t) : model_(model), t_(t) {
    validate(model);
    validate_horizon(t);
    if (auto* h = std::get_if<HestonParams>(&model_)) {
        root_ = heston_root(*h, t);
        domain_ = {heston_pole(*h, t, root_), 0.5};
    } else {
        const auto& s = std::get<SteinSteinParams>(model_);
        root_ = stein_root(s, t);
        domain_ = {stein_pole(s, t, root_), 0.5};
    }
}

cplx LaplaceTransform::log_value(cplx lam) const {
    check_domain(domain_, lam);
    if (auto* h = std::get_if<HestonParams>(&model_)) return log_cir(*h, t_, root_, lam);
    return log_ou2(std::get<SteinSteinParams>(model_), t_, root_, lam);
}

cplx log_cir_integrated_laplace(const HestonParams& p, double t, cplx lam) {
    return LaplaceTransform(p, t).log_value(lam);
}

cplx cir_integrated_laplace(const HestonParams& p, double t, cplx lam) {
    return std::exp(log_cir_integrated_laplace(p, t, lam));
}

cplx log_ou2_integrated_laplace(const SteinSteinParams& p, double t, cplx lam) {
    return LaplaceTransform(p, t).log_value(lam);
}

cplx ou2_integrated_laplace(const SteinSteinParams& p, double t, cplx lam) {
    return std::exp(log_ou2_integrated_laplace(p, t, lam));
}

cplx log_integrated_laplace(const Model& model, double t, cplx lam) {
    return LaplaceTransform(model, t).log_value(lam);
}

cplx integrated_laplace(const Model& model, double t, cplx lam) {
    return std::exp(log_integrated_laplace(model, t, lam));
}

cplx char_fn(const Model& model, double t, double xi) {
    return integrated_laplace(model, t, cplx(0.0, xi));
}

}  // namespace svt
