#include "svoltails/params.hpp"

#include <cmath>
#include <string>

#include "svoltails/errors.hpp"

namespace svt {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const HestonParams& p) {
    require(finite(p.mu) && finite(p.a) && finite(p.b) && finite(p.c) && finite(p.y0) && finite(p.x0),
            "heston parameters must be finite");
    require(p.a >= 0.0, "heston: a >= 0 violated");
    require(p.b <= 0.0, "heston: b <= 0 violated");
    require(p.c > 0.0, "heston: c > 0 violated");
    require(p.y0 >= 0.0, "heston: y0 >= 0 violated");
    require(p.x0 > 0.0, "heston: x0 > 0 violated");
}

void validate(const SteinSteinParams& p) {
    require(finite(p.mu) && finite(p.q) && finite(p.m) && finite(p.sigma) && finite(p.y0) && finite(p.x0),
            "stein_stein parameters must be finite");
    require(p.q > 0.0, "stein_stein: q > 0 violated");
    require(p.m >= 0.0, "stein_stein: m >= 0 violated");
    require(p.sigma > 0.0, "stein_stein: sigma > 0 violated");
    require(p.x0 > 0.0, "stein_stein: x0 > 0 violated");
}

void validate(const Model& model) {
    std::visit([](const auto& p) { validate(p); }, model);
}

void validate_horizon(double t) {
    require(std::isfinite(t) && t > 0.0, "horizon t > 0 violated");
}

Model with_drift(Model model, double mu) {
    std::visit([mu](auto& p) { p.mu = mu; }, model);
    return model;
}

HestonParams squared_ou_as_cir(const SteinSteinParams& p) {
    HestonParams h;
    h.mu = p.mu;
    h.a = p.sigma * p.sigma;
    h.b = -2.0 * p.q;
    h.c = 2.0 * p.sigma;
    h.y0 = p.y0 * p.y0;
    h.x0 = p.x0;
    return h;
}

}  // namespace svt
