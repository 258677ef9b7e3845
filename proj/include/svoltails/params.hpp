#pragma once

#include <variant>

namespace svt {

// dX = mu X dt + sqrt(Y) X dW,  dY = (a + bY) dt + c sqrt(Y) dZ
struct HestonParams {
    double mu = 0.0;
    double a = 1.0;
    double b = -1.0;
    double c = 1.0;
    double y0 = 1.0;
    double x0 = 1.0;
};

// dX = mu X dt + |Y| X dW,  dY = q (m - Y) dt + sigma dZ
struct SteinSteinParams {
    double mu = 0.0;
    double q = 1.0;
    double m = 0.2;
    double sigma = 0.2;
    double y0 = 0.2;
    double x0 = 1.0;
};

using Model = std::variant<HestonParams, SteinSteinParams>;

void validate(const HestonParams& p);
void validate(const SteinSteinParams& p);
void validate(const Model& model);
void validate_horizon(double t);

inline double initial_price(const Model& model) {
    return std::visit([](const auto& p) { return p.x0; }, model);
}

inline double drift(const Model& model) {
    return std::visit([](const auto& p) { return p.mu; }, model);
}

Model with_drift(Model model, double mu);

// Stein-Stein with m = 0 as a Heston model for Y^2.
HestonParams squared_ou_as_cir(const SteinSteinParams& p);

}  // namespace svt
