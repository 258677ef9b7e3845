#include "svoltails/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "svoltails/errors.hpp"
#include "svoltails/special_roots.hpp"

namespace svt {

namespace {

constexpr double pi = std::numbers::pi;

double forward_scale(double x0, double mu, double t) { return x0 * std::exp(mu * t); }

// h_j and h_j' for the four Stein-Stein exponent pieces, argument z = r_{qt}.
struct SinePiece {
    double value;
    double deriv;
};

SinePiece piece2(double z) { return {std::sin(z), std::cos(z)}; }

SinePiece piece3(double z) {
    double s = std::sin(z), c = std::cos(z);
    return {(1.0 - c) / z, s / z - (1.0 - c) / (z * z)};
}

SinePiece piece4(double z) {
    double s = std::sin(z), c = std::cos(z);
    double num = s - z * c;
    return {num / (z * z), s / z - 2.0 * num / (z * z * z)};
}

SinePiece piece5(double z) {
    double s = std::sin(z), c = std::cos(z);
    double num = 2.0 - 2.0 * c - z * s;
    return {num / (z * z * z), (s - z * c) / (z * z * z) - 3.0 * num / (z * z * z * z)};
}

}  // namespace

HestonMixingConstants heston_mixing_constants(const HestonParams& p, double t) {
    validate(p);
    validate_horizon(t);
    if (!(p.b < 0.0)) throw DomainError("heston_mixing_constants: b < 0 required (use the b = 0 closed forms)");
    if (!(p.y0 > 0.0)) throw DomainError("heston_mixing_constants: y0 > 0 required");
    HestonMixingConstants k{};
    const double c2 = p.c * p.c;
    const double s = 0.5 * t * std::abs(p.b);
    const double r = smallest_root(s);
    const double sn = std::sin(r), cs = std::cos(r);
    const double dphi = phi_derivatives(s, r).first;
    const double K = 4.0 * r * r / (t * t) + p.b * p.b;
    k.r = r;
    k.u_bt = -4.0 * r * r / (t * t);
    k.lambda0 = 8.0 * r * r / (t * t * std::abs(dphi));
    k.eta1 = sn;
    k.eta2 = -t * t * cs / (8.0 * r);
    k.rho1 = t * t * dphi / (8.0 * r);
    k.rho2 = std::pow(t, 4) / 128.0 * (dphi / (r * r * r) + 2.0 * sn / (r * r));
    k.alpha = t * p.y0 * k.eta1 * K / (2.0 * c2 * std::abs(k.rho1));
    k.F_tilde0 = t * p.y0 / (2.0 * c2 * k.rho1 * k.rho1) *
                 ((k.eta1 - K * k.eta2) * k.rho1 + K * k.eta1 * k.rho2);
    const double ac = p.a / c2;
    k.A = std::exp(-0.5 * std::log(pi) + (0.25 + ac) * std::log(t / (2.0 * c2)) + (0.25 - ac) * std::log(k.alpha) +
                   2.0 * ac * std::log(k.lambda0) - p.a * p.b * t / c2 + k.F_tilde0);
    k.B = std::sqrt(2.0 * k.alpha * t) / p.c;
    k.C = t * K / (2.0 * c2);
    k.y_power = -0.5 + 2.0 * ac;
    return k;
}

HestonMixingConstants heston_mixing_constants_b0(const HestonParams& p, double t) {
    validate(p);
    validate_horizon(t);
    if (p.b != 0.0) throw DomainError("heston_mixing_constants_b0: b = 0 required");
    if (!(p.y0 > 0.0)) throw DomainError("heston_mixing_constants_b0: y0 > 0 required");
    HestonMixingConstants k{};
    const double c2 = p.c * p.c;
    const double ac = p.a / c2;
    k.r = pi / 2.0;
    k.u_bt = -pi * pi / (t * t);
    k.lambda0 = 4.0 * pi / (t * t);
    k.eta1 = 1.0;
    k.eta2 = 0.0;
    k.rho1 = -t * t / 8.0;
    k.rho2 = std::pow(t, 4) / (32.0 * pi * pi);
    k.alpha = 4.0 * p.y0 * pi * pi / (c2 * t * t * t);
    k.F_tilde0 = -3.0 * p.y0 / (c2 * t);
    k.A = std::pow(2.0, 0.25 + ac) * std::pow(p.y0, 0.25 - ac) / (p.c * std::sqrt(t)) * std::exp(k.F_tilde0);
    k.B = 2.0 * std::sqrt(2.0 * p.y0) * pi / (c2 * t);
    k.C = pi * pi / (2.0 * c2 * t);
    k.y_power = -0.5 + 2.0 * ac;
    return k;
}

SteinMixingConstants stein_mixing_constants(const SteinSteinParams& p, double t) {
    validate(p);
    validate_horizon(t);
    if (p.y0 == 0.0 && p.m == 0.0) throw DomainError("stein_mixing_constants: y0 and m cannot both vanish");
    SteinMixingConstants k{};
    const double q = p.q, s2 = p.sigma * p.sigma;
    const double r = smallest_root(q * t);
    const double dphi = phi_derivatives(q * t, r).first;
    const double v = -r * r / (t * t);
    k.r = r;
    k.v_qt = v;
    k.lambda1 = 2.0 * r * r / (t * t * std::abs(dphi));
    k.zeta1 = t * t * dphi / (2.0 * r);
    k.zeta2 = std::pow(t, 4) * ((1.0 + q * t) * std::cos(r) + r * std::sin(r)) / (8.0 * r * r * r);
    k.tau1 = (v - q * q) / k.zeta1;
    k.tau2 = (k.zeta1 - (v - q * q) * k.zeta2) / (k.zeta1 * k.zeta1);

    const double d = -t * t / (2.0 * r);  // d zeta / d lambda at lambda = 0
    auto parts = [&](double K, SinePiece h, double& a, double& f) {
        a = K * k.tau1 * h.value;
        f = K * (k.tau1 * h.deriv * d + k.tau2 * h.value);
    };
    parts(p.y0 * p.y0 * t / (2.0 * s2), piece2(r), k.alpha2, k.Ftilde2_0);
    parts(p.m * q * p.y0 * t * t / s2, piece3(r), k.alpha3, k.Ftilde3_0);
    parts(p.m * p.m * q * q * t * t * t / (2.0 * s2), piece4(r), k.alpha4, k.Ftilde4_0);
    parts(p.m * p.m * q * q * q * std::pow(t, 4) / (2.0 * s2), piece5(r), k.alpha5, k.Ftilde5_0);
    k.alpha = k.alpha2 + k.alpha3 + k.alpha4 + k.alpha5;
    k.F_tilde0 = k.Ftilde2_0 + k.Ftilde3_0 + k.Ftilde4_0 + k.Ftilde5_0;
    if (!(k.alpha > 0.0)) throw DomainError("stein_mixing_constants: residue alpha must be positive");
    k.E = std::sqrt(t) / (std::sqrt(2.0 * pi) * p.sigma) * std::exp(0.5 * q * t + k.F_tilde0) * std::sqrt(k.lambda1);
    k.F = std::sqrt(2.0 * k.alpha * t) / p.sigma;
    k.G = t * (q * q + r * r / (t * t)) / (2.0 * s2);
    return k;
}

LtiInputs heston_lti_inputs(const HestonParams& p, double t, const HestonMixingConstants& k) {
    const double c2 = p.c * p.c;
    LtiInputs inp;
    inp.alpha = k.alpha;
    inp.gamma1 = 0.0;
    inp.gamma2 = 2.0 * p.a / c2;
    inp.G2_at_0 = std::pow(k.lambda0, 2.0 * p.a / c2) * std::sqrt(2.0 * t) / p.c * std::exp(-p.a * p.b * t / c2);
    inp.F_tilde_at_0 = k.F_tilde0;
    return inp;
}

StockTailConstants heston_stock_constants(const HestonParams& p, double t) {
    return heston_stock_constants(p, t, p.b == 0.0 ? heston_mixing_constants_b0(p, t) : heston_mixing_constants(p, t));
}

StockTailConstants heston_stock_constants(const HestonParams& p, double t, const HestonMixingConstants& m) {
    const double ac = p.a / (p.c * p.c);
    const double e = 8.0 * m.C + t;
    StockTailConstants k;
    k.kind = ModelKind::heston;
    k.c1 = m.A / forward_scale(p.x0, p.mu, t) * std::pow(2.0, -0.75 + ac) * std::pow(t, -0.125 - 0.5 * ac) *
           std::pow(e, -0.125 - 0.5 * ac) * std::exp(m.B * m.B / (2.0 * e));
    k.c2 = m.B * std::sqrt(2.0) / (std::pow(t, 0.25) * std::pow(e, 0.25));
    k.c3 = 1.5 + std::sqrt(e) / (2.0 * std::sqrt(t));
    k.k = std::sqrt(m.C + t / 8.0);
    k.l = m.B;
    k.power_shift = ac;
    k.log_power = -0.75 + ac;
    return k;
}

StockTailConstants stein_stock_constants(const SteinSteinParams& p, double t) {
    return stein_stock_constants(p, t, stein_mixing_constants(p, t));
}

StockTailConstants stein_stock_constants(const SteinSteinParams& p, double t, const SteinMixingConstants& m) {
    const double e = 8.0 * m.G + t;
    StockTailConstants k;
    k.kind = ModelKind::stein_stein;
    k.c1 = m.E / forward_scale(p.x0, p.mu, t) * std::pow(2.0, -0.5) * std::pow(t, -0.25) * std::pow(e, -0.25) *
           std::exp(m.F * m.F / (2.0 * e));
    k.c2 = m.F * std::sqrt(2.0) / (std::pow(t, 0.25) * std::pow(e, 0.25));
    k.c3 = 1.5 + std::sqrt(e) / (2.0 * std::sqrt(t));
    k.k = std::sqrt(m.G + t / 8.0);
    k.l = m.F;
    k.power_shift = 0.0;
    k.log_power = -0.5;
    return k;
}

StockTailConstants stock_constants(const Model& model, double t) {
    if (auto* h = std::get_if<HestonParams>(&model)) return heston_stock_constants(*h, t);
    return stein_stock_constants(std::get<SteinSteinParams>(model), t);
}

double log_lti_leading_term(const LtiInputs& inp, double y) {
    if (!(inp.alpha > 0.0)) throw DomainError("lti_leading_term: alpha > 0 required");
    if (!(inp.G2_at_0 > 0.0)) throw DomainError("lti_leading_term: G2(0) > 0 required");
    if (!(y > 0.0)) throw DomainError("lti_leading_term: y > 0 required");
    double g = inp.gamma1 - inp.gamma2;
    return -std::log(2.0 * std::sqrt(pi)) + (0.25 + 0.5 * g) * std::log(inp.alpha) + std::log(inp.G2_at_0) +
           inp.F_tilde_at_0 + (-0.75 - 0.5 * g) * std::log(y) + 2.0 * std::sqrt(inp.alpha * y);
}

double lti_leading_term(const LtiInputs& inp, double y) { return std::exp(log_lti_leading_term(inp, y)); }

double log_mixing_tail_eval(const HestonMixingConstants& k, double y) {
    if (!(y > 0.0)) throw DomainError("mixing_tail_eval: y > 0 required");
    return std::log(k.A) - k.C * y * y + k.B * y + k.y_power * std::log(y);
}

double log_mixing_tail_eval(const SteinMixingConstants& k, double y) {
    if (!(y > 0.0)) throw DomainError("mixing_tail_eval: y > 0 required");
    return std::log(k.E) - k.G * y * y + k.F * y;
}

double mixing_tail_eval(const HestonMixingConstants& k, double y) { return std::exp(log_mixing_tail_eval(k, y)); }
double mixing_tail_eval(const SteinMixingConstants& k, double y) { return std::exp(log_mixing_tail_eval(k, y)); }

double log_stock_tail_eval(const StockTailConstants& k, double x) {
    if (!(x > 1.0)) throw DomainError("stock_tail_eval: x > 1 required");
    double L = std::log(x);
    return std::log(k.c1) - k.c3 * L + k.c2 * std::sqrt(L) + k.log_power * std::log(L);
}

double stock_tail_eval(const StockTailConstants& k, double x) { return std::exp(log_stock_tail_eval(k, x)); }

double log_into_leading_term(const std::function<double(double)>& log_zeta_at, double l, double kappa,
                             double gamma_exp, double w) {
    if (!(kappa > 0.0) || !(w > 0.0)) throw DomainError("into_leading_term: kappa > 0 and w > 0 required");
    if (!(gamma_exp > 0.0 && gamma_exp <= 1.0)) throw DomainError("into_leading_term: gamma in (0, 1] required");
    double y = std::sqrt(w / kappa);
    return 0.5 * std::log(pi) - std::log(2.0 * kappa) + l * l / (16.0 * kappa * kappa) + log_zeta_at(y) + l * y -
           2.0 * kappa * w;
}

double into_leading_term(const std::function<double(double)>& zeta_at, double l, double kappa, double gamma_exp,
                         double w) {
    auto log_zeta = [&](double y) { return std::log(zeta_at(y)); };
    return std::exp(log_into_leading_term(log_zeta, l, kappa, gamma_exp, w));
}

SmileCoeffs smile_coeffs(const StockTailConstants& k, double T) {
    if (!(k.c3 > 2.0)) throw DomainError("smile_coeffs: tail exponent must exceed 2");
    if (!(T > 0.0)) throw DomainError("smile_coeffs: T > 0 required");
    double s1 = std::sqrt(k.c3 - 1.0), s2 = std::sqrt(k.c3 - 2.0);
    SmileCoeffs sc;
    sc.kind = k.kind;
    sc.T = T;
    sc.b1 = std::sqrt(2.0 / T) * (s1 - s2);
    sc.b2 = k.c2 / std::sqrt(2.0 * T) * (1.0 / s2 - 1.0 / s1);
    sc.b3 = k.kind == ModelKind::heston ? (0.25 - k.power_shift) / std::sqrt(2.0 * T) * (1.0 / s1 - 1.0 / s2) : 0.0;
    return sc;
}

double smile_eval(const SmileCoeffs& sc, double k) {
    if (!(k > 1.0)) throw DomainError("smile_eval: k > 1 required");
    double v = sc.b1 * std::sqrt(k) + sc.b2;
    if (sc.kind == ModelKind::heston) v += sc.b3 * std::log(k) / std::sqrt(k);
    return v;
}

std::pair<double, double> moment_window(const StockTailConstants& k) { return {2.0 - k.c3, k.c3 - 1.0}; }

std::pair<double, double> moment_window(const Model& model, double t) { return moment_window(stock_constants(model, t)); }

double lee_psi(double x) { return 2.0 - 4.0 * (std::sqrt(x * x + x) - x); }

}  // namespace svt
