#pragma once

#include <functional>
#include <utility>

#include "svoltails/params.hpp"

namespace svt {

enum class ModelKind { heston, stein_stein };

struct HestonMixingConstants {
    double r;        // r_{t|b|/2}
    double u_bt;     // -4 r^2 / t^2
    double lambda0;
    double eta1, eta2;
    double rho1, rho2;
    double alpha;
    double F_tilde0;
    double A, B, C;
    double y_power;  // -1/2 + 2a/c^2
};

struct SteinMixingConstants {
    double r;        // r_{qt}
    double v_qt;     // -r^2 / t^2
    double lambda1;
    double zeta1, zeta2;
    double tau1, tau2;
    double alpha2, alpha3, alpha4, alpha5;
    double Ftilde2_0, Ftilde3_0, Ftilde4_0, Ftilde5_0;
    double alpha;
    double F_tilde0;
    double E, F, G;
};

struct StockTailConstants {
    ModelKind kind;
    double c1, c2, c3;
    double k;            // sqrt(C + t/8) or sqrt(G + t/8)
    double l;            // B or F
    double power_shift;  // a/c^2 for Heston, 0 for Stein-Stein
    double log_power;    // exponent of log x: -3/4 + a/c^2 or -1/2
};

struct SmileCoeffs {
    ModelKind kind;
    double b1, b2, b3;
    double T;
};

struct LtiInputs {
    double alpha;
    double gamma1;
    double gamma2;
    double G2_at_0;
    double F_tilde_at_0;
};

HestonMixingConstants heston_mixing_constants(const HestonParams& p, double t);
HestonMixingConstants heston_mixing_constants_b0(const HestonParams& p, double t);
SteinMixingConstants stein_mixing_constants(const SteinSteinParams& p, double t);

// Inputs of the generic Laplace-inversion leading term for the rescaled Heston transform.
LtiInputs heston_lti_inputs(const HestonParams& p, double t, const HestonMixingConstants& k);

StockTailConstants heston_stock_constants(const HestonParams& p, double t);
StockTailConstants stein_stock_constants(const SteinSteinParams& p, double t);
// Stock constants assembled from given mixing constants.
StockTailConstants heston_stock_constants(const HestonParams& p, double t, const HestonMixingConstants& m);
StockTailConstants stein_stock_constants(const SteinSteinParams& p, double t, const SteinMixingConstants& m);
StockTailConstants stock_constants(const Model& model, double t);

double log_lti_leading_term(const LtiInputs& inp, double y);
double lti_leading_term(const LtiInputs& inp, double y);

double log_mixing_tail_eval(const HestonMixingConstants& k, double y);
double log_mixing_tail_eval(const SteinMixingConstants& k, double y);
double mixing_tail_eval(const HestonMixingConstants& k, double y);
double mixing_tail_eval(const SteinMixingConstants& k, double y);

double log_stock_tail_eval(const StockTailConstants& k, double x);
double stock_tail_eval(const StockTailConstants& k, double x);

double log_into_leading_term(const std::function<double(double)>& log_zeta_at, double l, double kappa,
                             double gamma_exp, double w);
double into_leading_term(const std::function<double(double)>& zeta_at, double l, double kappa, double gamma_exp,
                         double w);

SmileCoeffs smile_coeffs(const StockTailConstants& k, double T);
double smile_eval(const SmileCoeffs& sc, double k);

// Exponents p with E[X_t^p] finite: (2 - c3, c3 - 1).
std::pair<double, double> moment_window(const Model& model, double t);
std::pair<double, double> moment_window(const StockTailConstants& k);

// psi(x) = 2 - 4(sqrt(x^2 + x) - x)
double lee_psi(double x);

}  // namespace svt
