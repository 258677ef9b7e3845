#include "svoltails/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svoltails/asymptotics.hpp"
#include "svoltails/densities.hpp"
#include "svoltails/errors.hpp"
#include "svoltails/quadrature.hpp"

namespace svt {

namespace {

constexpr double vol_lo = 1e-6;
constexpr double vol_hi = 5.0;

// log N(x), usable far into the left tail.
double log_norm_cdf(double x) {
    if (x > -30.0) return std::log(norm_cdf(x));
    double x2 = x * x;
    double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2) + 105.0 / (x2 * x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double log_black_call(double forward, double strike, double s) {
    double d1 = (std::log(forward / strike) + 0.5 * s * s) / s;
    double a = log_norm_cdf(d1);
    double b = log_norm_cdf(d1 - s);
    return std::log(forward) + a + std::log1p(-strike / forward * std::exp(b - a));
}

// Bisection to width 1e-6, then safeguarded Newton on price(vol) = target.
template <class Price, class Vega>
double solve_vol(Price&& price, Vega&& vega, double target, double tol_abs) {
    double lo = vol_lo, hi = vol_hi;
    if (price(hi) < target) throw NumericalError("implied vol above the solver ceiling of 5");
    if (price(lo) > target) return lo;
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        if (price(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        double diff = price(v) - target;
        if (std::abs(diff) <= tol_abs && std::abs(diff) <= 1e-12 * target) break;
        double g = vega(v);
        double next = g > 0.0 ? v - diff / g : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (diff > 0.0)
            hi = v;
        else
            lo = v;
        if (std::abs(next - v) <= 1e-15 * v) {
            v = next;
            break;
        }
        v = next;
    }
    return v;
}

double log_vol_from_log_price(double forward, double strike, double sqrt_t, double log_target) {
    double lo = vol_lo, hi = vol_hi;
    if (log_black_call(forward, strike, hi * sqrt_t) < log_target)
        throw NumericalError("implied vol above the solver ceiling of 5");
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        if (log_black_call(forward, strike, mid * sqrt_t) < log_target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// log of the undiscounted tail call F^2 int_{e^k}^inf (x - e^k) D(F x) dx from the tail asymptotics.
double log_tail_forward_call(const StockTailConstants& tc, double forward, double k) {
    const GaussRule& rule = gauss_legendre(32);
    double rate = tc.c3 - 2.0;
    double span = 80.0 / rate;
    int panels = 64;
    std::vector<double> terms;
    double h = span / panels;
    for (int p = 0; p < panels; ++p) {
        double a = p * h, b = a + h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double s = 0.5 * (a + b) + 0.5 * h * rule.nodes[i];
            if (s <= 0.0) continue;
            double lx = k + s;
            // (x - e^k) x dx with x = e^{k+s}, dx = x ds
            double log_payoff = k + std::log(std::expm1(s));
            terms.push_back(std::log(0.5 * h * rule.weights[i]) + log_payoff + lx +
                            log_stock_tail_eval(tc, std::exp(lx)));
        }
    }
    double mx = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double v : terms) sum += std::exp(v - mx);
    return 2.0 * std::log(forward) + mx + std::log(sum);
}

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double black_call(double forward, double strike, double s) {
    if (s <= 0.0) return std::max(forward - strike, 0.0);
    double d1 = (std::log(forward / strike) + 0.5 * s * s) / s;
    return forward * norm_cdf(d1) - strike * norm_cdf(d1 - s);
}

double black_put(double forward, double strike, double s) {
    if (s <= 0.0) return std::max(strike - forward, 0.0);
    double d1 = (std::log(forward / strike) + 0.5 * s * s) / s;
    return strike * norm_cdf(s - d1) - forward * norm_cdf(-d1);
}

double bs_call(const OptionSpec& spec, double vol) {
    double df = std::exp(-spec.rate * spec.expiry);
    return df * black_call(spec.spot / df, spec.strike, vol * std::sqrt(spec.expiry));
}

double bs_put(const OptionSpec& spec, double vol) {
    double df = std::exp(-spec.rate * spec.expiry);
    return df * black_put(spec.spot / df, spec.strike, vol * std::sqrt(spec.expiry));
}

double bs_vega(const OptionSpec& spec, double vol) {
    double df = std::exp(-spec.rate * spec.expiry);
    double s = vol * std::sqrt(spec.expiry);
    double d1 = (std::log(spec.spot / (df * spec.strike)) + 0.5 * s * s) / s;
    return spec.spot * norm_pdf(d1) * std::sqrt(spec.expiry);
}

static void check_spec(const OptionSpec& spec) {
    if (!(spec.spot > 0.0 && spec.strike > 0.0 && spec.rate >= 0.0 && spec.expiry > 0.0))
        throw DomainError("option spec: spot, strike, expiry > 0 and rate >= 0 required");
}

double implied_vol(const OptionSpec& spec, double price) {
    check_spec(spec);
    double lower = std::max(spec.spot - spec.strike * std::exp(-spec.rate * spec.expiry), 0.0);
    if (!(price > lower && price < spec.spot)) throw ArbitrageError("call price outside the no-arbitrage band");
    return solve_vol([&](double v) { return bs_call(spec, v); }, [&](double v) { return bs_vega(spec, v); }, price,
                     1e-12 * spec.spot);
}

static double implied_vol_put(const OptionSpec& spec, double price) {
    double kd = spec.strike * std::exp(-spec.rate * spec.expiry);
    double lower = std::max(kd - spec.spot, 0.0);
    if (!(price > lower && price < kd)) throw ArbitrageError("put price outside the no-arbitrage band");
    return solve_vol([&](double v) { return bs_put(spec, v); }, [&](double v) { return bs_vega(spec, v); }, price,
                     1e-12 * spec.spot);
}

std::vector<SmilePoint> model_smile(const MixingTable& table, double rate, const std::vector<double>& k_grid) {
    const double T = table.horizon();
    const double x0 = initial_price(table.model());
    const double fwd = x0 * std::exp(rate * T);
    const double tiny = 1e-250 * x0;
    std::vector<SmilePoint> out;
    out.reserve(k_grid.size());
    for (double k : k_grid) {
        OptionSpec spec{x0, fwd * std::exp(k), rate, T};
        SmilePoint pt{k, 0.0, false};
        if (k >= 0.0) {
            double c = call_price(table, rate, spec.strike);
            if (k > 6.0 && !(c > tiny)) {
                StockTailConstants tc = stock_constants(with_drift(table.model(), rate), T);
                double log_c = log_tail_forward_call(tc, fwd, k);
                pt.implied_vol = log_vol_from_log_price(fwd, spec.strike, std::sqrt(T), log_c);
                pt.flagged_tail = true;
            } else {
                pt.implied_vol = implied_vol(spec, c);
            }
        } else {
            pt.implied_vol = implied_vol_put(spec, put_price(table, rate, spec.strike));
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<SmilePoint> model_smile(const Model& model, double T, double rate, const std::vector<double>& k_grid) {
    double kmax = 0.0;
    for (double k : k_grid) kmax = std::max(kmax, std::abs(k));
    MixingTableOptions opts;
    opts.max_abs_log_x = std::max(opts.max_abs_log_x, kmax + 1.0);
    MixingTable table(with_drift(model, rate), T, opts);
    return model_smile(table, rate, k_grid);
}

}  // namespace svt
