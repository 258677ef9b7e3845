#include <gtest/gtest.h>

#include <cmath>

#include "svoltails/asymptotics.hpp"
#include "svoltails/densities.hpp"
#include "svoltails/errors.hpp"
#include "svoltails/montecarlo.hpp"
#include "svoltails/pricing.hpp"
#include "svoltails/quadrature.hpp"

using namespace svt;

namespace {

const HestonParams heston_ref{};
const SteinSteinParams stein_ref{};
const HestonParams heston_b0{0, 1, 0, 1, 1, 1};

const MixingTable& heston_table() {
    static const MixingTable table(heston_ref, 1.0);
    return table;
}

const MixingTable& stein_table() {
    static const MixingTable table(stein_ref, 1.0);
    return table;
}

// int_0^hi f by composite 32-point Gauss-Legendre
template <class F>
double quad(F&& f, double lo, double hi, int panels) {
    return integrate_composite(gauss_legendre(32), lo, hi, panels, f);
}

}  // namespace

TEST(Densities, IntegratedVarianceDensityIsNormalized) {
    IntegratedVarianceLaw law(heston_ref, 1.0);
    double mass = quad([&](double v) { return law.pdf(v); }, 0.0, 8.0, 16);
    EXPECT_NEAR(mass, 1.0, 1e-4);
}

TEST(Densities, MeanMatchesTransformDerivative) {
    for (const Model& m : {Model{heston_ref}, Model{stein_ref}}) {
        IntegratedVarianceLaw law(m, 1.0);
        double h = 1e-5;
        double want = -(integrated_laplace(m, 1.0, h) - integrated_laplace(m, 1.0, -h)).real() / (2 * h);
        double hi = std::holds_alternative<HestonParams>(m) ? 8.0 : 1.0;
        double got = quad([&](double v) { return v * law.pdf(v); }, 0.0, hi, 16);
        EXPECT_NEAR(got / want, 1.0, 1e-3);
        EXPECT_NEAR(law.mean() / want, 1.0, 1e-6);
    }
    // Heston: E[int Y] = a t / (-b) + (y0 - a/(-b)) (1 - e^{bt}) / (-b)
    IntegratedVarianceLaw law(heston_ref, 2.0);
    EXPECT_NEAR(law.mean(), 2.0, 1e-8);
}

TEST(Densities, CdfMatchesIntegratedDensity) {
    IntegratedVarianceLaw law(heston_ref, 1.0);
    for (double v : {0.4, 1.0, 2.5}) {
        double want = quad([&](double u) { return law.pdf(u); }, 0.0, v, 8);
        EXPECT_NEAR(law.cdf(v), want, 1e-8) << v;
        EXPECT_NEAR(law.cdf(v) + law.survival(v), 1.0, 1e-12);
    }
    // far tails keep relative accuracy
    double v = 8.0;
    double tail = quad([&](double u) { return law.pdf(u); }, v, 40.0, 32);
    EXPECT_NEAR(law.survival(v) / tail, 1.0, 1e-6);
}

TEST(Densities, MixingDensityIsNormalized) {
    IntegratedVarianceLaw law(heston_ref, 1.0);
    double mass = quad([&](double y) { return std::exp(log_mixing_density(law, y)); }, 0.0, 4.0, 16);
    EXPECT_NEAR(mass, 1.0, 1e-4);
    EXPECT_NEAR(heston_table().total_mass(), 1.0, 1e-6);
    EXPECT_NEAR(stein_table().total_mass(), 1.0, 1e-6);
}

TEST(Densities, SquaredOuReductionPointwise) {
    SteinSteinParams s{0, 0.8, 0.0, 0.45, 0.3, 1};
    IntegratedVarianceLaw ls(s, 1.0), lh(squared_ou_as_cir(s), 1.0);
    for (double y = 0.1; y <= 3.0; y += 0.29) {
        double a = std::exp(log_mixing_density(ls, y)), b = std::exp(log_mixing_density(lh, y));
        EXPECT_NEAR(a, b, 1e-8) << y;
    }
}

TEST(Densities, GridHelper) {
    std::vector<double> ys;
    for (int i = 1; i <= 300; ++i) ys.push_back(0.01 * i);
    DensityGrid g = mixing_density_grid(heston_ref, 1.0, ys);
    EXPECT_EQ(g.values.size(), ys.size());
    EXPECT_NEAR(g.total_mass, 1.0, 1e-3);
    for (double v : g.values) EXPECT_GE(v, 0.0);
    EXPECT_THROW(mixing_density_grid(heston_ref, 1.0, {1.0, 0.5}), DomainError);
}

TEST(Densities, StockDensitySymmetry) {
    for (const MixingTable* t : {&heston_table(), &stein_table()}) {
        for (double x : {1.5, 2.0, 5.0}) {
            double lhs = t->stock_density(1.0 / x);
            double rhs = x * x * x * t->stock_density(x);
            EXPECT_NEAR(lhs / rhs, 1.0, 1e-6) << x;
        }
    }
}

TEST(Densities, StockDensityMassAndMartingale) {
    for (const MixingTable* t : {&heston_table(), &stein_table()}) {
        // in log price L = log x: D(x) x dx = D(e^L) e^L dL
        auto in_log = [&](double p) {
            return quad([&](double L) { return t->stock_density(std::exp(L)) * std::exp((1.0 + p) * L); }, -14.0, 14.0,
                        64);
        };
        EXPECT_NEAR(in_log(0.0), 1.0, 1e-3);
        EXPECT_NEAR(in_log(1.0), 1.0, 1e-3);
    }
}

TEST(Densities, StockDensityFreeFunctionMatchesTable) {
    EXPECT_NEAR(stock_density(heston_ref, 1.0, 1.7) / heston_table().stock_density(1.7), 1.0, 1e-8);
    EXPECT_THROW(heston_table().stock_density(0.0), DomainError);
}

TEST(Densities, PositiveEverywhere) {
    IntegratedVarianceLaw law(stein_ref, 1.0);
    for (double v : {1e-4, 1e-2, 0.1, 1.0, 10.0}) EXPECT_GE(law.pdf(v), 0.0);
    for (double x : {1e-4, 0.5, 1.0, 3.0, 1e4}) EXPECT_GT(heston_table().stock_density(x), 0.0);
}

TEST(Densities, LowerWindowIntegrable) {
    // int_eps^s m_t(y)/y dy settles as eps -> 0
    IntegratedVarianceLaw law(heston_ref, 1.0);
    auto part = [&](double eps) {
        return quad([&](double y) { return std::exp(log_mixing_density(law, y)) / y; }, eps, 1.0, 16);
    };
    double a = part(0.05), b = part(0.01), c = part(0.002);
    EXPECT_LT(std::abs(c - b), 1e-6);
    EXPECT_GE(b, a);
}

TEST(Densities, ZeroDriftTailRatio) {
    IntegratedVarianceLaw law(heston_b0, 1.0);
    HestonMixingConstants k = heston_mixing_constants_b0(heston_b0, 1.0);
    double r8 = std::exp(log_mixing_density(law, 8.0) - log_mixing_tail_eval(k, 8.0));
    double r12 = std::exp(log_mixing_density(law, 12.0) - log_mixing_tail_eval(k, 12.0));
    EXPECT_GT(r8, 0.8);
    EXPECT_LT(r8, 1.2);
    EXPECT_LT(std::abs(r12 - 1.0), std::abs(r8 - 1.0));
}

TEST(Densities, MonteCarloKolmogorovSmirnov) {
    McConfig cfg;
    cfg.paths = 20000;
    cfg.steps = 256;
    for (const Model& m : {Model{heston_ref}, Model{stein_ref}}) {
        IntegratedVarianceLaw law(m, 1.0);
        McSample s = simulate_alpha(m, 1.0, cfg);
        auto [lo, hi] = std::minmax_element(s.draws.begin(), s.draws.end());
        auto cdf = tabulate_cdf([&](double a) { return mixing_cdf(law, a); }, 0.5 * *lo, 1.1 * *hi, 300);
        EXPECT_LT(ks_distance(s, cdf), 0.015);
    }
}

TEST(Densities, TruncatedMomentsFollowTheWindow) {
    IntegratedVarianceLaw law(heston_ref, 1.0);
    double p_hi = moment_window(heston_ref, 1.0).second;
    auto growth = [&](double p) { return log_truncated_moment(law, p, 24.0, 128) - log_truncated_moment(law, p, 12.0, 64); };
    EXPECT_LT(std::abs(growth(p_hi - 0.3)), 1e-6);
    EXPECT_GT(growth(p_hi + 0.3), std::log(1e10));
    // p = 0 is the total mass
    EXPECT_NEAR(std::exp(log_truncated_moment(law, 0.0, 12.0)), 1.0, 1e-8);
}

TEST(Densities, CallPrices) {
    const MixingTable& t = heston_table();
    double rate = 0.0;
    EXPECT_NEAR(call_price(t, rate, 1e-8), 1.0, 1e-3);
    double atm = call_price(t, rate, 1.0), otm = call_price(t, rate, 1.2);
    EXPECT_LT(otm, atm);
    // convex in strike
    for (double k : {0.5, 1.0, 2.0})
        EXPECT_GT(call_price(t, rate, k - 0.1) + call_price(t, rate, k + 0.1), 2.0 * call_price(t, rate, k));
    // direct payoff quadrature against the stock density
    for (double K : {0.8, 1.5}) {
        double direct = quad(
            [&](double L) {
                double x = std::exp(L);
                return std::max(x - K, 0.0) * t.stock_density(x) * x;
            },
            std::log(K), 14.0, 64);
        EXPECT_NEAR(call_price(t, rate, K), direct, 1e-6) << K;
    }
    // put-call parity
    EXPECT_NEAR(call_price(t, rate, 1.3) - put_price(t, rate, 1.3), 1.0 - 1.3, 1e-10);
}

TEST(Densities, CallPriceMatchesMixingMonteCarlo) {
    const double r = 0.03, T = 1.0;
    Model m = with_drift(Model{heston_ref}, r);
    McConfig cfg;
    cfg.paths = 20000;
    cfg.steps = 256;
    McSample s = simulate_alpha(m, T, cfg);
    double fwd = std::exp(r * T), K = 1.5 * fwd;
    Estimate e = s.estimate([&](double a) { return std::exp(-r * T) * black_call(fwd, K, a * std::sqrt(T)); });
    double price = call_price(Model{heston_ref}, T, r, K);
    EXPECT_NEAR(price, e.mean, 3.0 * e.se);
    EXPECT_GE(price, std::max(1.0 - K * std::exp(-r * T), 0.0));
    EXPECT_LE(price, 1.0);
}

TEST(Densities, RejectsDegenerateLaw) {
    EXPECT_THROW(IntegratedVarianceLaw(HestonParams{0, 0, -1, 1, 0, 1}, 1.0), DomainError);
    EXPECT_EQ(integrated_variance_density(heston_ref, 1.0, -1.0), 0.0);
}
