#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "svoltails/densities.hpp"
#include "svoltails/errors.hpp"
#include "svoltails/montecarlo.hpp"
#include "svoltails/quadrature.hpp"
#include "svoltails/transforms.hpp"

using namespace svt;

namespace {

const HestonParams heston_ref{};
const SteinSteinParams stein_ref{};

McConfig small(std::uint64_t paths = 20000, int steps = 128) {
    McConfig cfg;
    cfg.paths = paths;
    cfg.steps = steps;
    return cfg;
}

template <class F>
double quad(F&& f, double lo, double hi) {
    return integrate_composite(gauss_legendre(32), lo, hi, 4, f);
}

// E[int_0^t Y ds] and E[(int_0^t Y ds)^2] from derivatives of the transform at 0
std::pair<double, double> integrated_moments(const Model& m, double t) {
    double h = 1e-3;
    auto f = [&](double l) { return integrated_laplace(m, t, l).real(); };
    double m1 = -(8 * (f(h / 2) - f(-h / 2)) - (f(h) - f(-h))) / (6 * h);
    double m2 = (16 * (f(h / 2) - 2 * f(0) + f(-h / 2)) / (h * h / 4) - (f(h) - 2 * f(0) + f(-h)) / (h * h)) / 15;
    return {m1, m2};
}

}  // namespace

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    McConfig a = small(3001, 16), b = a;
    a.threads = 1;
    b.threads = 3;
    for (const Model& m : {Model{heston_ref}, Model{stein_ref}}) {
        EXPECT_EQ(simulate_alpha(m, 1.0, a).draws, simulate_alpha(m, 1.0, b).draws);
        EXPECT_EQ(simulate_stock(m, 1.0, a).draws, simulate_stock(m, 1.0, b).draws);
    }
    McConfig c = a;
    c.seed = 43;
    EXPECT_NE(simulate_alpha(Model{heston_ref}, 1.0, a).draws, simulate_alpha(Model{heston_ref}, 1.0, c).draws);
}

TEST(MonteCarlo, PathPrefixIsStable) {
    McConfig a = small(500, 16), b = small(1000, 16);
    auto da = simulate_alpha(Model{stein_ref}, 1.0, a).draws;
    auto db = simulate_alpha(Model{stein_ref}, 1.0, b).draws;
    EXPECT_TRUE(std::equal(da.begin(), da.end(), db.begin()));
}

TEST(MonteCarlo, SubstreamSeedsDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(substream_seed(42, i));
    EXPECT_EQ(seen.size(), 10000u);
    EXPECT_NE(substream_seed(42, 0), substream_seed(43, 0));
}

TEST(MonteCarlo, IntegratedVarianceMoments) {
    const double t = 1.0;
    for (const Model& m : {Model{heston_ref}, Model{stein_ref}, Model{SteinSteinParams{0, 2.0, 0.0, 0.5, 0.3, 1}}}) {
        McSample s = simulate_alpha(m, t, small());
        auto [m1, m2] = integrated_moments(m, t);
        Estimate e1 = s.estimate([&](double a) { return a * a * t; });
        Estimate e2 = s.estimate([&](double a) { return std::pow(a * a * t, 2); });
        EXPECT_NEAR(e1.mean, m1, 4 * e1.se + 1e-4 * m1);
        EXPECT_NEAR(e2.mean, m2, 4 * e2.se + 1e-4 * m2);
        for (double a : s.draws) ASSERT_GE(a, 0.0);
    }
}

TEST(MonteCarlo, OuMeanClosedForm) {
    // E[int Y^2] = int (m + (y0 - m) e^{-qs})^2 + sigma^2 (1 - e^{-2qs}) / (2q) ds
    const SteinSteinParams p{0, 1.5, 0.3, 0.4, 0.1, 1};
    const double t = 2.0;
    double want = quad(
        [&](double s) {
            double mu = p.m + (p.y0 - p.m) * std::exp(-p.q * s);
            return mu * mu + p.sigma * p.sigma * (1 - std::exp(-2 * p.q * s)) / (2 * p.q);
        },
        0.0, t);
    Estimate e = simulate_ou_alpha(p, t, small()).estimate([&](double a) { return a * a * t; });
    EXPECT_NEAR(e.mean, want, 4 * e.se);
}

TEST(MonteCarlo, EulerSchemeAgreesInMean) {
    McConfig cfg = small(20000, 512);
    cfg.scheme = Scheme::euler_full_truncation;
    const double t = 1.0;
    for (const Model& m : {Model{heston_ref}, Model{stein_ref}}) {
        Estimate e = simulate_alpha(m, t, cfg).estimate([&](double a) { return a * a * t; });
        double m1 = integrated_moments(m, t).first;
        EXPECT_NEAR(e.mean, m1, 4 * e.se + 5e-3 * m1);
    }
}

TEST(MonteCarlo, StockIsMartingale) {
    for (Model m : {Model{HestonParams{0.05, 1, -1, 1, 1, 2}}, Model{stein_ref}}) {
        const double t = 1.5;
        McSample s = simulate_stock(m, t, small());
        Estimate e = s.estimate([](double x) { return x; });
        EXPECT_NEAR(e.mean, initial_price(m) * std::exp(drift(m) * t), 4 * e.se);
        for (double x : s.draws) ASSERT_GT(x, 0.0);
    }
}

TEST(MonteCarlo, BatchStandardError) {
    std::vector<double> u(64000);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::fmod(0.6180339887498949 * double(i), 1.0);
    McSample s{u, {}};
    Estimate e = s.estimate([](double x) { return x; });
    EXPECT_NEAR(e.mean, 0.5, 1e-4);
    // low-discrepancy input: batch means nearly identical
    EXPECT_LT(e.se, 1e-4);

    McSample r = simulate_alpha(Model{stein_ref}, 1.0, small(32000, 32));
    double mean = 0, sq = 0;
    for (double a : r.draws) mean += a;
    mean /= double(r.draws.size());
    for (double a : r.draws) sq += (a - mean) * (a - mean);
    double naive = std::sqrt(sq / double(r.draws.size() - 1) / double(r.draws.size()));
    double se = r.estimator_se([](double a) { return a; });
    EXPECT_GT(se, 0.6 * naive);
    EXPECT_LT(se, 1.4 * naive);
}

TEST(MonteCarlo, KolmogorovSmirnovEdgeCases) {
    std::vector<double> point(100, 1.0);
    EXPECT_EQ(ks_distance(point, [](double x) { return x >= 1.0 ? 1.0 : 0.0; }), 0.0);
    EXPECT_NEAR(ks_distance(point, [](double x) { return x >= 1.0 ? 0.5 : 0.0; }), 0.5, 1e-15);

    std::vector<double> unif;
    for (int i = 1; i <= 10000; ++i) unif.push_back((i - 0.5) / 10000);
    auto sq = [](double x) { return std::clamp(x, 0.0, 1.0) * std::clamp(x, 0.0, 1.0); };
    EXPECT_NEAR(ks_distance(unif, sq), 0.25, 1e-4);
    EXPECT_LT(ks_distance(unif, [](double x) { return std::clamp(x, 0.0, 1.0); }), 1e-4 + 1e-12);
    EXPECT_THROW(ks_distance(std::vector<double>{}, sq), DomainError);
}

TEST(MonteCarlo, TabulatedCdf) {
    auto cdf = [](double x) { return 1.0 - std::exp(-x); };
    auto tab = tabulate_cdf(cdf, 0.0, 10.0, 400);
    for (double x : {0.013, 0.5, 2.7, 9.9}) EXPECT_NEAR(tab(x), cdf(x), 1e-4);
    EXPECT_EQ(tab(-1.0), 0.0);
    EXPECT_EQ(tab(20.0), cdf(10.0));
    double prev = -1;
    for (double x = 0; x <= 10; x += 0.01) {
        EXPECT_GE(tab(x), prev);
        prev = tab(x);
    }
    EXPECT_THROW(tabulate_cdf(cdf, 1.0, 0.0, 100), DomainError);
}

TEST(MonteCarlo, ConfigValidation) {
    McConfig c = small();
    c.paths = 0;
    EXPECT_THROW(validate(c), DomainError);
    c = small();
    c.steps = 1;
    EXPECT_THROW(simulate_alpha(Model{heston_ref}, 1.0, c), DomainError);
    EXPECT_THROW(simulate_alpha(Model{heston_ref}, -1.0, small()), DomainError);
    EXPECT_EQ(simulate_alpha(Model{heston_ref}, 1.0, small(10, 4)).config_echo.paths, 10u);
}

TEST(MonteCarlo, DeterministicLimits) {
    // sigma -> 0 with m = y0: Y stays at y0
    SteinSteinParams s{0, 1.3, 0.4, 1e-12, 0.4, 1};
    for (double a : simulate_ou_alpha(s, 1.0, small(200, 64)).draws) ASSERT_NEAR(a, 0.4, 1e-9);
    // c -> 0: Y = -a/b + (y0 + a/b) e^{bt}
    HestonParams h{0, 0.5, -2.0, 1e-10, 1.5, 1};
    const double t = 1.2;
    double want = -h.a / h.b * t + (h.y0 + h.a / h.b) * std::expm1(h.b * t) / h.b;
    McConfig cfg = small(200, 1024);
    for (double a : simulate_cir_alpha(h, t, cfg).draws) ASSERT_NEAR(a * a * t, want, 1e-6 * want);
}

TEST(MonteCarlo, StockTailProbability) {
    const MixingTable table(heston_ref, 1.0);
    double x = 5.0;
    double p = integrate_composite(gauss_legendre(32), std::log(x), 14.0, 32, [&](double L) {
        double u = std::exp(L);
        return table.stock_density(u) * u;
    });
    McSample s = simulate_stock(Model{heston_ref}, 1.0, small(40000, 128));
    Estimate e = s.estimate([&](double v) { return v > x ? 1.0 : 0.0; });
    EXPECT_NEAR(e.mean, p, 3 * e.se + 1e-4);
}

TEST(MonteCarlo, KolmogorovSmirnovNullSample) {
    // inverse-transform sample of an exponential law
    const std::size_t n = 100000;
    std::vector<double> draws(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t z = substream_seed(42, i);
        double u = (double(z >> 11) + 0.5) * 0x1.0p-53;
        draws[i] = -std::log1p(-u);
    }
    double d = ks_distance(draws, [](double v) { return v <= 0 ? 0.0 : -std::expm1(-v); });
    EXPECT_LT(d, 1.63 / std::sqrt(double(n)));
}
