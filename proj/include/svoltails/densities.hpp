#pragma once

#include <utility>
#include <vector>

#include "svoltails/params.hpp"
#include "svoltails/transforms.hpp"

namespace svt {

struct InversionOptions {
    double rel_tolerance = 1e-10;  // panel-halving agreement, relative to the integral
    double truncation = 1e-13;     // integrand level (relative to its value at the saddle) where the tail is cut
    int max_halvings = 6;
    int max_panels = 20000;
};

// Density and distribution of the integrated variance V = int_0^t Y ds (Heston)
// or int_0^t Y^2 ds (Stein-Stein), by Bromwich inversion through the saddle point.
class IntegratedVarianceLaw {
public:
    IntegratedVarianceLaw(const Model& model, double t, InversionOptions opts = {});

    double log_pdf(double v) const;
    double pdf(double v) const;
    double cdf(double v) const;
    double survival(double v) const;
    double mean() const;

    // Real saddle point of sigma*v + log Psi(sigma).
    double saddle(double v) const;

    const LaplaceTransform& transform() const { return psi_; }
    double horizon() const { return t_; }

private:
    double dlog_psi(double sigma) const;
    double bromwich(double sigma, double v, bool with_pole, double width) const;
    double saddle_solve(double v, bool cdf_mode, int side) const;
    std::pair<double, double> distribution(double v) const;

    LaplaceTransform psi_;
    double t_;
    InversionOptions opts_;
};

struct DensityGrid {
    std::vector<double> abscissae;
    std::vector<double> values;
    double abs_tolerance = 1e-8;
    double total_mass = 0.0;
};

double integrated_variance_density(const Model& model, double t, double v);
double mixing_density(const Model& model, double t, double y);
double log_mixing_density(const IntegratedVarianceLaw& law, double y);
double mixing_cdf(const IntegratedVarianceLaw& law, double y);

// log int_0^{y_max} m_t(y) exp(p(p-1) t y^2 / 2) dy, i.e. log E[X_t^p; alpha_t <= y_max] / (x0 e^{mu t})^p.
double log_truncated_moment(const IntegratedVarianceLaw& law, double p, double y_max, int panels = 64);

// Trapezoid mass over the abscissae.
double grid_mass(const std::vector<double>& x, const std::vector<double>& f);

DensityGrid mixing_density_grid(const Model& model, double t, const std::vector<double>& ys);

struct MixingTableOptions {
    double max_abs_log_x = 12.0;  // |log x| range the table must resolve for D_t
    int nodes_per_panel = 16;
    double tail_drop = 60.0;      // log-units below the peak where integrand support ends
};

// m_t sampled on composite Gauss-Legendre nodes in y; weights include the panel scaling.
class MixingTable {
public:
    MixingTable(const Model& model, double t, MixingTableOptions opts = {}, InversionOptions inv = {});

    const std::vector<double>& nodes() const { return y_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& log_density() const { return log_m_; }
    double total_mass() const;
    double horizon() const { return t_; }
    const Model& model() const { return model_; }

    // log D_t(x0 e^{mu t} x), x the moneyness ratio.
    double log_stock_density(double x) const;
    double stock_density(double x) const;

    // Undiscounted E[(X_T - K)^+] and E[(K - X_T)^+] for forward F = x0 e^{rT}.
    double forward_call(double forward, double strike) const;
    double forward_put(double forward, double strike) const;

private:
    Model model_;
    double t_;
    std::vector<double> y_, w_, log_m_;
};

// D_t(x0 e^{mu t} x): density in absolute price, evaluated at moneyness ratio x.
double stock_density(const Model& model, double t, double x);

// e^{-rT} E[(X_T - K)^+] under drift mu = rate.
double call_price(const Model& model, double t, double rate, double strike);
double call_price(const MixingTable& table, double rate, double strike);
double put_price(const MixingTable& table, double rate, double strike);

}  // namespace svt
