#include "svoltails/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "svoltails/errors.hpp"
#include "svoltails/pricing.hpp"
#include "svoltails/quadrature.hpp"

namespace svt {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& terms) {
    double mx = neg_inf;
    for (double v : terms) mx = std::max(mx, v);
    if (mx == neg_inf) return neg_inf;
    double s = 0.0;
    for (double v : terms) s += std::exp(v - mx);
    return mx + std::log(s);
}

}  // namespace

IntegratedVarianceLaw::IntegratedVarianceLaw(const Model& model, double t, InversionOptions opts)
    : psi_(model, t), t_(t), opts_(opts) {
    if (auto* h = std::get_if<HestonParams>(&model)) {
        if (h->a == 0.0 && h->y0 == 0.0) throw DomainError("heston: a = y0 = 0 gives a point mass at 0");
    }
}

double IntegratedVarianceLaw::dlog_psi(double sigma) const {
    double eps = 1e-7 * (sigma - psi_.domain().re_lower);
    return psi_.log_value(cplx(sigma, eps)).imag() / eps;
}

double IntegratedVarianceLaw::mean() const { return -dlog_psi(0.0); }

// Root of v + dlogPsi(sigma) (- 1/sigma in cdf mode) on the half-line selected by `side`:
// side 0: (pole, inf), side +1: (0, inf), side -1: (pole, 0).
double IntegratedVarianceLaw::saddle_solve(double v, bool cdf_mode, int side) const {
    const double pole = psi_.domain().re_lower;
    auto sigma_of = [&](double u) {
        if (side == 0) return pole + std::exp(u);
        if (side > 0) return std::exp(u);
        return pole / (1.0 + std::exp(u));
    };
    auto g = [&](double u) {
        double s = sigma_of(u);
        double val = v + dlog_psi(s);
        if (cdf_mode) val -= 1.0 / s;
        return val;  // increasing in u for every side
    };
    double u0 = side == 0 ? std::log(-pole) : 0.0;
    double g0 = g(u0);
    if (g0 == 0.0) return sigma_of(u0);
    double step = g0 < 0.0 ? 1.0 : -1.0;
    double ua = u0, ga = g0;
    double ub = u0, gb = g0;
    const double u_floor = std::log(std::abs(pole)) - 32.0;
    for (int it = 0; it < 200; ++it) {
        ub = ua + step;
        if (side == 0 && ub < u_floor) ub = u_floor;
        gb = g(ub);
        if ((gb > 0.0) != (ga > 0.0)) break;
        if (side == 0 && ub == u_floor) throw NumericalError("saddle point too close to the transform pole");
        ua = ub;
        ga = gb;
        step *= 1.6;
    }
    if ((gb > 0.0) == (ga > 0.0)) throw NumericalError("saddle point bracket not found");
    if (ua > ub) {
        std::swap(ua, ub);
        std::swap(ga, gb);
    }
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, ua, ub, ga, gb, boost::math::tools::eps_tolerance<double>(40),
                                               iters);
    return sigma_of(0.5 * (r.first + r.second));
}

double IntegratedVarianceLaw::saddle(double v) const { return saddle_solve(v, false, 0); }

// (1/pi) int_0^inf Re[exp(i xi v + logPsi(sigma + i xi) - logPsi(sigma)) w(xi)] dxi,
// w = 1 or sigma/(sigma + i xi).
double IntegratedVarianceLaw::bromwich(double sigma, double v, bool with_pole, double width) const {
    const GaussRule& rule = gauss_legendre(64);
    const double base = psi_.log_value(sigma).real();
    auto integrand = [&](double xi, double& modulus) {
        cplx lam(sigma, xi);
        cplx e = cplx(0.0, xi * v) + psi_.log_value(lam) - base;
        cplx val = std::exp(e);
        if (with_pole) val *= sigma / lam;
        modulus = std::abs(val);
        return val.real();
    };
    const double osc_cap = v > 0.0 ? 100.0 / v : std::numeric_limits<double>::infinity();

    auto estimate = [&](double scale) {
        double h0 = std::min(2.0 * width, osc_cap) * scale;
        double xi = 0.0;
        double total = 0.0;
        int quiet = 0;
        for (int k = 0; k < opts_.max_panels; ++k) {
            double h = std::min(std::max(h0, 0.25 * scale * xi), osc_cap * scale);
            double half = 0.5 * h, mid = xi + half;
            double sum = 0.0, peak = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                double mod = 0.0;
                sum += rule.weights[i] * integrand(mid + half * rule.nodes[i], mod);
                peak = std::max(peak, mod);
            }
            total += sum * half;
            xi += h;
            if (xi > 6.0 * width && peak < opts_.truncation) {
                if (++quiet >= 2) return total / pi;
            } else {
                quiet = 0;
            }
        }
        throw NumericalError("Bromwich integral did not reach the truncation level");
    };

    double prev = estimate(1.0);
    double scale = 1.0;
    for (int k = 0; k < opts_.max_halvings; ++k) {
        scale *= 0.5;
        double cur = estimate(scale);
        if (std::abs(cur - prev) <= opts_.rel_tolerance * std::abs(cur) + 1e-300) return cur;
        prev = cur;
    }
    throw NumericalError("Bromwich integral: panel halving did not converge");
}

double IntegratedVarianceLaw::log_pdf(double v) const {
    if (!(v > 0.0)) return neg_inf;
    double s = saddle_solve(v, false, 0);
    double h = s * v + psi_.log_value(s).real();
    double d = 1e-4 * std::min(1.0, s - psi_.domain().re_lower);
    double curv = (dlog_psi(s + d) - dlog_psi(s - d)) / (2.0 * d);
    double width = curv > 0.0 ? 1.0 / std::sqrt(curv) : 1.0;
    double integral = bromwich(s, v, false, width);
    if (integral <= 0.0) {
        if (integral > -opts_.rel_tolerance) return neg_inf;
        throw NumericalError("negative density from inversion");
    }
    return h + std::log(integral);
}

double IntegratedVarianceLaw::pdf(double v) const { return std::exp(log_pdf(v)); }

std::pair<double, double> IntegratedVarianceLaw::distribution(double v) const {
    double s_star = saddle_solve(v, false, 0);
    int side = s_star >= 0.0 ? 1 : -1;
    double s = saddle_solve(v, true, side);
    double d = 1e-4 * std::min({1.0, std::abs(s), s - psi_.domain().re_lower});
    double curv = (dlog_psi(s + d) - dlog_psi(s - d)) / (2.0 * d) + 1.0 / (s * s);
    double width = curv > 0.0 ? 1.0 / std::sqrt(curv) : 1.0;
    double integral = bromwich(s, v, true, width);
    double mag = std::exp(s * v + psi_.log_value(s).real()) / std::abs(s);
    double part = std::clamp(mag * integral, 0.0, 1.0);
    if (side > 0) return {part, 1.0 - part};
    return {1.0 - part, part};
}

double IntegratedVarianceLaw::cdf(double v) const {
    if (!(v > 0.0)) return 0.0;
    return distribution(v).first;
}

double IntegratedVarianceLaw::survival(double v) const {
    if (!(v > 0.0)) return 1.0;
    return distribution(v).second;
}

double integrated_variance_density(const Model& model, double t, double v) {
    return IntegratedVarianceLaw(model, t).pdf(v);
}

double log_mixing_density(const IntegratedVarianceLaw& law, double y) {
    if (!(y > 0.0)) return neg_inf;
    double t = law.horizon();
    return std::log(2.0 * t * y) + law.log_pdf(t * y * y);
}

double mixing_density(const Model& model, double t, double y) {
    return std::exp(log_mixing_density(IntegratedVarianceLaw(model, t), y));
}

double mixing_cdf(const IntegratedVarianceLaw& law, double y) {
    if (!(y > 0.0)) return 0.0;
    return law.cdf(law.horizon() * y * y);
}

double log_truncated_moment(const IntegratedVarianceLaw& law, double p, double y_max, int panels) {
    if (!(y_max > 0.0) || panels < 1) throw DomainError("truncated_moment: y_max > 0 and panels >= 1 required");
    const GaussRule& rule = gauss_legendre(16);
    const double t = law.horizon();
    const double h = y_max / panels;
    std::vector<double> terms;
    terms.reserve(std::size_t(panels) * rule.nodes.size());
    for (int k = 0; k < panels; ++k) {
        double mid = (k + 0.5) * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double y = mid + 0.5 * h * rule.nodes[i];
            terms.push_back(std::log(0.5 * h * rule.weights[i]) + log_mixing_density(law, y) +
                            0.5 * p * (p - 1.0) * t * y * y);
        }
    }
    return log_sum_exp(terms);
}

double grid_mass(const std::vector<double>& x, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    return s;
}

DensityGrid mixing_density_grid(const Model& model, double t, const std::vector<double>& ys) {
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (!(ys[i] > ys[i - 1])) throw DomainError("density grid abscissae must be strictly increasing");
    IntegratedVarianceLaw law(model, t);
    DensityGrid g;
    g.abscissae = ys;
    g.values.reserve(ys.size());
    for (double y : ys) g.values.push_back(std::exp(log_mixing_density(law, y)));
    g.total_mass = grid_mass(g.abscissae, g.values);
    return g;
}

MixingTable::MixingTable(const Model& model, double t, MixingTableOptions opts, InversionOptions inv)
    : model_(model), t_(t) {
    IntegratedVarianceLaw law(model, t, inv);
    const double pole = law.transform().domain().re_lower;

    // bulk of V from the distribution function
    const double mean = law.mean();
    double v_lo = mean, v_hi = mean;
    for (int i = 0; i < 200 && law.cdf(v_lo) > 1e-18; ++i) v_lo *= 0.7;
    for (int i = 0; i < 200 && law.survival(v_hi) > 1e-18; ++i) v_hi *= 1.3;
    const double y_lo = std::sqrt(v_lo / t);
    const double y_bulk = std::sqrt(v_hi / t);

    // resolution: spread of alpha_t and the Gaussian width of the tail integrand
    double d = 1e-3 * (-pole);
    cplx lp = law.transform().log_value(cplx(d, 0.0)), lm = law.transform().log_value(cplx(-d, 0.0));
    double var_v = (lp.real() - 2.0 * law.transform().log_value(0.0).real() + lm.real()) / (d * d);
    double sd_alpha = std::sqrt(std::max(var_v, 0.0)) / (2.0 * std::sqrt(t * mean));
    double tail_width = 1.0 / std::sqrt(8.0 * (-t * pole + t / 8.0));
    double base = 0.5 * std::min(sd_alpha > 0.0 ? sd_alpha : tail_width, tail_width);

    const GaussRule& rule = gauss_legendre(opts.nodes_per_panel);
    const double lx = opts.max_abs_log_x;
    double peak = neg_inf;
    double last = neg_inf;
    double y = y_lo;
    for (int k = 0; k < 100000; ++k) {
        double h = std::min(base, std::max(0.1 * y, 1e-3 * base));
        double half = 0.5 * h, mid = y + half;
        double panel_max = neg_inf;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double yi = mid + half * rule.nodes[i];
            double lm_i = log_mixing_density(law, yi);
            y_.push_back(yi);
            w_.push_back(half * rule.weights[i]);
            log_m_.push_back(lm_i);
            double g = lm_i - std::log(yi) - lx * lx / (2.0 * t * yi * yi) - t * yi * yi / 8.0;
            panel_max = std::max(panel_max, g);
        }
        y += h;
        peak = std::max(peak, panel_max);
        bool falling = panel_max < last;
        last = panel_max;
        if (y > y_bulk && falling && panel_max < peak - opts.tail_drop) break;
    }
}

double MixingTable::total_mass() const {
    double s = 0.0;
    for (std::size_t j = 0; j < y_.size(); ++j) s += w_[j] * std::exp(log_m_[j]);
    return s;
}

double MixingTable::log_stock_density(double x) const {
    if (!(x > 0.0)) throw DomainError("stock_density: x > 0 required");
    double L = std::log(x);
    std::vector<double> terms(y_.size());
    for (std::size_t j = 0; j < y_.size(); ++j) {
        double yj = y_[j];
        terms[j] = std::log(w_[j]) + log_m_[j] - std::log(yj) - L * L / (2.0 * t_ * yj * yj) - t_ * yj * yj / 8.0;
    }
    double scale = initial_price(model_) * std::exp(drift(model_) * t_);
    return log_sum_exp(terms) - 1.5 * L - std::log(scale) - 0.5 * std::log(2.0 * pi * t_);
}

double MixingTable::stock_density(double x) const { return std::exp(log_stock_density(x)); }

double MixingTable::forward_call(double forward, double strike) const {
    double s = 0.0;
    double rt = std::sqrt(t_);
    for (std::size_t j = 0; j < y_.size(); ++j) {
        if (log_m_[j] == neg_inf) continue;
        s += w_[j] * std::exp(log_m_[j]) * black_call(forward, strike, y_[j] * rt);
    }
    return s;
}

double MixingTable::forward_put(double forward, double strike) const {
    double s = 0.0;
    double rt = std::sqrt(t_);
    for (std::size_t j = 0; j < y_.size(); ++j) {
        if (log_m_[j] == neg_inf) continue;
        s += w_[j] * std::exp(log_m_[j]) * black_put(forward, strike, y_[j] * rt);
    }
    return s;
}

double stock_density(const Model& model, double t, double x) {
    MixingTableOptions opts;
    if (x > 0.0) opts.max_abs_log_x = std::max(opts.max_abs_log_x, std::abs(std::log(x)) + 1.0);
    return MixingTable(model, t, opts).stock_density(x);
}

double call_price(const MixingTable& table, double rate, double strike) {
    if (!(strike > 0.0)) throw DomainError("call_price: strike > 0 required");
    double T = table.horizon();
    double fwd = initial_price(table.model()) * std::exp(rate * T);
    return std::exp(-rate * T) * table.forward_call(fwd, strike);
}

double put_price(const MixingTable& table, double rate, double strike) {
    if (!(strike > 0.0)) throw DomainError("put_price: strike > 0 required");
    double T = table.horizon();
    double fwd = initial_price(table.model()) * std::exp(rate * T);
    return std::exp(-rate * T) * table.forward_put(fwd, strike);
}

double call_price(const Model& model, double t, double rate, double strike) {
    return call_price(MixingTable(with_drift(model, rate), t), rate, strike);
}

}  // namespace svt
