#include "svoltails/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <thread>

#include <boost/math/special_functions/fpclassify.hpp>  // pchip.hpp calls isnan unqualified
#include <boost/math/interpolators/pchip.hpp>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/non_central_chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "svoltails/errors.hpp"

namespace svt {

namespace {

using Engine = boost::random::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Runs body(path, engine) for every path; each path owns its engine, so the
// split across threads cannot change the draws.
template <class Body>
std::vector<double> run_paths(const McConfig& cfg, Body body) {
    std::vector<double> out(cfg.paths);
    unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::uint64_t>(nt, cfg.paths));
    auto work = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            Engine eng(substream_seed(cfg.seed, i));
            out[i] = body(eng);
        }
    };
    if (nt <= 1) {
        work(0, cfg.paths);
        return out;
    }
    std::vector<std::thread> pool;
    std::uint64_t chunk = (cfg.paths + nt - 1) / nt;
    for (unsigned k = 0; k < nt; ++k) {
        std::uint64_t lo = k * chunk, hi = std::min<std::uint64_t>(cfg.paths, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
    return out;
}

double ou_path_alpha(const SteinSteinParams& p, double t, const McConfig& cfg, Engine& eng) {
    boost::random::normal_distribution<double> normal;
    const int n = cfg.steps;
    const double h = t / n;
    double y = p.y0;
    double acc = 0.5 * y * y;
    if (cfg.scheme == Scheme::exact_transition) {
        const double decay = std::exp(-p.q * h);
        const double sd = p.sigma * std::sqrt(-std::expm1(-2.0 * p.q * h) / (2.0 * p.q));
        for (int i = 1; i <= n; ++i) {
            y = decay * y + p.m * (1.0 - decay) + sd * normal(eng);
            acc += (i == n ? 0.5 : 1.0) * y * y;
        }
    } else {
        const double sh = std::sqrt(h);
        for (int i = 1; i <= n; ++i) {
            y += p.q * (p.m - y) * h + p.sigma * sh * normal(eng);
            acc += (i == n ? 0.5 : 1.0) * y * y;
        }
    }
    return std::sqrt(acc * h / t);
}

double cir_path_alpha(const HestonParams& p, double t, const McConfig& cfg, Engine& eng) {
    const int n = cfg.steps;
    const double h = t / n;
    double y = p.y0;
    double acc = 0.5 * y;
    if (cfg.scheme == Scheme::exact_transition) {
        const double c2 = p.c * p.c;
        const double growth = std::exp(p.b * h);
        const double scale = p.b == 0.0 ? 0.25 * c2 * h : 0.25 * c2 * std::expm1(p.b * h) / p.b;
        const double dof = 4.0 * p.a / c2;
        if (dof > 1.0) {
            // chi^2_{dof-1} + (Z + sqrt(nc))^2
            std::chi_squared_distribution<double> central(dof - 1.0);
            boost::random::normal_distribution<double> normal;
            for (int i = 1; i <= n; ++i) {
                double z = normal(eng) + std::sqrt(y * growth / scale);
                y = scale * (central(eng) + z * z);
                acc += (i == n ? 0.5 : 1.0) * y;
            }
        } else {
            for (int i = 1; i <= n; ++i) {
                double nc = y * growth / scale;
                if (dof == 0.0 && nc == 0.0) {
                    y = 0.0;
                } else {
                    boost::random::non_central_chi_squared_distribution<double> ncx2(dof, nc);
                    y = scale * ncx2(eng);
                }
                acc += (i == n ? 0.5 : 1.0) * y;
            }
        }
    } else {
        boost::random::normal_distribution<double> normal;
        const double sh = std::sqrt(h);
        for (int i = 1; i <= n; ++i) {
            double yp = std::max(y, 0.0);
            y += (p.a + p.b * yp) * h + p.c * std::sqrt(yp) * sh * normal(eng);
            acc += (i == n ? 0.5 : 1.0) * std::max(y, 0.0);
        }
    }
    return std::sqrt(std::max(acc, 0.0) * h / t);
}

}  // namespace

void validate(const McConfig& cfg) {
    if (cfg.paths < 1) throw DomainError("mc: paths >= 1 required");
    if (cfg.steps < 2) throw DomainError("mc: steps >= 2 required");
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t path) {
    return splitmix64(splitmix64(seed) ^ splitmix64(path + 0x632be59bd9b4e019ULL));
}

Estimate McSample::estimate(const std::function<double(double)>& payoff) const {
    const std::size_t n = draws.size();
    if (n == 0) throw DomainError("estimate: empty sample");
    const std::size_t nb = std::min<std::size_t>(32, n);
    std::vector<double> means(nb, 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        std::size_t lo = b * n / nb, hi = (b + 1) * n / nb;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += payoff(draws[i]);
        total += s;
        means[b] = s / double(hi - lo);
    }
    double mean = total / double(n);
    if (nb < 2) return {mean, std::numeric_limits<double>::infinity()};
    double bm = 0.0;
    for (double m : means) bm += m;
    bm /= double(nb);
    double var = 0.0;
    for (double m : means) var += (m - bm) * (m - bm);
    var /= double(nb - 1);
    return {mean, std::sqrt(var / double(nb))};
}

McSample simulate_ou_alpha(const SteinSteinParams& p, double t, const McConfig& cfg) {
    validate(p);
    validate_horizon(t);
    validate(cfg);
    McSample s;
    s.config_echo = cfg;
    s.draws = run_paths(cfg, [&](Engine& eng) { return ou_path_alpha(p, t, cfg, eng); });
    return s;
}

McSample simulate_cir_alpha(const HestonParams& p, double t, const McConfig& cfg) {
    validate(p);
    validate_horizon(t);
    validate(cfg);
    McSample s;
    s.config_echo = cfg;
    s.draws = run_paths(cfg, [&](Engine& eng) { return cir_path_alpha(p, t, cfg, eng); });
    return s;
}

McSample simulate_alpha(const Model& model, double t, const McConfig& cfg) {
    if (auto* h = std::get_if<HestonParams>(&model)) return simulate_cir_alpha(*h, t, cfg);
    return simulate_ou_alpha(std::get<SteinSteinParams>(model), t, cfg);
}

McSample simulate_stock(const Model& model, double t, const McConfig& cfg) {
    validate(model);
    validate_horizon(t);
    validate(cfg);
    const double fwd = initial_price(model) * std::exp(drift(model) * t);
    const double st = std::sqrt(t);
    McSample s;
    s.config_echo = cfg;
    s.draws = run_paths(cfg, [&](Engine& eng) {
        double alpha;
        if (auto* h = std::get_if<HestonParams>(&model))
            alpha = cir_path_alpha(*h, t, cfg, eng);
        else
            alpha = ou_path_alpha(std::get<SteinSteinParams>(model), t, cfg, eng);
        boost::random::normal_distribution<double> normal;
        return fwd * std::exp(-0.5 * t * alpha * alpha + st * alpha * normal(eng));
    });
    return s;
}

double ks_distance(std::vector<double> draws, const std::function<double(double)>& cdf) {
    if (draws.empty()) throw DomainError("ks_distance: empty sample");
    std::sort(draws.begin(), draws.end());
    const double n = double(draws.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < draws.size()) {
        std::size_t j = i;
        while (j < draws.size() && draws[j] == draws[i]) ++j;
        double x = draws[i];
        double below = double(i) / n;  // empirical CDF just left of x
        double at = double(j) / n;     // empirical CDF at x
        d = std::max(d, std::abs(at - cdf(x)));
        d = std::max(d, std::abs(below - cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()))));
        i = j;
    }
    return d;
}

std::function<double(double)> tabulate_cdf(const std::function<double(double)>& cdf, double lo, double hi, int n) {
    if (!(lo < hi) || n < 4) throw DomainError("tabulate_cdf: lo < hi and n >= 4 required");
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * i / (n - 1);
        fs[i] = std::clamp(cdf(xs[i]), 0.0, 1.0);
        if (i > 0) fs[i] = std::max(fs[i], fs[i - 1]);
    }
    const double f_lo = fs.front(), f_hi = fs.back();
    auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(xs), std::move(fs));
    return [spline, lo, hi, f_lo, f_hi](double x) {
        if (x <= lo) return f_lo;
        if (x >= hi) return f_hi;
        return std::clamp((*spline)(x), 0.0, 1.0);
    };
}

double ks_distance(const McSample& sample, const std::function<double(double)>& cdf) {
    return ks_distance(sample.draws, cdf);
}

}  // namespace svt
