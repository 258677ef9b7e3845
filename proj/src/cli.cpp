#include "svoltails/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "svoltails/asymptotics.hpp"
#include "svoltails/densities.hpp"
#include "svoltails/errors.hpp"
#include "svoltails/montecarlo.hpp"
#include "svoltails/pricing.hpp"

namespace svt {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

struct Row {
    std::string name;
    double value;
};

std::vector<Row> heston_rows(const HestonMixingConstants& k) {
    return {{"r", k.r},         {"u_bt", k.u_bt},       {"lambda0", k.lambda0}, {"eta1", k.eta1},
            {"eta2", k.eta2},   {"rho1", k.rho1},       {"rho2", k.rho2},       {"alpha", k.alpha},
            {"F_tilde0", k.F_tilde0}, {"A", k.A},       {"B", k.B},             {"C", k.C},
            {"y_power", k.y_power}};
}

std::vector<Row> stein_rows(const SteinMixingConstants& k) {
    return {{"r", k.r},
            {"v_qt", k.v_qt},
            {"lambda1", k.lambda1},
            {"zeta1", k.zeta1},
            {"zeta2", k.zeta2},
            {"tau1", k.tau1},
            {"tau2", k.tau2},
            {"alpha2", k.alpha2},
            {"alpha3", k.alpha3},
            {"alpha4", k.alpha4},
            {"alpha5", k.alpha5},
            {"F_tilde2_0", k.Ftilde2_0},
            {"F_tilde3_0", k.Ftilde3_0},
            {"F_tilde4_0", k.Ftilde4_0},
            {"F_tilde5_0", k.Ftilde5_0},
            {"alpha", k.alpha},
            {"F_tilde0", k.F_tilde0},
            {"E", k.E},
            {"F", k.F},
            {"G", k.G}};
}

// Mixing constants of the model, with the test-hook corruption applied.
struct ModelConstants {
    Model model;
    double t;
    std::optional<HestonMixingConstants> heston;
    std::optional<SteinMixingConstants> stein;
    StockTailConstants stock;

    std::vector<Row> mixing_rows() const { return heston ? heston_rows(*heston) : stein_rows(*stein); }
    double log_mixing_tail(double y) const {
        return heston ? log_mixing_tail_eval(*heston, y) : log_mixing_tail_eval(*stein, y);
    }
};

void corrupt(double& field, const std::string& name, const std::string& target, bool& hit) {
    if (name == target) {
        field *= 1.5;
        hit = true;
    }
}

ModelConstants model_constants(const Model& model, double t, const std::string& corrupt_name) {
    ModelConstants mc{model, t, std::nullopt, std::nullopt, {}};
    bool hit = corrupt_name.empty();
    if (auto* h = std::get_if<HestonParams>(&model)) {
        HestonMixingConstants k = h->b == 0.0 ? heston_mixing_constants_b0(*h, t) : heston_mixing_constants(*h, t);
        corrupt(k.A, "A", corrupt_name, hit);
        corrupt(k.B, "B", corrupt_name, hit);
        corrupt(k.C, "C", corrupt_name, hit);
        mc.heston = k;
        mc.stock = heston_stock_constants(*h, t, k);
    } else {
        const auto& s = std::get<SteinSteinParams>(model);
        SteinMixingConstants k = stein_mixing_constants(s, t);
        corrupt(k.E, "E", corrupt_name, hit);
        corrupt(k.F, "F", corrupt_name, hit);
        corrupt(k.G, "G", corrupt_name, hit);
        mc.stein = k;
        mc.stock = stein_stock_constants(s, t, k);
    }
    if (!hit) throw DomainError("corrupt-constant: name must be one of A, B, C (heston) or E, F, G (stein_stein)");
    return mc;
}

void write_header(const RunConfig& cfg, const Model& model, std::ostream& out) {
    out << "# " << version_string << '\n';
    out << "# command=" << cfg.command << " model=" << cfg.model << " t=" << num(cfg.t) << " rate=" << num(cfg.rate)
        << '\n';
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            out << "# mu=" << num(p.mu) << " x0=" << num(p.x0) << " y0=" << num(p.y0);
            if constexpr (std::is_same_v<P, HestonParams>)
                out << " a=" << num(p.a) << " b=" << num(p.b) << " c=" << num(p.c);
            else
                out << " q=" << num(p.q) << " m=" << num(p.m) << " sigma=" << num(p.sigma);
            out << '\n';
        },
        model);
    if (cfg.grid) {
        const GridSpec& g = *cfg.grid;
        out << "# grid-min=" << num(g.min) << " grid-max=" << num(g.max) << " grid-count=" << g.count
            << " grid-spacing=" << (g.spacing == Spacing::log ? "log" : "linear") << '\n';
    }
    out << "# paths=" << cfg.paths << " steps=" << cfg.steps << " seed=" << cfg.seed << '\n';
}

}  // namespace

Model resolve_model(const RunConfig& cfg) {
    if (!(cfg.t > 0.0)) throw DomainError("t > 0 violated");
    if (!(cfg.rate >= 0.0)) throw DomainError("rate >= 0 violated");
    if (cfg.model == "heston") {
        if (cfg.q || cfg.m || cfg.sigma) throw DomainError("heston: q, m, sigma are stein_stein parameters");
        HestonParams p;
        p.mu = cfg.mu.value_or(p.mu);
        p.x0 = cfg.x0.value_or(p.x0);
        p.y0 = cfg.y0.value_or(p.y0);
        p.a = cfg.a.value_or(p.a);
        p.b = cfg.b.value_or(p.b);
        p.c = cfg.c.value_or(p.c);
        validate(p);
        return p;
    }
    if (cfg.model == "stein_stein") {
        if (cfg.a || cfg.b || cfg.c) throw DomainError("stein_stein: a, b, c are heston parameters");
        SteinSteinParams p;
        p.mu = cfg.mu.value_or(p.mu);
        p.x0 = cfg.x0.value_or(p.x0);
        p.y0 = cfg.y0.value_or(p.y0);
        p.q = cfg.q.value_or(p.q);
        p.m = cfg.m.value_or(p.m);
        p.sigma = cfg.sigma.value_or(p.sigma);
        validate(p);
        return p;
    }
    throw DomainError("model must be heston or stein_stein");
}

GridSpec resolve_grid(const RunConfig& cfg) {
    if (cfg.grid) return *cfg.grid;
    GridSpec g;
    if (cfg.command == "smile") {
        g.min = -5.0;
        g.max = 5.0;
        g.count = 11;
    } else if (cfg.command == "density" && cfg.density == "stock") {
        g.min = std::exp(1.0);
        g.max = std::exp(8.0);
        g.count = 8;
        g.spacing = Spacing::log;
    } else {
        g.min = 1.0;
        g.max = 6.0;
        g.count = 11;
    }
    return g;
}

void validate(const RunConfig& cfg) {
    resolve_model(cfg);
    GridSpec g = resolve_grid(cfg);
    if (g.count < 2) throw DomainError("grid count >= 2 violated");
    if (!(g.min < g.max)) throw DomainError("grid min < max violated");
    if (g.spacing == Spacing::log && !(g.min > 0.0)) throw DomainError("log grid: min > 0 violated");
    if (cfg.density != "mixing" && cfg.density != "stock") throw DomainError("density must be mixing or stock");
    if (cfg.command == "density" && !(g.min > 0.0)) throw DomainError("density grid: min > 0 violated");
    McConfig mc;
    mc.paths = cfg.paths;
    mc.steps = cfg.steps;
    validate(mc);
}

std::vector<double> grid_points(const GridSpec& g) {
    std::vector<double> xs(g.count);
    for (int i = 0; i < g.count; ++i) {
        double f = double(i) / (g.count - 1);
        xs[i] = g.spacing == Spacing::log ? std::exp(std::log(g.min) + f * (std::log(g.max) - std::log(g.min)))
                                          : g.min + f * (g.max - g.min);
    }
    xs.back() = g.max;
    return xs;
}

int cmd_constants(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    Model model = resolve_model(cfg);
    ModelConstants mc = model_constants(model, cfg.t, cfg.corrupt_constant);
    write_header(cfg, model, out);
    out << "name,value\n";
    for (const Row& r : mc.mixing_rows()) out << r.name << ',' << num(r.value) << '\n';
    const bool h = mc.heston.has_value();
    const StockTailConstants& s = mc.stock;
    out << (h ? "A1," : "B1,") << num(s.c1) << '\n';
    out << (h ? "A2," : "B2,") << num(s.c2) << '\n';
    out << (h ? "A3," : "B3,") << num(s.c3) << '\n';
    out << "log_power," << num(s.log_power) << '\n';
    SmileCoeffs sc = smile_coeffs(s, cfg.t);
    out << "beta1," << num(sc.b1) << '\n';
    out << "beta2," << num(sc.b2) << '\n';
    out << "beta3," << num(sc.b3) << '\n';
    auto w = moment_window(s);
    out << "p_lo," << num(w.first) << '\n';
    out << "p_hi," << num(w.second) << '\n';
    return 0;
}

int cmd_density(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    Model model = resolve_model(cfg);
    std::vector<double> xs = grid_points(resolve_grid(cfg));
    ModelConstants mc = model_constants(model, cfg.t, cfg.corrupt_constant);
    MixingTableOptions opts;
    if (cfg.density == "stock")
        for (double x : xs) opts.max_abs_log_x = std::max(opts.max_abs_log_x, std::abs(std::log(x)) + 1.0);
    MixingTable table(model, cfg.t, opts);
    IntegratedVarianceLaw law(model, cfg.t);

    write_header(cfg, model, out);
    out << "# density=" << cfg.density << '\n';
    out << "x_or_y,exact,asymptotic,ratio\n";
    for (double x : xs) {
        double log_exact, log_asym = nan_v;
        if (cfg.density == "mixing") {
            log_exact = log_mixing_density(law, x);
            log_asym = mc.log_mixing_tail(x);
        } else {
            log_exact = table.log_stock_density(x);
            if (x > 1.0)
                log_asym = log_stock_tail_eval(mc.stock, x);
            else if (x < 1.0)
                log_asym = -3.0 * std::log(x) + log_stock_tail_eval(mc.stock, 1.0 / x);
        }
        out << num(x) << ',' << num(std::exp(log_exact)) << ',' << num(std::exp(log_asym)) << ','
            << num(std::exp(log_exact - log_asym)) << '\n';
    }
    out << "# total_mass=" << num(table.total_mass()) << '\n';
    return 0;
}

int cmd_smile(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    Model model = resolve_model(cfg);
    std::vector<double> ks = grid_points(resolve_grid(cfg));
    Model priced = with_drift(model, cfg.rate);
    StockTailConstants stc = model_constants(priced, cfg.t, cfg.corrupt_constant).stock;
    SmileCoeffs sc = smile_coeffs(stc, cfg.t);
    std::vector<SmilePoint> pts = model_smile(model, cfg.t, cfg.rate, ks);
    write_header(cfg, model, out);
    out << "k,implied_vol,asymptotic,flagged_tail\n";
    for (const SmilePoint& p : pts) {
        double asym = std::abs(p.log_strike) > 1.0 ? smile_eval(sc, std::abs(p.log_strike)) : nan_v;
        out << num(p.log_strike) << ',' << num(p.implied_vol) << ',' << num(asym) << ',' << (p.flagged_tail ? 1 : 0)
            << '\n';
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    Model model = resolve_model(cfg);
    ModelConstants mc = model_constants(model, cfg.t, cfg.corrupt_constant);
    IntegratedVarianceLaw law(model, cfg.t);

    struct Check {
        std::string name;
        double statistic;
        double threshold;
        bool pass;
    };
    std::vector<Check> checks;

    // Monte Carlo draws of alpha_t against the inverted distribution function
    McConfig mcfg;
    mcfg.paths = cfg.paths;
    mcfg.steps = cfg.steps;
    mcfg.seed = cfg.seed;
    McSample sample = simulate_alpha(model, cfg.t, mcfg);
    auto [lo_it, hi_it] = std::minmax_element(sample.draws.begin(), sample.draws.end());
    auto cdf = tabulate_cdf([&](double a) { return mixing_cdf(law, a); }, 0.5 * *lo_it, 1.1 * *hi_it, 400);
    double ks = ks_distance(sample, cdf);
    double ks_max = cfg.ks_threshold.value_or(std::max(0.01, 2.0 / std::sqrt(double(cfg.paths))));
    checks.push_back({"ks_alpha", ks, ks_max, ks < ks_max});

    // tail constants against the inverted mixing density
    auto [p_lo, p_hi] = moment_window(mc.stock);
    double delta = 0.3 * (p_hi - 0.5) * cfg.t;
    double y_probe = std::sqrt(40.0 / delta);
    double ratio = std::exp(log_mixing_density(law, y_probe) - mc.log_mixing_tail(y_probe));
    checks.push_back({"mixing_tail_ratio", ratio, 2.0, ratio > 0.5 && ratio < 2.0});

    // moment window: E[X^p] settles inside the window and keeps growing outside
    const double p_in = p_hi - 0.3;
    auto log_integrand = [&](double y) { return log_mixing_density(law, y) + 0.5 * p_in * (p_in - 1.0) * cfg.t * y * y; };
    double y_cut = y_probe, top = log_integrand(y_cut), prev = top;
    for (int i = 0; i < 400; ++i) {
        double cur = log_integrand(y_cut + 0.25);
        if (!std::isfinite(cur)) break;
        y_cut += 0.25;
        top = std::max(top, cur);
        if (cur < prev && cur < top - 40.0) break;
        prev = cur;
    }
    auto growth = [&](double p) {
        return log_truncated_moment(law, p, 2.0 * y_cut, 128) - log_truncated_moment(law, p, y_cut, 64);
    };
    double g_in = growth(p_in);
    double g_out = growth(p_hi + 0.3);
    checks.push_back({"moment_inside_converges", std::abs(g_in), 1e-3, std::abs(g_in) < 1e-3});
    checks.push_back({"moment_outside_diverges", g_out, std::log(10.0), g_out > std::log(10.0)});

    write_header(cfg, model, out);
    out << "# p_lo=" << num(p_lo) << " p_hi=" << num(p_hi) << " y_probe=" << num(y_probe) << " y_cut=" << num(y_cut) << '\n';
    out << "check,statistic,threshold,status\n";
    const Check* first_fail = nullptr;
    for (const Check& c : checks) {
        out << c.name << ',' << num(c.statistic) << ',' << num(c.threshold) << ',' << (c.pass ? "pass" : "fail") << '\n';
        if (!c.pass && !first_fail) first_fail = &c;
    }
    if (first_fail) {
        err << "validation failed: " << first_fail->name << '\n';
        return 1;
    }
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Tail asymptotics of uncorrelated stochastic volatility models", "svoltails"};
    app.set_version_flag("--version", version_string);
    app.set_config("--config", "", "key=value configuration file; flags override it");
    app.add_option("command", cfg.command, "constants | density | smile | validate")
        ->required()
        ->check(CLI::IsMember({"constants", "density", "smile", "validate"}));
    app.add_option("--model", cfg.model, "heston | stein_stein");
    app.add_option("--t", cfg.t, "horizon");
    app.add_option("--rate", cfg.rate, "interest rate (pricing drift)");
    app.add_option("--mu", cfg.mu);
    app.add_option("--x0", cfg.x0);
    app.add_option("--y0", cfg.y0);
    app.add_option("--a", cfg.a);
    app.add_option("--b", cfg.b);
    app.add_option("--c", cfg.c);
    app.add_option("--q", cfg.q);
    app.add_option("--m", cfg.m);
    app.add_option("--sigma", cfg.sigma);
    app.add_option("--density", cfg.density, "mixing | stock");
    GridSpec grid;
    std::string spacing = "linear";
    auto* gmin = app.add_option("--grid-min", grid.min);
    auto* gmax = app.add_option("--grid-max", grid.max);
    auto* gcount = app.add_option("--grid-count", grid.count);
    auto* gspace = app.add_option("--grid-spacing", spacing)->check(CLI::IsMember({"linear", "log"}));
    app.add_option("--paths", cfg.paths);
    app.add_option("--steps", cfg.steps);
    app.add_option("--seed", cfg.seed);
    app.add_option("--ks-threshold", cfg.ks_threshold);
    app.add_option("--out", cfg.out, "output CSV (default stdout)");
    app.add_option("--corrupt-constant", cfg.corrupt_constant, "test hook: scale a mixing tail constant by 1.5");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << version_string << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "invalid input: " << e.what() << '\n';
        return 2;
    }
    if (*gmin || *gmax || *gcount || *gspace) {
        GridSpec defaults = resolve_grid(cfg);
        grid.min = *gmin ? grid.min : defaults.min;
        grid.max = *gmax ? grid.max : defaults.max;
        grid.count = *gcount ? grid.count : defaults.count;
        grid.spacing = *gspace ? (spacing == "log" ? Spacing::log : Spacing::linear) : defaults.spacing;
        cfg.grid = grid;
    }

    std::ofstream file;
    std::ostringstream buffer;
    try {
        int code;
        if (cfg.command == "constants")
            code = cmd_constants(cfg, buffer);
        else if (cfg.command == "density")
            code = cmd_density(cfg, buffer);
        else if (cfg.command == "smile")
            code = cmd_smile(cfg, buffer);
        else
            code = cmd_validate(cfg, buffer, err);
        if (cfg.out.empty()) {
            out << buffer.str();
        } else {
            file.open(cfg.out);
            if (!file) {
                err << "invalid input: cannot open output file " << cfg.out << '\n';
                return 2;
            }
            file << buffer.str();
        }
        return code;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const ArbitrageError& e) {
        err << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace svt
