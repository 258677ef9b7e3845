#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "svoltails/params.hpp"

namespace svt {

enum class Scheme { exact_transition, euler_full_truncation };

struct McConfig {
    std::uint64_t paths = 100000;
    int steps = 1024;
    std::uint64_t seed = 42;
    Scheme scheme = Scheme::exact_transition;
    unsigned threads = 0;  // 0: hardware concurrency; results do not depend on it
};

struct Estimate {
    double mean;
    double se;
};

struct McSample {
    std::vector<double> draws;
    McConfig config_echo;

    // Batch-means (32 batches) estimate of E[payoff(draw)].
    Estimate estimate(const std::function<double(double)>& payoff) const;
    double estimator_se(const std::function<double(double)>& payoff) const { return estimate(payoff).se; }
};

void validate(const McConfig& cfg);

// Seed of the generator owned by one path.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t path);

McSample simulate_ou_alpha(const SteinSteinParams& p, double t, const McConfig& cfg);
McSample simulate_cir_alpha(const HestonParams& p, double t, const McConfig& cfg);
McSample simulate_alpha(const Model& model, double t, const McConfig& cfg);

// X_t = x0 e^{mu t} exp(-t alpha^2/2 + sqrt(t) alpha Z).
McSample simulate_stock(const Model& model, double t, const McConfig& cfg);

// Monotone (pchip) interpolant of cdf on n equispaced points of [lo, hi], constant outside.
std::function<double(double)> tabulate_cdf(const std::function<double(double)>& cdf, double lo, double hi, int n);

double ks_distance(const McSample& sample, const std::function<double(double)>& cdf);
double ks_distance(std::vector<double> draws, const std::function<double(double)>& cdf);

}  // namespace svt
