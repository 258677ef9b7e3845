#pragma once

#include <vector>

#include "svoltails/params.hpp"

namespace svt {

class MixingTable;

struct OptionSpec {
    double spot;
    double strike;
    double rate;
    double expiry;
};

struct SmilePoint {
    double log_strike;
    double implied_vol;
    bool flagged_tail = false;  // price taken from the tail asymptotics
};

double norm_cdf(double x);
double norm_pdf(double x);

// Undiscounted Black call/put on a forward with total standard deviation s = vol*sqrt(T).
double black_call(double forward, double strike, double s);
double black_put(double forward, double strike, double s);

double bs_call(const OptionSpec& spec, double vol);
double bs_put(const OptionSpec& spec, double vol);
double bs_vega(const OptionSpec& spec, double vol);

double implied_vol(const OptionSpec& spec, double price);

std::vector<SmilePoint> model_smile(const Model& model, double T, double rate, const std::vector<double>& k_grid);
std::vector<SmilePoint> model_smile(const MixingTable& table, double rate, const std::vector<double>& k_grid);

}  // namespace svt
