#pragma once

#include <vector>

namespace svt {

// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule make_gauss_legendre(int n);

// Shared, immutable rule; computed once per n.
const GaussRule& gauss_legendre(int n);

template <class F>
double integrate_panel(const GaussRule& rule, double lo, double hi, F&& f) {
    double half = 0.5 * (hi - lo);
    double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

template <class F>
double integrate_composite(const GaussRule& rule, double lo, double hi, int panels, F&& f) {
    double h = (hi - lo) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) sum += integrate_panel(rule, lo + k * h, lo + (k + 1) * h, f);
    return sum;
}

}  // namespace svt
