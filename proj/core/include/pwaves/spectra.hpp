#pragma once

#include <span>
#include <vector>

#include "pwaves/ode.hpp"

namespace pwaves {

struct ModeRecord {
    int n = 0;
    double det = 0.0;
    double n_det = 0.0;
    double jump = 0.0;  // f_n'(1/2-) - f_n'(1/2+)
};

struct SpectrumReport {
    double epsilon = 0.0;
    double mu_tilde_star = 0.0;
    double det1 = 0.0;
    std::vector<ModeRecord> modes;  // n = 2..n_max
    double min_n_det = 0.0;
    bool all_positive = false;
    double delta_left = 0.0;   // -(f_1 - f_2)'(1/2-)
    double delta_right = 0.0;  // (f_1 - f_2)'(1/2+)
};

SpectrumReport one_dim_check(double epsilon, double mu_tilde_star, int n_max = 10, double tol = 1e-13);

// Points on [lo,hi] clustered at both ends (Chebyshev-Lobatto).
std::vector<double> chebyshev_grid(double lo, double hi, int points);

struct MonotonicityResult {
    bool pass = false;
    double worst_margin = 0.0;       // min of f_n - f_{n'} over interior points and consecutive pairs
    int violations = 0;
    double left_derivative_margin = 0.0;  // min of f_{n'}'(1/2-) - f_n'(1/2-)
};

MonotonicityResult monotonicity_check(double epsilon, double mu_tilde_star, std::span<const int> n_list,
                                      int grid = 512);

struct DerivativeGap {
    double gap_left = 0.0;     // f_1'(1/2-) - f_2'(1/2-)
    double limit_left = 0.0;   // -3 (1-eps)^2 int_0^1/2 f0 f0#
    double identity_left = 0.0;  // -3 (1-eps)^2 int_0^1/2 f_1 f_2 (exact for every eps)
    double gap_right = 0.0;    // f_1'(1/2+) - f_2'(1/2+)
    double limit_right = 0.0;  // 3 (1-eps)^2 int_1/2^1 f0 f0#
    double identity_right = 0.0;
};

DerivativeGap derivative_gap(double epsilon, double mu_tilde_star, double tol = 1e-12);

// 1 - log(4/3) - log(16/9)
double positivity_constant();

// sinh(xi) - int_0^xi sinh(xi - z) sinh(z) 2/(xi^2 - z^2) dz
double xi_inequality(double xi, double tol = 1e-12);

struct PositivityResult {
    bool positive = false;   // f > 0 on the open half-interval
    bool bound = false;      // normalized f >= c sinh(k d)/k, d = distance to the regular endpoint
    double min_value = 0.0;
    double worst_ratio = 0.0;  // min of normalized f / (sinh(k d)/k)
};

// Left: f / f'(0) against c sinh(k x)/k. Right: f / (-f'(1)) against c sinh(k (1-x))/k.
PositivityResult positivity_bound(const ModeSolution& f, double c, int grid = 512);

}  // namespace pwaves
