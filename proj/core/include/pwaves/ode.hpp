#pragma once

#include <array>
#include <utility>
#include <vector>

namespace pwaves {

// f'' = (2/(x^2 - s^2) + k^2) f, expanded in t = x - x0 as
//   sum a_j t^j + log|t| sum l_j t^j.
// Frobenius kinds sit on the pole x0 = s; patches are plain Taylor expansions at a regular point.
class FrobeniusSeries {
public:
    enum class Kind { analytic, logarithmic, patch };

    FrobeniusSeries() = default;
    FrobeniusSeries(Kind kind, double center, double pole, double k, std::vector<double> analytic,
                    std::vector<double> logc, int order);

    Kind kind() const { return kind_; }
    double center() const { return x0_; }
    double pole() const { return s_; }
    double other_pole() const { return -s_; }
    double k() const { return k_; }
    double radius() const;  // distance from the center to the nearest singular point other than itself
    int order() const { return order_; }
    const std::vector<double>& analytic_coeffs() const { return a_; }
    const std::vector<double>& log_coeffs() const { return l_; }
    // coefficient of (x-x0) log|x-x0|, the paper's g2^(-1)
    double log_coefficient() const { return l_.size() > 1 ? l_[1] : 0.0; }

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    // (x^2 - s^2) f'' - (2 + k^2 (x^2 - s^2)) f, the pole-free form of the ODE
    double ode_residual(double x) const;

    // this*p + other*q (same center, same equation)
    static FrobeniusSeries combine(double p, const FrobeniusSeries& u, double q, const FrobeniusSeries& v);

private:
    Kind kind_ = Kind::patch;
    double x0_ = 0.0, s_ = 0.0, k_ = 0.0;
    std::vector<double> a_, l_;
    int order_ = 0;
};

inline constexpr int kMaxSeriesOrder = 200;

// Indicial roots of the Frobenius expansion about x0 (always {0,1} for this family).
std::array<double, 2> indicial_roots(double x0, double k);

// g1 (analytic, g1 = t + ...) and g2 (= 1 + (1/x0) g1 log|t| + ...), truncated so that the tail is
// negligible for |t| <= reach. reach defaults to x0 (ratio 1/2 of the convergence radius 2 x0).
std::pair<FrobeniusSeries, FrobeniusSeries> frobenius_pair(double x0, double k, double reach = -1.0,
                                                           int max_order = kMaxSeriesOrder);

// Taylor expansion at a regular point x1 with data f(x1), f'(x1), valid for |t| <= reach.
FrobeniusSeries taylor_patch(double x1, double s, double k, double f, double df, double reach,
                             int max_order = kMaxSeriesOrder);

enum class Side { left, right };

class ModeSolution {
public:
    struct Piece {
        double lo, hi;
        FrobeniusSeries series;
    };

    ModeSolution(Side side, int n, double epsilon, double s, double k, std::vector<Piece> pieces);

    Side side() const { return side_; }
    int mode() const { return n_; }
    double epsilon() const { return eps_; }
    double pole() const { return s_; }
    double wavenumber() const { return k_; }
    double lo() const { return side_ == Side::left ? 0.0 : 0.5; }
    double hi() const { return side_ == Side::left ? 0.5 : 1.0; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    double value(double x) const;
    double derivative(double x) const;
    double operator()(double x) const { return value(x); }

    double boundary_value() const;        // f(0) or f(1)
    double interface_value() const;       // f(1/2-) or f(1/2+)
    double interface_derivative() const;  // f'(1/2-) or f'(1/2+); infinite for the limit problem

private:
    const Piece& piece(double x) const;

    Side side_;
    int n_;
    double eps_, s_, k_;
    std::vector<Piece> pieces_;
};

// Left: s = mu_tilde on [0,1/2]. Right: s = nu_tilde = sqrt(mu_tilde^2 - eps/(1-eps)) on [1/2,1].
// k = (1-eps) n. Boundary rows f(endpoint) = 0, f(1/2) = 1.
ModeSolution solve_mode_ode(Side side, int n, double epsilon, double mu_tilde);

struct LimitSolution {
    ModeSolution left;
    ModeSolution right;
    FrobeniusSeries g1;  // analytic solution about 1/2
};

// Limit problem: s = 1/2, k = n; f0(0) = f0(1) = 0, f0(1/2) = 1.
LimitSolution solve_f0(int n = 1);

template <class U, class V>
double wronskian(const U& u, const V& v, double x) {
    return u.value(x) * v.derivative(x) - u.derivative(x) * v.value(x);
}

struct LimitDistance {
    double sup = 0.0;
    double ratio = 0.0;  // sup / (eps log(1/eps))
};

// sup |f - f0| over the solution's half-interval, excluding a 1e-6 neighbourhood of 1/2.
LimitDistance difference_to_limit(double epsilon, const ModeSolution& f, int grid = 2000);

}  // namespace pwaves
