#include "pwaves/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pwaves/errors.hpp"
#include "pwaves/kernel.hpp"
#include "pwaves/quadrature.hpp"

namespace pwaves {

std::vector<double> chebyshev_grid(double lo, double hi, int points) {
    if (points < 2) throw PreconditionError("chebyshev_grid: need at least 2 points");
    std::vector<double> x(points);
    for (int i = 0; i < points; ++i)
        x[i] = lo + (hi - lo) * 0.5 * (1.0 - std::cos(std::numbers::pi * i / (points - 1)));
    x.front() = lo;
    x.back() = hi;
    return x;
}

DerivativeGap derivative_gap(double epsilon, double mu_tilde_star, double tol) {
    const ModeSolution l1 = solve_mode_ode(Side::left, 1, epsilon, mu_tilde_star);
    const ModeSolution l2 = solve_mode_ode(Side::left, 2, epsilon, mu_tilde_star);
    const ModeSolution r1 = solve_mode_ode(Side::right, 1, epsilon, mu_tilde_star);
    const ModeSolution r2 = solve_mode_ode(Side::right, 2, epsilon, mu_tilde_star);
    const LimitSolution f0 = solve_f0(1), f0s = solve_f0(2);
    const double c = 3.0 * (1.0 - epsilon) * (1.0 - epsilon);
    QuadOptions opt;
    opt.tol = tol;
    auto prod = [](const ModeSolution& u, const ModeSolution& v) {
        return [&u, &v](double x) { return u.value(x) * v.value(x); };
    };
    DerivativeGap g;
    g.gap_left = l1.interface_derivative() - l2.interface_derivative();
    g.gap_right = r1.interface_derivative() - r2.interface_derivative();
    g.identity_left = -c * integrate(prod(l1, l2), 0.0, 0.5, opt, "derivative_gap").value;
    g.identity_right = c * integrate(prod(r1, r2), 0.5, 1.0, opt, "derivative_gap").value;
    g.limit_left = -c * integrate(prod(f0.left, f0s.left), 0.0, 0.5, opt, "derivative_gap").value;
    g.limit_right = c * integrate(prod(f0.right, f0s.right), 0.5, 1.0, opt, "derivative_gap").value;
    return g;
}

SpectrumReport one_dim_check(double epsilon, double mu_tilde_star, int n_max, double tol) {
    if (n_max < 2) throw PreconditionError("one_dim_check: n_max must be >= 2");
    SpectrumReport r;
    r.epsilon = epsilon;
    r.mu_tilde_star = mu_tilde_star;
    r.det1 = determinant(1, epsilon, mu_tilde_star, tol);
    r.all_positive = true;
    r.min_n_det = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= n_max; ++n) {
        ModeRecord m;
        m.n = n;
        m.det = determinant(n, epsilon, mu_tilde_star, tol);
        m.n_det = n * m.det;
        const ModeSolution fl = solve_mode_ode(Side::left, n, epsilon, mu_tilde_star);
        const ModeSolution fr = solve_mode_ode(Side::right, n, epsilon, mu_tilde_star);
        m.jump = fl.interface_derivative() - fr.interface_derivative();
        r.all_positive = r.all_positive && m.det > 0.0;
        r.min_n_det = std::min(r.min_n_det, m.n_det);
        r.modes.push_back(m);
    }
    const DerivativeGap g = derivative_gap(epsilon, mu_tilde_star);
    r.delta_left = -g.gap_left;
    r.delta_right = g.gap_right;
    return r;
}

MonotonicityResult monotonicity_check(double epsilon, double mu_tilde_star, std::span<const int> n_list, int grid) {
    MonotonicityResult res;
    if (n_list.size() < 2) throw PreconditionError("monotonicity_check: need at least two modes");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (!(n_list[i] > n_list[i - 1])) throw PreconditionError("monotonicity_check: modes must ascend");
    res.worst_margin = std::numeric_limits<double>::infinity();
    res.left_derivative_margin = std::numeric_limits<double>::infinity();
    for (Side side : {Side::left, Side::right}) {
        std::vector<ModeSolution> fs;
        for (int n : n_list) fs.push_back(solve_mode_ode(side, n, epsilon, mu_tilde_star));
        const double lo = side == Side::left ? 0.0 : 0.5, hi = side == Side::left ? 0.5 : 1.0;
        const auto xs = chebyshev_grid(lo, hi, grid);
        for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
            for (std::size_t j = 1; j + 1 < xs.size(); ++j) {
                const double m = fs[i].value(xs[j]) - fs[i + 1].value(xs[j]);
                res.worst_margin = std::min(res.worst_margin, m);
                if (!(m > 0.0)) ++res.violations;
            }
            if (side == Side::left)
                res.left_derivative_margin = std::min(
                    res.left_derivative_margin, fs[i + 1].interface_derivative() - fs[i].interface_derivative());
        }
    }
    res.pass = res.violations == 0 && res.left_derivative_margin > 0.0;
    return res;
}

double positivity_constant() { return 1.0 - std::log(4.0 / 3.0) - std::log(16.0 / 9.0); }

double xi_inequality(double xi, double tol) {
    if (!(xi > 0.0)) throw PreconditionError("xi_inequality: xi must be > 0");
    auto f = [xi](double z) {
        const double d = xi - z;
        if (d == 0.0) return std::sinh(xi) / xi;  // limit of sinh(d) / ((xi - z)(xi + z)) * 2 sinh(z)
        return std::sinh(d) * std::sinh(z) * 2.0 / (d * (xi + z));
    };
    QuadOptions opt;
    opt.tol = tol;
    return std::sinh(xi) - integrate(f, 0.0, xi, opt, "xi_inequality").value;
}

PositivityResult positivity_bound(const ModeSolution& f, double c, int grid) {
    if (!(c > 0.0 && c <= 0.13)) throw PreconditionError("positivity_bound: c must lie in (0, 0.13]");
    PositivityResult r;
    const bool left = f.side() == Side::left;
    const double k = f.wavenumber();
    const double slope = left ? f.derivative(0.0) : -f.derivative(1.0);
    const auto xs = chebyshev_grid(f.lo(), f.hi(), grid);
    r.positive = slope > 0.0;
    r.min_value = std::numeric_limits<double>::infinity();
    r.worst_ratio = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        const double d = left ? x : 1.0 - x;
        if (d <= 0.0) continue;
        const double v = f.value(x);
        r.min_value = std::min(r.min_value, v);
        r.positive = r.positive && v > 0.0;
        r.worst_ratio = std::min(r.worst_ratio, (v / slope) / (std::sinh(k * d) / k));
    }
    r.bound = r.positive && r.worst_ratio >= c;
    return r;
}

}  // namespace pwaves
