#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "pwaves/ode.hpp"

namespace oracle {

using State = std::array<double, 2>;

// Shoot f'' = (2/(x^2-s^2) + k^2) f from the regular endpoint with unit slope, rescale so f(norm_at) = 1.
// xs must lie between the endpoint and norm_at (default 1/2).
inline std::vector<double> shoot_mode(pwaves::Side side, double s, double k, std::span<const double> xs,
                                      double norm_at = 0.5) {
    namespace ode = boost::numeric::odeint;
    const bool left = side == pwaves::Side::left;
    std::vector<double> times{left ? 0.0 : 1.0};
    for (double x : xs) times.push_back(x);
    times.push_back(norm_at);
    std::sort(times.begin(), times.end(), [left](double p, double q) { return left ? p < q : p > q; });
    auto rhs = [s, k](const State& y, State& dy, double x) {
        dy[0] = y[1];
        dy[1] = (2.0 / (x * x - s * s) + k * k) * y[0];
    };
    State y{0.0, left ? 1.0 : -1.0};
    std::vector<std::pair<double, double>> samples;
    auto obs = [&](const State& st, double x) { samples.emplace_back(x, st[0]); };
    auto stepper = ode::make_controlled(1e-15, 1e-15, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), left ? 1e-4 : -1e-4, obs);
    double at_half = 0.0;
    for (auto [x, v] : samples)
        if (x == norm_at) at_half = v;
    std::vector<double> out;
    for (double x : xs)
        for (auto [t, v] : samples)
            if (t == x) {
                out.push_back(v / at_half);
                break;
            }
    return out;
}

// Shooting derivative at the regular endpoint for the normalized solution.
inline double shoot_slope(pwaves::Side side, double s, double k) {
    namespace ode = boost::numeric::odeint;
    const bool left = side == pwaves::Side::left;
    auto rhs = [s, k](const State& y, State& dy, double x) {
        dy[0] = y[1];
        dy[1] = (2.0 / (x * x - s * s) + k * k) * y[0];
    };
    State y{0.0, left ? 1.0 : -1.0};
    auto stepper = ode::make_controlled(1e-15, 1e-15, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_adaptive(stepper, rhs, y, left ? 0.0 : 1.0, 0.5, left ? 1e-4 : -1e-4);
    return (left ? 1.0 : -1.0) / y[0];
}

// QUADPACK qags through GSL.
inline double qags(const std::function<double(double)>& f, double a, double b, double epsrel = 1e-13) {
    gsl_set_error_handler_off();
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(20000);
    gsl_function F;
    F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    F.params = const_cast<std::function<double(double)>*>(&f);
    double r = 0.0, err = 0.0;
    const int status = gsl_integration_qags(&F, a, b, 0.0, epsrel, 20000, w, &r, &err);
    gsl_integration_workspace_free(w);
    if (status != GSL_SUCCESS && status != GSL_EROUND) throw std::runtime_error(gsl_strerror(status));
    return r;
}

// lim_{d->0} int_lo^{pole-d} f from standoffs d = 1e-3 2^-i.
inline double standoff_limit(const std::function<double(double)>& f, double lo, double pole, bool pole_on_right) {
    // fit v(d) = c0 + c1 d log d + c2 d + c3 d^2 log d + c4 d^2 through five standoffs
    constexpr int n = 5;
    Eigen::Matrix<double, n, n> m;
    Eigen::Matrix<double, n, 1> v;
    for (int i = 0; i < n; ++i) {
        const double d = 1e-3 * std::ldexp(1.0, -i), ld = std::log(d);
        v(i) = pole_on_right ? qags(f, lo, pole - d) : qags(f, pole + d, lo);
        m.row(i) << 1.0, d * ld, d, d * d * ld, d * d;
    }
    return m.fullPivLu().solve(v)(0);
}

// v_varpi = -int_0^1 u - 1/3 with u(y) = int_0^y varpi, by composite Simpson on a grid aligned with a and b.
inline double v_varpi(double eps) {
    const double a = 0.5 * (1.0 - eps), b = 0.5 * (1.0 + eps);
    auto varpi = [&](double y) { return y < a ? -2.0 * y : (y <= b ? -2.0 * a : -2.0 * (y - b) - 2.0 * a); };
    auto simpson = [](auto f, double lo, double hi, int n) {
        const double h = (hi - lo) / n;
        double s = f(lo) + f(hi);
        for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    auto u = [&](double y) {
        double acc = simpson(varpi, 0.0, std::min(y, a), 20);
        if (y > a) acc += simpson(varpi, a, std::min(y, b), 20);
        if (y > b) acc += simpson(varpi, b, y, 20);
        return acc;
    };
    return -(simpson(u, 0.0, a, 400) + simpson(u, a, b, 400) + simpson(u, b, 1.0, 400)) - 1.0 / 3.0;
}

// ||varpi_ext + 2y||_{L2(T x [-1,1])} by symbolic piecewise integration.
inline double l2_distance_at_rest(double eps) {
    const double b = 0.5 * (1.0 + eps);
    const double pi = 3.14159265358979323846;
    return std::sqrt(2.0 * 2.0 * pi * (4.0 * eps * eps * eps / 3.0 + 4.0 * eps * eps * (1.0 - b)));
}

// Root of the mu1 equation, log((1+2m)/(1-2m)) = l, solved in closed form.
inline double mu1_closed_form(double j1, double j2) {
    const double c1 = 2.0 / std::sinh(1.0), sh = std::sinh(0.5);
    const double l = std::log(3.0) - (1.0 + c1 * sh * (j1 + j2)) / (c1 * sh * sh);
    return 0.5 * std::tanh(0.5 * l);
}

}  // namespace oracle
