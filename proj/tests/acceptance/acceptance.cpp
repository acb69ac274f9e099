// Acceptance suite: one PASS/FAIL line per criterion.
//
//   pwaves_acceptance [--expect-fail N]...
//
// Exit status is 0 when the set of failing criteria equals the set given with --expect-fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../oracles.hpp"
#include "pwaves/kernel.hpp"
#include "pwaves/ode.hpp"
#include "pwaves/spectra.hpp"
#include "pwaves/wave.hpp"

using namespace pwaves;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failed;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failed.push_back(what);
        }
    }
};

const double kSweep[] = {0.1, 0.05, 0.02, 0.01};

void dispersion_roots(Outcome& o) {
    double worst_det = 0.0, worst_time = 0.0;
    for (double e : kSweep) {
        const auto t0 = Clock::now();
        const MuTildeSolution s = solve_mu_tilde(e);
        const SpectralParams p = spectral_params(e, s.mu_tilde);
        const double t = seconds_since(t0);
        worst_det = std::max(worst_det, std::abs(s.det));
        worst_time = std::max(worst_time, t);
        const std::string tag = " eps=" + std::to_string(e);
        o.check(std::abs(s.det) <= 1e-10, "det" + tag);
        o.check(p.mu_tilde > 0.5, "mu_tilde" + tag);
        o.check(p.nu_tilde < 0.5, "nu_tilde" + tag);
        o.check(ShearProfile(e).admissible_window().contains(p.lambda_bar), "window" + tag);
        o.check(t <= 5.0, "time" + tag);
    }
    o.detail << "max|det|=" << worst_det << " max_time=" << worst_time << "s";
}

void kernel_residual(Outcome& o) {
    const auto t0 = Clock::now();
    const KernelMode m = assemble_kernel_mode(0.05);
    const double ir = integral_residual(m, 512);
    const auto y = band_grid(m.profile(), 512);
    const auto lh = linear_operator_apply(m.profile(), m.lambda_star(), [&m](double z) { return m.h(z); }, 1, y);
    double sup = 0.0;
    for (double v : lh) sup = std::max(sup, std::abs(v));
    const double t = seconds_since(t0);
    o.check(ir <= 1e-8, "integral residual");
    o.check(sup <= 1e-7, "operator residual");
    o.check(t <= 10.0, "time");
    o.detail << "integral=" << ir << " Lh=" << sup << " time=" << t << "s";
}

// q(eps) = q0 + c1 eps log^2 eps + c2 eps log eps, least squares, returns q0
double richardson(const std::vector<double>& eps, const std::vector<double>& q) {
    const int n = static_cast<int>(eps.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double l = std::log(eps[i]);
        a.row(i) << 1.0, eps[i] * l * l, eps[i] * l;
        b(i) = q[i];
    }
    return a.colPivHouseholderQr().solve(b)(0);
}

void asymptotic_expansion(Outcome& o) {
    const auto t0 = Clock::now();
    const double target = 0.5 + solve_mu1().mu1;
    auto extrapolate = [](std::vector<double> eps) {
        std::vector<double> q;
        for (double e : eps) q.push_back((solve_mu_tilde(e).mu_tilde - 0.5) / e);
        return richardson(eps, q);
    };
    const double q_sweep = extrapolate({std::begin(kSweep), std::end(kSweep)});
    const double q_fine = extrapolate({1e-2, 3e-3, 1e-3});
    const double t = seconds_since(t0);
    const double rel = std::abs(q_sweep - target) / target, rel_fine = std::abs(q_fine - target) / target;
    o.check(rel <= 0.05, "sweep extrapolation");
    o.check(rel_fine <= 0.05, "fine extrapolation");
    o.check(t <= 30.0, "time");
    o.detail << "1/2+mu1=" << target << " q0(sweep)=" << q_sweep << " (" << 100 * rel << "%) q0(1e-2..1e-3)=" << q_fine
             << " (" << 100 * rel_fine << "%) time=" << t << "s";
}

void oracle_equivalence(Outcome& o) {
    double shoot = 0.0, quad = 0.0, jump = 0.0;
    for (double e : {0.1, 0.05, 0.01}) {
        const double mt = solve_mu_tilde(e).mu_tilde;
        for (int n = 1; n <= 3; ++n) {
            const SpectralParams p = spectral_params(e, mt, n);
            for (Side side : {Side::left, Side::right}) {
                const ModeSolution f = solve_mode_ode(side, n, e, mt);
                std::vector<double> xs;
                for (int i = 1; i < 200; ++i) xs.push_back(f.lo() + 0.5 * i / 200.0);
                const auto ref = oracle::shoot_mode(side, f.pole(), f.wavenumber(), xs);
                for (std::size_t i = 0; i < xs.size(); ++i) shoot = std::max(shoot, std::abs(ref[i] - f.value(xs[i])));
                const double s = f.pole(), k = f.wavenumber();
                auto g = [&](double w) {
                    return std::sinh(k * (side == Side::left ? w : 1.0 - w)) * f.value(w) / (w * w - s * s);
                };
                quad = std::max(quad, std::abs(i_quadrature(side, f, p) - p.Cm_tilde * oracle::qags(g, f.lo(), f.hi(), 1e-12)));
            }
            if (e == 0.05) jump = std::max(jump, std::abs(cross_check_jump(n, e, mt).diff));
        }
    }
    // regularized integrals of the limit problem against pole standoff
    const Mu1Solution m1 = solve_mu1();
    const LimitSolution f0 = solve_f0(1);
    const double sh = std::sinh(0.5);
    auto jl = [&](double w) { return (std::sinh(w) * f0.left.value(w) - sh) / (w * w - 0.25); };
    auto jr = [&](double w) { return (std::sinh(1.0 - w) * f0.right.value(w) - sh) / (w * w - 0.25); };
    const double standoff = std::max(std::abs(m1.j1 - oracle::standoff_limit(jl, 0.0, 0.5, true)),
                                     std::abs(m1.j2 - oracle::standoff_limit(jr, 1.0, 0.5, false)));
    o.check(shoot <= 1e-8, "shooting");
    o.check(quad <= 1e-7, "quadrature");
    o.check(standoff <= 1e-7, "standoff");
    o.check(jump <= 1e-8, "jump identity");
    o.detail << "shooting=" << shoot << " quadrature=" << quad << " standoff=" << standoff << " jump=" << jump;
}

void structural_invariants(Outcome& o) {
    const double e = 0.05, mt = solve_mu_tilde(e).mu_tilde;

    double drift = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const SpectralParams p = spectral_params(e, mt, n);
        for (double s : {p.mu_tilde, p.nu_tilde}) {
            const auto [g1, g2] = frobenius_pair(s, n * (1.0 - e));
            const double w0 = wronskian(g1, g2, 1.1 * s);
            for (int i = 1; i <= 9; ++i)
                for (double sg : {-1.0, 1.0})
                    drift = std::max(drift, std::abs(wronskian(g1, g2, s + sg * 0.1 * i * s) - w0) / std::abs(w0));
        }
    }

    bool positive = true;
    double worst_ratio = INFINITY;
    for (int n = 1; n <= 3; ++n)
        for (Side side : {Side::left, Side::right}) {
            const PositivityResult r = positivity_bound(solve_mode_ode(side, n, e, mt), 0.1);
            positive = positive && r.positive && r.bound;
            worst_ratio = std::min(worst_ratio, r.worst_ratio);
        }

    const int ns[] = {1, 2, 3, 4, 5};
    const MonotonicityResult mono = monotonicity_check(e, mt, ns);
    const SpectrumReport spec = one_dim_check(e, mt, 10);

    const KernelMode m = assemble_kernel_mode(e);
    auto h = [](double y) { return std::sin(std::numbers::pi * y) * (1.0 + y); };
    auto g = [](double y) { return y * (1.0 - y) * std::exp(y); };
    const double hg = operator_inner(m.profile(), m.lambda_star(), h, g, 1);
    const double gh = operator_inner(m.profile(), m.lambda_star(), g, h, 1);
    const double sym = std::abs(hg - gh) / std::abs(hg);

    o.check(drift <= 1e-9, "wronskian");
    o.check(positive, "positivity");
    o.check(mono.pass, "monotonicity");
    o.check(spec.all_positive && spec.modes.size() == 9, "det_n");
    o.check(sym <= 1e-9, "symmetry");
    o.detail << "wronskian=" << drift << " positivity_ratio=" << worst_ratio << " monotone_margin=" << mono.worst_margin
             << " min n*det_n=" << spec.min_n_det << " symmetry=" << sym;
}

void residual_scaling_check(Outcome& o) {
    const auto t0 = Clock::now();
    const KernelMode m = assemble_kernel_mode(0.05);
    const double sig[] = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    const ResidualScaling r = residual_scaling(m, sig, 0.1, ResidualOptions{128, 257});
    const double t = seconds_since(t0);
    o.check(r.slope >= 1.8, "slope");
    o.check(r.control_slope <= 1.2, "control slope");
    o.check(t <= 120.0, "time");
    o.detail << "slope=" << r.slope << " control_slope=" << r.control_slope << " time=" << t << "s";
}

void distance_trend(Outcome& o) {
    const auto t0 = Clock::now();
    double prev = INFINITY;
    bool decreasing = true;
    std::ostringstream totals;
    totals.precision(4);
    for (double e : {0.1, 0.05, 0.025}) {
        const KernelMode m = assemble_kernel_mode(e);
        const double d = sobolev_distance(push_forward_vorticity(m, e, 16, 17), 1.4).total;
        decreasing = decreasing && d < prev;
        prev = d;
        totals << (e == 0.1 ? "" : ",") << d;
    }
    double l2 = 0.0;
    for (double e : {0.1, 0.05, 0.025}) {
        const KernelMode m = assemble_kernel_mode(e);
        l2 = std::max(l2, std::abs(sobolev_distance(push_forward_vorticity(m, 0.0, 16, 3), 0.0).l2 -
                                   oracle::l2_distance_at_rest(e)));
    }
    const double t = seconds_since(t0);
    o.check(decreasing, "H^1.4 decrease");
    o.check(l2 <= 1e-6, "rest L2");
    o.check(t <= 300.0, "time");
    o.detail << "H^1.4=[" << totals.str() << "] rest_L2_error=" << l2 << " time=" << t << "s";
}

void limit_problem(Outcome& o) {
    const Mu1Solution m1 = solve_mu1();
    o.check(m1.residual <= 1e-12, "mu1 residual");
    o.check(m1.mu1 > -0.5 && m1.mu1 < 0.5, "mu1 range");

    double prev = INFINITY;
    bool non_increasing = true;
    std::ostringstream ratios;
    ratios.precision(4);
    for (double e : kSweep) {
        const double mt = solve_mu_tilde(e).mu_tilde;
        const double r = std::max(difference_to_limit(e, solve_mode_ode(Side::left, 1, e, mt)).ratio,
                                  difference_to_limit(e, solve_mode_ode(Side::right, 1, e, mt)).ratio);
        non_increasing = non_increasing && r <= prev;
        prev = r;
        ratios << (e == 0.1 ? "" : ",") << r;
    }
    o.check(non_increasing, "sup|f-f0|/(eps log(1/eps)) non-increasing");

    bool signs = true, approach = true;
    double pl = INFINITY, pr = INFINITY;
    for (double e : {0.1, 0.05, 0.01}) {
        const DerivativeGap g = derivative_gap(e, solve_mu_tilde(e).mu_tilde);
        signs = signs && g.gap_left < 0.0 && g.gap_right > 0.0;
        const double dl = std::abs(g.gap_left - g.limit_left), dr = std::abs(g.gap_right - g.limit_right);
        approach = approach && dl < pl && dr < pr;
        pl = dl;
        pr = dr;
    }
    o.check(signs, "gap signs");
    o.check(approach, "gap limit");
    o.detail << "mu1=" << m1.mu1 << " residual=" << m1.residual << " ratios=[" << ratios.str() << "] gap_err(0.01)=" << pl
             << "," << pr;
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--expect-fail" && i + 1 < argc) {
            expected.insert(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: pwaves_acceptance [--expect-fail N]...\n";
            return 64;
        }
    }

    const Criterion criteria[] = {
        {1, "dispersion roots", dispersion_roots},
        {2, "kernel residual", kernel_residual},
        {3, "asymptotic expansion", asymptotic_expansion},
        {4, "oracle equivalence", oracle_equivalence},
        {5, "structural invariants", structural_invariants},
        {6, "nonlinear residual scaling", residual_scaling_check},
        {7, "distance trend", distance_trend},
        {8, "limit problem", limit_problem},
    };

    std::cout.precision(4);
    std::set<int> failed;
    for (const Criterion& c : criteria) {
        Outcome o;
        o.detail.precision(4);
        try {
            c.run(o);
        } catch (const std::exception& ex) {
            o.pass = false;
            o.failed.push_back(std::string("exception: ") + ex.what());
        }
        if (!o.pass) failed.insert(c.id);
        std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.title << ": "
                  << o.detail.str();
        if (!o.pass) {
            std::cout << " failed={";
            for (std::size_t i = 0; i < o.failed.size(); ++i) std::cout << (i ? "; " : "") << o.failed[i];
            std::cout << "}";
        }
        if (expected.count(c.id)) std::cout << " [expected failure]";
        std::cout << std::endl;
    }
    return failed == expected ? 0 : 1;
}
