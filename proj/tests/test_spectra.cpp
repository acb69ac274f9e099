#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pwaves/errors.hpp"
#include "pwaves/kernel.hpp"
#include "pwaves/spectra.hpp"

using namespace pwaves;

namespace {
double root(double e) { return solve_mu_tilde(e).mu_tilde; }
}

TEST(Spectra, HigherModesPositive) {
    const double mt = root(0.05);
    const SpectrumReport r = one_dim_check(0.05, mt, 10);
    EXPECT_LE(std::abs(r.det1), 1e-10);
    ASSERT_EQ(r.modes.size(), 9u);
    EXPECT_TRUE(r.all_positive);
    for (const auto& m : r.modes) {
        EXPECT_GT(m.det, 0.0) << m.n;
        EXPECT_DOUBLE_EQ(m.n_det, m.n * m.det);
    }
    EXPECT_GT(r.min_n_det, 0.0);
    EXPECT_GT(r.delta_left, 0.0);
    EXPECT_GT(r.delta_right, 0.0);
}

TEST(Spectra, JumpRecordsMatchIdentity) {
    const double e = 0.05, mt = root(e);
    const SpectrumReport r = one_dim_check(e, mt, 4);
    for (const auto& m : r.modes) {
        const JumpCheck j = cross_check_jump(m.n, e, mt);
        const double na = m.n * 0.5 * (1 - e);
        EXPECT_NEAR(0.5 * std::sinh(na) * m.jump - m.n * (1 - e) * std::cosh(na), j.lhs, 1e-8);
    }
}

TEST(Spectra, SinhRatioBounds) {
    // |1 - 2 sinh(nb) cosh(na)/sinh(n)| <= C eps/n and sinh(nb) sinh(na)/sinh(n) bounded
    for (double e : {0.1, 0.05, 0.01}) {
        const double a = 0.5 * (1 - e), b = 0.5 * (1 + e);
        for (int n = 1; n <= 30; ++n) {
            const double t = std::abs(1 - 2 * std::sinh(n * b) * std::cosh(n * a) / std::sinh(n));
            EXPECT_LE(t, 2.0 * e / n) << e << " " << n;
            EXPECT_LE(std::sinh(n * b) * std::sinh(n * a) / std::sinh(n), 0.5);
        }
    }
}

TEST(Spectra, Monotonicity) {
    const int ns[] = {1, 2, 3, 4, 5};
    const MonotonicityResult r = monotonicity_check(0.05, root(0.05), ns);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.violations, 0);
    EXPECT_GT(r.worst_margin, 0.0);
    EXPECT_GT(r.left_derivative_margin, 0.0);
    const int bad[] = {2, 1};
    EXPECT_THROW(monotonicity_check(0.05, root(0.05), bad), PreconditionError);
}

TEST(Spectra, ModesShareInterfaceValue) {
    const double mt = root(0.05);
    for (int n = 1; n <= 5; ++n) {
        EXPECT_NEAR(solve_mode_ode(Side::left, n, 0.05, mt).interface_value(), 1.0, 1e-13);
        EXPECT_NEAR(solve_mode_ode(Side::right, n, 0.05, mt).interface_value(), 1.0, 1e-13);
    }
}

TEST(Spectra, DerivativeGapIdentityAndLimit) {
    double prev_l = INFINITY, prev_r = INFINITY;
    for (double e : {0.1, 0.05, 0.01}) {
        const DerivativeGap g = derivative_gap(e, root(e));
        EXPECT_LT(g.gap_left, 0.0);
        EXPECT_GT(g.gap_right, 0.0);
        EXPECT_LT(g.limit_left, 0.0);
        EXPECT_GT(g.limit_right, 0.0);
        // exact Green identity for the two modes
        EXPECT_NEAR(g.gap_left, g.identity_left, 1e-9);
        EXPECT_NEAR(g.gap_right, g.identity_right, 1e-9);
        const double dl = std::abs(g.gap_left - g.limit_left), dr = std::abs(g.gap_right - g.limit_right);
        EXPECT_LT(dl, prev_l);
        EXPECT_LT(dr, prev_r);
        prev_l = dl;
        prev_r = dr;
    }
}

TEST(Spectra, PositivityConstant) {
    EXPECT_NEAR(positivity_constant(), 1.0 - std::log(64.0 / 27.0), 1e-15);
    EXPECT_NEAR(positivity_constant(), 0.1369, 1e-4);
    EXPECT_GT(positivity_constant(), 0.13);
}

TEST(Spectra, XiInequality) {
    for (double xi : {0.5, 1.0, 2.0}) {
        const double v = xi_inequality(xi);
        EXPECT_GT(v, 0.0);
        auto f = [xi](double z) { return std::sinh(xi - z) * std::sinh(z) * 2.0 / (xi * xi - z * z); };
        EXPECT_NEAR(v, std::sinh(xi) - oracle::qags(f, 0.0, xi), 1e-10);
        EXPECT_GE(v, std::sinh(xi) * positivity_constant() - 1e-12);
    }
}

TEST(Spectra, PositivityBound) {
    const double mt = root(0.05);
    for (int n = 1; n <= 3; ++n) {
        for (Side side : {Side::left, Side::right}) {
            const PositivityResult r = positivity_bound(solve_mode_ode(side, n, 0.05, mt), 0.1);
            EXPECT_TRUE(r.positive);
            EXPECT_TRUE(r.bound) << n << " ratio " << r.worst_ratio;
            EXPECT_GT(r.min_value, 0.0);
        }
    }
    EXPECT_THROW(positivity_bound(solve_mode_ode(Side::left, 1, 0.05, mt), 0.2), PreconditionError);
}

TEST(Spectra, ChebyshevGrid) {
    const auto g = chebyshev_grid(0.0, 0.5, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 0.5);
    EXPECT_NEAR(g[2], 0.25, 1e-16);
    EXPECT_LT(g[1] - g[0], g[2] - g[1]);
}
