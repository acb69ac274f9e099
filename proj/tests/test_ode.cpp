#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pwaves/errors.hpp"
#include "pwaves/kernel.hpp"
#include "pwaves/ode.hpp"

using namespace pwaves;

TEST(Frobenius, IndicialRoots) {
    const auto r = indicial_roots(0.5, 1.0);
    EXPECT_EQ(r[0], 0.0);
    EXPECT_EQ(r[1], 1.0);
}

TEST(Frobenius, PairNormalization) {
    for (double x0 : {0.5, 0.52, 0.7}) {
        const auto [g1, g2] = frobenius_pair(x0, 0.95);
        EXPECT_EQ(g1.kind(), FrobeniusSeries::Kind::analytic);
        EXPECT_EQ(g2.kind(), FrobeniusSeries::Kind::logarithmic);
        EXPECT_EQ(g1.value(x0), 0.0);
        EXPECT_NEAR(g1.derivative(x0), 1.0, 1e-15);
        EXPECT_NEAR(g2.value(x0), 1.0, 1e-15);
        EXPECT_NEAR(g2.log_coefficient(), 1.0 / x0, 1e-14);
        EXPECT_DOUBLE_EQ(g1.radius(), 2.0 * x0);
        EXPECT_DOUBLE_EQ(g1.other_pole(), -x0);
    }
    EXPECT_NEAR(frobenius_pair(0.5, 1.0).second.log_coefficient(), 2.0, 1e-15);
}

TEST(Frobenius, OdeResidualSmall) {
    const double x0 = 0.53, k = 0.9;
    const auto [g1, g2] = frobenius_pair(x0, k);
    for (double t : {-0.4, -0.2, -0.01, 0.01, 0.2, 0.4}) {
        EXPECT_NEAR(g1.ode_residual(x0 + t), 0.0, 1e-12) << t;
        EXPECT_NEAR(g2.ode_residual(x0 + t), 0.0, 1e-12) << t;
    }
}

TEST(Frobenius, WronskianConstant) {
    const double x0 = 0.51, k = 0.95;
    const auto [g1, g2] = frobenius_pair(x0, k);
    const double w0 = wronskian(g1, g2, x0 + 0.05);
    EXPECT_NEAR(std::abs(w0), 1.0, 1e-12);
    for (double t : {-0.45, -0.3, -0.1, -1e-4, 1e-4, 0.1, 0.3, 0.45})
        EXPECT_NEAR(wronskian(g1, g2, x0 + t), w0, 1e-10) << t;
}

TEST(Frobenius, AnalyticBranchAgreesWithIntegration) {
    const double x0 = 0.5, k = 1.0;
    const auto g1 = frobenius_pair(x0, k).first;
    // integrate from a point off the pole with the series data
    namespace ode = boost::numeric::odeint;
    oracle::State y{g1.value(0.45), g1.derivative(0.45)};
    auto rhs = [&](const oracle::State& s, oracle::State& d, double x) {
        d[0] = s[1];
        d[1] = (2.0 / (x * x - x0 * x0) + k * k) * s[0];
    };
    ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<oracle::State>()), rhs, y,
                            0.45, 0.1, -1e-3);
    EXPECT_NEAR(y[0], g1.value(0.1), 1e-11);
}

TEST(Frobenius, TaylorPatchContinuesSolution) {
    const auto g1 = frobenius_pair(0.5, 1.0).first;
    const FrobeniusSeries p = taylor_patch(0.8, 0.5, 1.0, g1.value(0.8), g1.derivative(0.8), 0.15);
    EXPECT_EQ(p.kind(), FrobeniusSeries::Kind::patch);
    for (double x : {0.7, 0.8, 0.9}) EXPECT_NEAR(p.value(x), g1.value(x), 1e-12);
}

TEST(Frobenius, TruncationCapReported) {
    EXPECT_THROW(frobenius_pair(0.5, 1.0, 0.49, 12), SeriesDivergence);
}

class ModeVsShooting : public ::testing::TestWithParam<std::tuple<double, int>> {};

TEST_P(ModeVsShooting, SupDifference) {
    const auto [eps, n] = GetParam();
    const double mt = solve_mu_tilde(eps).mu_tilde;
    for (Side side : {Side::left, Side::right}) {
        const ModeSolution f = solve_mode_ode(side, n, eps, mt);
        std::vector<double> xs;
        for (int i = 1; i < 200; ++i) xs.push_back(f.lo() + 0.5 * i / 200.0);
        const auto ref = oracle::shoot_mode(side, f.pole(), f.wavenumber(), xs);
        ASSERT_EQ(ref.size(), xs.size());
        double sup = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) sup = std::max(sup, std::abs(ref[i] - f.value(xs[i])));
        EXPECT_LE(sup, 1e-8) << "eps " << eps << " n " << n;
        EXPECT_NEAR(f.boundary_value(), 0.0, 1e-13);
        EXPECT_NEAR(f.interface_value(), 1.0, 1e-13);
        const double slope = side == Side::left ? f.derivative(0.0) : f.derivative(1.0);
        EXPECT_NEAR(slope, oracle::shoot_slope(side, f.pole(), f.wavenumber()), 1e-8 * std::abs(slope));
    }
}

INSTANTIATE_TEST_SUITE_P(Sweep, ModeVsShooting,
                         ::testing::Combine(::testing::Values(0.1, 0.05, 0.01), ::testing::Values(1, 2, 3)));

TEST(ModeSolution, PolesAndWavenumber) {
    const double eps = 0.05, mt = 0.513;
    const ModeSolution l = solve_mode_ode(Side::left, 2, eps, mt), r = solve_mode_ode(Side::right, 2, eps, mt);
    EXPECT_DOUBLE_EQ(l.pole(), mt);
    EXPECT_NEAR(r.pole(), std::sqrt(mt * mt - eps / (1 - eps)), 1e-15);
    EXPECT_DOUBLE_EQ(l.wavenumber(), 2 * (1 - eps));
    EXPECT_LT(r.pole(), 0.5);
}

TEST(LimitProblem, Normalization) {
    const LimitSolution f0 = solve_f0(1);
    EXPECT_NEAR(f0.left.value(0.0), 0.0, 1e-14);
    EXPECT_NEAR(f0.right.value(1.0), 0.0, 1e-14);
    EXPECT_NEAR(f0.left.interface_value(), 1.0, 1e-14);
    EXPECT_NEAR(f0.right.interface_value(), 1.0, 1e-14);
    EXPECT_TRUE(std::isinf(f0.left.interface_derivative()));
}

TEST(LimitProblem, ShapeAgreesWithShooting) {
    // the pole sits on x = 1/2, so compare shapes normalized at an interior point
    const LimitSolution f0 = solve_f0(1);
    std::vector<double> xs{0.05, 0.1, 0.2, 0.3};
    const auto ref = oracle::shoot_mode(Side::left, 0.5, 1.0, xs, 0.4);
    for (std::size_t i = 0; i < xs.size(); ++i)
        EXPECT_NEAR(ref[i], f0.left.value(xs[i]) / f0.left.value(0.4), 1e-9);
    const std::vector<double> xr{0.95, 0.9, 0.8, 0.7};
    const auto refr = oracle::shoot_mode(Side::right, 0.5, 1.0, xr, 0.6);
    for (std::size_t i = 0; i < xr.size(); ++i)
        EXPECT_NEAR(refr[i], f0.right.value(xr[i]) / f0.right.value(0.6), 1e-9);
}

TEST(LimitProblem, DistanceBoundedByEpsLog) {
    // sup|f - f0| / (eps log(1/eps)) stays bounded; against eps log^2 it decays
    double prev = INFINITY;
    for (double e : {0.1, 0.05, 0.02, 0.01, 0.003, 0.001}) {
        const double mt = solve_mu_tilde(e).mu_tilde;
        const double d = std::max(difference_to_limit(e, solve_mode_ode(Side::left, 1, e, mt)).ratio,
                                  difference_to_limit(e, solve_mode_ode(Side::right, 1, e, mt)).ratio);
        EXPECT_LT(d, 1.0) << e;
        const double sq = d / std::log(1.0 / e);
        EXPECT_LT(sq, prev) << e;
        prev = sq;
    }
}
