#pragma once

#include <span>
#include <vector>

#include "pwaves/ode.hpp"
#include "pwaves/profile.hpp"
#include "pwaves/quadrature.hpp"

namespace pwaves {

struct SpectralParams {
    int n = 1;
    double epsilon = 0.0;
    double lambda_bar = 0.0;  // v_varpi - lambda
    double lambda = 0.0;
    double mu = 0.0, nu = 0.0, rho = 0.0;
    double mu_tilde = 0.0, nu_tilde = 0.0, rho_tilde = 0.0;
    double Cm = 0.0, Cm_tilde = 0.0;
};

// Open interval of admissible mu_tilde: mu > a and nu < b.
Window mu_tilde_window(double epsilon);

SpectralParams spectral_params(double epsilon, double mu_tilde, int n = 1);

struct KernelOptions {
    double quad_tol = 1e-13;
    int scan_points = 100;
    double epsilon_max = kDefaultEpsilonMax;
};

// Analytic value of int dw/(w^2 - s^2) over the side's half-interval.
double pole_term(Side side, const SpectralParams& p);

// I_1 (left) or I_2 (right): subtract N(1/2) = sinh(n a) from the numerator, integrate the regular
// part, add the pole term in closed form.
double i_quadrature(Side side, const ModeSolution& f, const SpectralParams& p, double tol = 1e-13);

struct JumpCheck {
    double lhs = 0.0;  // (I1 + I2) / C~_n
    double rhs = 0.0;  // sinh(na)(f'(1/2-) - f'(1/2+))/2 - n(1-eps)cosh(na)
    double diff = 0.0;
};
JumpCheck cross_check_jump(int n, double epsilon, double mu_tilde, double tol = 1e-13);

struct DispersionData {
    SpectralParams params;
    double i1 = 0.0, i2 = 0.0;
    double m[2][2] = {{0, 0}, {0, 0}};
    double det = 0.0;
};
DispersionData dispersion(int n, double epsilon, double mu_tilde, double tol = 1e-13);
double determinant(int n, double epsilon, double mu_tilde, double tol = 1e-13);

struct Mu1Solution {
    double mu1 = 0.0;
    double residual = 0.0;
    double j1 = 0.0, j2 = 0.0;  // regularized f0 integrals on the two halves
};
// Left side of the mu1 equation for given f0 integrals.
double mu1_equation(double mu1, double j1, double j2);
Mu1Solution solve_mu1(double tol = 1e-13);

struct MuTildeSolution {
    double epsilon = 0.0;
    double mu_tilde = 0.0;
    double det = 0.0;
    double seed = 0.0;
    int sign_changes = 0;
    std::vector<double> roots;  // every bracketed root found by the scan
    double det_lo = 0.0, det_hi = 0.0;  // scan values at the window ends
};
MuTildeSolution solve_mu_tilde(double epsilon, const KernelOptions& opt = {});

struct Amplitudes {
    double A = 0.0, B = 0.0;
    double sigma_min = 0.0, sigma_max = 0.0;  // singular values of the 2x2 matrix
    double null_residual = 0.0;               // |M (A,B)| / |M|
};
// Unit null vector of the dispersion matrix, A > 0. Throws if the matrix is numerically regular.
Amplitudes amplitudes(double epsilon, double mu_tilde_star, double tol = 1e-13, bool require_singular = true);

class KernelMode {
public:
    KernelMode(double epsilon, double mu_tilde, double mu1, const KernelOptions& opt = {},
               bool require_root = true);

    double epsilon() const { return profile_.epsilon(); }
    const ShearProfile& profile() const { return profile_; }
    const SpectralParams& params() const { return params_; }
    double mu_tilde_star() const { return params_.mu_tilde; }
    double mu1() const { return mu1_; }
    double mu2_empirical() const;
    double A() const { return amp_.A; }
    double B() const { return amp_.B; }
    const Amplitudes& amplitudes() const { return amp_; }
    double lambda_bar() const { return params_.lambda_bar; }
    double lambda_star() const { return profile_.v_varpi() - lambda_bar(); }
    double det() const { return det_; }
    const ModeSolution& f_left() const { return left_; }
    const ModeSolution& f_right() const { return right_; }

    bool in_bands(double y) const { return y <= profile_.a() || y >= profile_.b(); }
    // kernel profile on [0,a] u [b,1] (one-sided limits at a and b)
    double h(double y) const;
    double h_prime(double y) const;

private:
    ShearProfile profile_;
    SpectralParams params_;
    double mu1_;
    Amplitudes amp_;
    double det_;
    ModeSolution left_, right_;
};

KernelMode assemble_kernel_mode(double epsilon, const KernelOptions& opt = {});

// Grid of `points` samples, half on [0,a] and half on [b,1], endpoints included.
std::vector<double> band_grid(const ShearProfile& p, int points);

// sup over the grid of |(y^2 - lambda_bar) h + 2 int chi G_1 h| (left band) and the
// (y^2 - 2 eps y + eps - lambda_bar) form on the right band.
double integral_residual(const ShearProfile& p, double lambda_bar, const RealFn& h, std::span<const double> y,
                         double tol = 1e-13);
double integral_residual(const KernelMode& mode, int grid_points = 512, double tol = 1e-13);

// L_n^lambda h = (lambda - Psi0') h - int varpi' G_n h, evaluated at y (h given as a function on the bands).
std::vector<double> linear_operator_apply(const ShearProfile& p, double lambda, const RealFn& h, int n,
                                          std::span<const double> y, double tol = 1e-13);
// Sampled h on a band grid (as from band_grid): piecewise cubic interpolation within each band.
std::vector<double> linear_operator_apply(const ShearProfile& p, double lambda, std::span<const double> grid,
                                          std::span<const double> h, int n);

// <L h, g> in L^2([0,a] u [b,1]).
double operator_inner(const ShearProfile& p, double lambda, const RealFn& h, const RealFn& g, int n,
                      double tol = 1e-12);

}  // namespace pwaves
