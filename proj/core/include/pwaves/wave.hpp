#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pwaves/kernel.hpp"

namespace pwaves {

// f(x,y) = sigma * hhat(y) * cos x with hhat = h / sup|h'| on the bands, odd in y.
class Displacement {
public:
    Displacement(const KernelMode& mode, double sigma);

    double sigma() const { return sigma_; }
    double scale() const { return scale_; }  // 1 / sup|h'|
    double sup_h() const { return sup_h_; }  // sup|hhat|
    const ShearProfile& profile() const { return mode_->profile(); }

    double hhat(double y) const { return scale_ * mode_->h(y); }
    double hhat_prime(double y) const { return scale_ * mode_->h_prime(y); }
    // Defined for |y| in [0,a] u [b,1]; throws inside the plateau.
    double operator()(double x, double y) const;

    // y in the band on the given side of the plateau with y + f(x,y) = z. Requires z in the image.
    double invert(double x, double z, bool upper) const;

private:
    const KernelMode* mode_;
    double sigma_;
    double scale_;
    double sup_h_;
};

// Vorticity of the displaced profile, omega_f(x,z) for z in [0,1].
double pushed_vorticity(const Displacement& f, double x, double z);
// Kinks of omega_f(x, .) on [0,1]: a, b and the displaced plateau edges.
std::vector<double> vorticity_breaks(const Displacement& f, double x);

struct WaveField {
    double epsilon = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    double mu_tilde = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<double> x;      // 2 pi i / nx
    std::vector<double> y;      // uniform on [-1,1]
    std::vector<double> omega;  // row-major [i*ny + j]
    std::vector<double> psi;    // empty until the stream function is solved

    // Continuous vorticity on T x [-1,1] and its kinks in y for a given x.
    std::function<double(double, double)> omega_at;
    std::function<std::vector<double>(double)> breaks;

    double omega_ij(int i, int j) const { return omega[static_cast<std::size_t>(i) * ny + j]; }
    double psi_ij(int i, int j) const { return psi[static_cast<std::size_t>(i) * ny + j]; }
};

// The mode must outlive the field (omega_at refers to it).
WaveField push_forward_vorticity(const KernelMode& mode, double sigma, int nx, int ny);
// Psi on the half channel with Psi(x,0)=0, Psi(x,1)=-1/3, reflected oddly.
WaveField with_stream_function(WaveField field);
WaveField assemble_wave_field(const KernelMode& mode, double sigma, int nx, int ny);

// Exact Poiseuille vorticity -2y with psi = -y^3/3.
WaveField poiseuille_field(int nx, int ny);

struct ResidualOptions {
    int nx = 128;
    int ny = 257;  // half-channel rows, uniform on [0,1]
    int panel_order = 8;
};

// sup over the band rows of |lambda f - (Psibar - x-mean)| for each requested lambda.
std::vector<double> nonlinear_residuals(const KernelMode& mode, double sigma, std::span<const double> lambdas,
                                        const ResidualOptions& opt = {});
double nonlinear_residual(const KernelMode& mode, double sigma, const ResidualOptions& opt = {});

struct ResidualScaling {
    std::vector<double> sigma;
    std::vector<double> residual;
    std::vector<double> control;  // same field, lambda* + control_offset
    double slope = 0.0;
    double control_slope = 0.0;
};
ResidualScaling residual_scaling(const KernelMode& mode, std::span<const double> sigmas,
                                 double control_offset = 0.1, const ResidualOptions& opt = {});

// Least-squares slope of log(v) against log(s).
double loglog_slope(std::span<const double> s, std::span<const double> v);

struct SobolevOptions {
    int cells = 64;       // per direction for the double integral
    int l2_columns = 256;  // x-columns for the L2 part
    double tol = 1e-11;
};

struct SobolevDistance {
    double gamma = 0.0;
    double l2 = 0.0;
    double seminorm = 0.0;  // fractional seminorm of omega+2y (gamma<1) or of grad(omega)+(0,2) (gamma>1);
                            // for gamma=1 the L2 norm of the gradient
    double total = 0.0;     // l2 + seminorm
};

SobolevDistance sobolev_distance(const WaveField& field, double gamma, const SobolevOptions& opt = {});

}  // namespace pwaves
