#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pwaves/quadrature.hpp"

namespace pwaves {

// Dirichlet Green's function of d^2/dy^2 - n^2 on [0,1] (sign convention: phi'' - n^2 phi = -delta).
double green(int n, double y, double z);
// n = 0 branch: z(1-y) for z<y.
double green0(double y, double z);

// int_0^1 G_n(y,z) (phi''(y) - n^2 phi(y)) dy; equals -phi(z) for phi(0)=phi(1)=0.
double greens_distributional_check(int n, double z, const RealFn& phi, const RealFn& phi_dd,
                                   const QuadOptions& opt = {});

// phi_n(y) = int_0^1 G_n(y,z) g(z) dz at each requested y, i.e. phi'' - n^2 phi = -g, phi(0)=phi(1)=0.
std::vector<double> solve_mode(int n, const RealFn& g, std::span<const double> y,
                               const QuadOptions& opt = {});

struct ChannelBoundary {
    double bottom = 0.0;
    double top = -1.0 / 3.0;
};

// Values on a uniform periodic x-grid (x_i = 2 pi i / nx) times an arbitrary y-list, row-major [i*ny + j].
struct ChannelSolution {
    int nx = 0;
    std::vector<double> y;
    std::vector<double> psi;
    std::vector<double> psi_y;
    std::vector<double> psi_xx;

    std::size_t ny() const { return y.size(); }
    double x(int i) const;
    double at(int i, std::size_t j) const { return psi[static_cast<std::size_t>(i) * y.size() + j]; }
};

// Vorticity given column by column: fill out[k] = omega(x_i, z[k]).
struct ColumnSource {
    int nx = 0;
    std::function<void(int i, std::span<const double> z, std::span<double> out)> omega;
    std::vector<double> breakpoints;  // y-locations of kinks or jumps (any column)
};

struct ChannelSamples {
    int nx = 0;
    std::vector<double> y;       // strictly increasing, from 0 to 1
    std::vector<double> values;  // row-major [i*ny + j]
};

// Delta Psi = omega on T x [0,1], Psi(x,0)=bc.bottom, Psi(x,1)=bc.top.
// Panels are Gauss-Legendre on the union of y_out and the breakpoints, so the Green kink and any
// source kink fall on panel edges.
ChannelSolution solve_channel_poisson(const ColumnSource& src, std::span<const double> y_out,
                                      const ChannelBoundary& bc = {}, int panel_order = 8);

// Sampled input: piecewise cubic interpolation in y between kinks, which must be grid nodes.
ChannelSolution solve_channel_poisson(const ChannelSamples& omega, std::span<const double> kinks = {},
                                      const ChannelBoundary& bc = {});

}  // namespace pwaves
