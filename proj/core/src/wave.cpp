#include "pwaves/wave.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "pwaves/errors.hpp"
#include "pwaves/greens.hpp"
#include "pwaves/quadrature.hpp"
#include "pwaves/spectra.hpp"

namespace pwaves {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> unique_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

Displacement::Displacement(const KernelMode& mode, double sigma) : mode_(&mode), sigma_(sigma) {
    if (!std::isfinite(sigma) || !(std::abs(sigma) < 0.5))
        throw PreconditionError("displacement: amplitude too large, need |sigma| * sup|hhat'| < 1/2 with sup|hhat'| = 1");
    const ShearProfile& p = mode.profile();
    double dmax = 0.0, hmax = 0.0;
    for (auto [lo, hi] : {std::pair{0.0, p.a()}, std::pair{p.b(), 1.0}}) {
        for (double y : chebyshev_grid(lo, hi, 2049)) {
            dmax = std::max(dmax, std::abs(mode.h_prime(y)));
            hmax = std::max(hmax, std::abs(mode.h(y)));
        }
    }
    if (!(dmax > 0.0)) throw SolverError("displacement: kernel profile is identically zero");
    scale_ = 1.0 / dmax;
    sup_h_ = hmax * scale_;
}

double Displacement::operator()(double x, double y) const {
    const double s = y < 0.0 ? -1.0 : 1.0;
    return s * sigma_ * hhat(std::abs(y)) * std::cos(x);
}

double Displacement::invert(double x, double z, bool upper) const {
    const ShearProfile& p = profile();
    double lo = upper ? p.b() : 0.0, hi = upper ? 1.0 : p.a();
    const double c = sigma_ * std::cos(x);
    auto g = [&](double y) { return y + c * hhat(y) - z; };
    double glo = g(lo), ghi = g(hi);
    if (glo > 1e-13 || ghi < -1e-13) throw SolverError("invert: target outside the displaced band");
    if (glo >= 0.0) return lo;
    if (ghi <= 0.0) return hi;
    double y = std::clamp(z, lo, hi);
    for (int it = 0; it < 100; ++it) {
        const double gy = g(y);
        if (gy == 0.0) return y;
        (gy < 0.0 ? lo : hi) = y;
        const double step = gy / (1.0 + c * hhat_prime(y));
        double next = y - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - y) <= 1e-16 * std::max(1.0, std::abs(y)) || hi - lo <= 4e-16) return next;
        y = next;
    }
    throw SolverError("invert: no convergence");
}

double pushed_vorticity(const Displacement& f, double x, double z) {
    const ShearProfile& p = f.profile();
    const double za = p.a() + f(x, p.a()), zb = p.b() + f(x, p.b());
    if (z < za) return -2.0 * f.invert(x, z, false);
    if (z > zb) return -2.0 * (f.invert(x, z, true) - p.b()) - 2.0 * p.a();
    return -2.0 * p.a();
}

std::vector<double> vorticity_breaks(const Displacement& f, double x) {
    const ShearProfile& p = f.profile();
    return unique_sorted({p.a(), p.b(), p.a() + f(x, p.a()), p.b() + f(x, p.b())});
}

WaveField push_forward_vorticity(const KernelMode& mode, double sigma, int nx, int ny) {
    if (nx < 16 || ny < 3) throw PreconditionError("push_forward_vorticity: need nx >= 16 and ny >= 3");
    auto f = std::make_shared<const Displacement>(mode, sigma);
    WaveField w;
    w.epsilon = mode.epsilon();
    w.sigma = sigma;
    w.lambda = mode.lambda_star();
    w.mu_tilde = mode.mu_tilde_star();
    w.nx = nx;
    w.ny = ny;
    for (int i = 0; i < nx; ++i) w.x.push_back(kTwoPi * i / nx);
    for (int j = 0; j < ny; ++j) w.y.push_back(-1.0 + 2.0 * j / (ny - 1));
    w.y.back() = 1.0;
    w.omega_at = [f](double x, double y) {
        return y < 0.0 ? -pushed_vorticity(*f, x, -y) : pushed_vorticity(*f, x, y);
    };
    w.breaks = [f](double x) {
        std::vector<double> b = vorticity_breaks(*f, x);
        const std::size_t n = b.size();
        for (std::size_t k = 0; k < n; ++k) b.push_back(-b[k]);
        b.push_back(0.0);
        return unique_sorted(std::move(b));
    };
    w.omega.resize(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) w.omega[static_cast<std::size_t>(i) * ny + j] = w.omega_at(w.x[i], w.y[j]);
    return w;
}

WaveField with_stream_function(WaveField w) {
    std::vector<double> half{0.0, 1.0};
    for (double y : w.y) half.push_back(std::min(std::abs(y), 1.0));
    half = unique_sorted(std::move(half));
    ColumnSource src;
    src.nx = w.nx;
    src.omega = [&w](int i, std::span<const double> z, std::span<double> out) {
        for (std::size_t k = 0; k < z.size(); ++k) out[k] = w.omega_at(w.x[i], z[k]);
    };
    for (double x : w.x)
        for (double b : w.breaks(x))
            if (b > 0.0 && b < 1.0) src.breakpoints.push_back(b);
    src.breakpoints = unique_sorted(std::move(src.breakpoints));
    const ChannelSolution sol = solve_channel_poisson(src, half, ChannelBoundary{});
    w.psi.resize(static_cast<std::size_t>(w.nx) * w.ny);
    for (int i = 0; i < w.nx; ++i) {
        for (int j = 0; j < w.ny; ++j) {
            const double ay = std::min(std::abs(w.y[j]), 1.0);
            const auto k = static_cast<std::size_t>(std::lower_bound(half.begin(), half.end(), ay) - half.begin());
            const double v = sol.at(i, k);
            w.psi[static_cast<std::size_t>(i) * w.ny + j] = w.y[j] < 0.0 ? -v : v;
        }
    }
    return w;
}

WaveField assemble_wave_field(const KernelMode& mode, double sigma, int nx, int ny) {
    return with_stream_function(push_forward_vorticity(mode, sigma, nx, ny));
}

WaveField poiseuille_field(int nx, int ny) {
    if (nx < 16 || ny < 3) throw PreconditionError("poiseuille_field: need nx >= 16 and ny >= 3");
    WaveField w;
    w.nx = nx;
    w.ny = ny;
    for (int i = 0; i < nx; ++i) w.x.push_back(kTwoPi * i / nx);
    for (int j = 0; j < ny; ++j) w.y.push_back(-1.0 + 2.0 * j / (ny - 1));
    w.y.back() = 1.0;
    w.omega_at = [](double, double y) { return -2.0 * y; };
    w.breaks = [](double) { return std::vector<double>{0.0}; };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            w.omega.push_back(-2.0 * w.y[j]);
            w.psi.push_back(-w.y[j] * w.y[j] * w.y[j] / 3.0);
        }
    }
    return w;
}

std::vector<double> nonlinear_residuals(const KernelMode& mode, double sigma, std::span<const double> lambdas,
                                        const ResidualOptions& opt) {
    if (opt.nx < 16 || opt.ny < 3) throw PreconditionError("nonlinear_residual: need nx >= 16 and ny >= 3");
    const Displacement f(mode, sigma);
    const ShearProfile& p = mode.profile();
    const int nx = opt.nx;
    std::vector<double> x(nx), y(opt.ny);
    for (int i = 0; i < nx; ++i) x[i] = kTwoPi * i / nx;
    for (int j = 0; j < opt.ny; ++j) y[j] = static_cast<double>(j) / (opt.ny - 1);
    // the band edges carry the largest displacement gradient, so they are always rows
    y.push_back(p.a());
    y.push_back(p.b());
    y = unique_sorted(std::move(y));

    // Psi_f = Psi_0 + Psi_p with Delta Psi_p = omega_f - varpi and zero boundary data.
    auto pert = [&](double xx, double z) { return pushed_vorticity(f, xx, z) - p.varpi(z); };
    ColumnSource src;
    src.nx = nx;
    src.omega = [&](int i, std::span<const double> z, std::span<double> out) {
        for (std::size_t k = 0; k < z.size(); ++k) out[k] = pert(x[i], z[k]);
    };
    for (double xx : x)
        for (double b : vorticity_breaks(f, xx))
            if (b > 0.0 && b < 1.0) src.breakpoints.push_back(b);
    src.breakpoints = unique_sorted(std::move(src.breakpoints));
    const ChannelSolution sol = solve_channel_poisson(src, y, ChannelBoundary{0.0, 0.0}, opt.panel_order);

    const auto ny = static_cast<int>(y.size());
    std::vector<double> out(lambdas.size(), 0.0);
    std::vector<double> bar(nx), d(nx);
    for (int j = 0; j < ny; ++j) {
        if (!mode.in_bands(y[j])) continue;
        double mean = 0.0;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(i) * ny + j;
            d[i] = f(x[i], y[j]);
            const double pyy = pert(x[i], y[j]) - sol.psi_xx[k];
            bar[i] = p.psi0(y[j] + d[i]) + sol.psi[k] + d[i] * sol.psi_y[k] + 0.5 * d[i] * d[i] * pyy;
            mean += bar[i];
        }
        mean /= nx;
        for (std::size_t l = 0; l < lambdas.size(); ++l)
            for (int i = 0; i < nx; ++i) out[l] = std::max(out[l], std::abs(lambdas[l] * d[i] - (bar[i] - mean)));
    }
    return out;
}

double nonlinear_residual(const KernelMode& mode, double sigma, const ResidualOptions& opt) {
    const double l[] = {mode.lambda_star()};
    return nonlinear_residuals(mode, sigma, l, opt)[0];
}

double loglog_slope(std::span<const double> s, std::span<const double> v) {
    if (s.size() != v.size() || s.size() < 2) throw PreconditionError("loglog_slope: need matching samples");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0 && v[i] > 0.0)) throw PreconditionError("loglog_slope: samples must be positive");
        mx += std::log(s[i]) / n;
        my += std::log(v[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dx = std::log(s[i]) - mx;
        sxy += dx * (std::log(v[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ResidualScaling residual_scaling(const KernelMode& mode, std::span<const double> sigmas, double control_offset,
                                 const ResidualOptions& opt) {
    ResidualScaling r;
    const double l[] = {mode.lambda_star(), mode.lambda_star() + control_offset};
    for (double s : sigmas) {
        const auto v = nonlinear_residuals(mode, s, l, opt);
        r.sigma.push_back(s);
        r.residual.push_back(v[0]);
        r.control.push_back(v[1]);
    }
    r.slope = loglog_slope(r.sigma, r.residual);
    r.control_slope = loglog_slope(r.sigma, r.control);
    return r;
}

namespace {

std::vector<double> inner_breaks(const WaveField& w, double x, double lo, double hi) {
    std::vector<double> out;
    for (double b : w.breaks(x))
        if (b > lo && b < hi) out.push_back(b);
    return out;
}

// int_lo^hi g(omega(x,y), y) dy along a column, split at the vorticity kinks.
template <class G>
double column_integral(const WaveField& w, double x, double lo, double hi, G g, double tol) {
    QuadOptions q;
    q.tol = tol;
    const auto br = inner_breaks(w, x, lo, hi);
    return integrate_split([&](double y) { return g(w.omega_at(x, y), y); }, lo, hi, br, q, "sobolev column").value;
}

}  // namespace

SobolevDistance sobolev_distance(const WaveField& w, double gamma, const SobolevOptions& opt) {
    if (!(gamma >= 0.0 && gamma < 1.5)) throw PreconditionError("sobolev_distance: gamma must lie in [0, 3/2)");
    if (opt.cells < 4 || opt.l2_columns < 4) throw PreconditionError("sobolev_distance: grid too coarse");
    if (!w.omega_at) throw PreconditionError("sobolev_distance: field has no vorticity evaluator");
    SobolevDistance r;
    r.gamma = gamma;

    double l2 = 0.0;
    for (int k = 0; k < opt.l2_columns; ++k) {
        const double x = kTwoPi * k / opt.l2_columns;
        l2 += column_integral(w, x, -1.0, 1.0, [](double om, double y) { return (om + 2.0 * y) * (om + 2.0 * y); },
                              opt.tol);
    }
    r.l2 = std::sqrt(l2 * kTwoPi / opt.l2_columns);

    if (gamma == 0.0) {
        r.total = r.l2;
        return r;
    }

    const int n = opt.cells;
    const double dx = kTwoPi / n, dy = 2.0 / n, area = dx * dy;
    auto xe = [&](int p) { return dx * p; };
    auto ye = [&](int q) { return q == n ? 1.0 : -1.0 + dy * q; };
    const bool grad = gamma >= 1.0;
    const double s = grad ? gamma - 1.0 : gamma;
    const int comps = grad ? 2 : 1;
    // cell averages, [comp][p*n + q]
    std::vector<std::vector<double>> avg(comps, std::vector<double>(static_cast<std::size_t>(n) * n));
    QuadOptions q;
    q.tol = opt.tol;

    if (grad) {
        // divergence theorem on each cell: edge integrals of omega
        std::vector<double> vert(static_cast<std::size_t>(n) * n), horiz(static_cast<std::size_t>(n) * (n + 1));
        for (int p = 0; p < n; ++p)
            for (int j = 0; j < n; ++j)
                vert[static_cast<std::size_t>(p) * n + j] =
                    column_integral(w, xe(p), ye(j), ye(j + 1), [](double om, double) { return om; }, opt.tol);
        for (int p = 0; p < n; ++p)
            for (int j = 0; j <= n; ++j) {
                const double yy = ye(j);
                horiz[static_cast<std::size_t>(p) * (n + 1) + j] =
                    integrate([&](double x) { return w.omega_at(x, yy); }, xe(p), xe(p + 1), q, "sobolev edge").value;
            }
        for (int p = 0; p < n; ++p) {
            const int pn = (p + 1) % n;
            for (int j = 0; j < n; ++j) {
                const std::size_t c = static_cast<std::size_t>(p) * n + j;
                avg[0][c] = (vert[static_cast<std::size_t>(pn) * n + j] - vert[c]) / area;
                avg[1][c] = (horiz[static_cast<std::size_t>(p) * (n + 1) + j + 1] -
                             horiz[static_cast<std::size_t>(p) * (n + 1) + j]) / area + 2.0;
            }
        }
    } else {
        const auto gl = gauss_legendre(8);
        for (int p = 0; p < n; ++p)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
                    const double x = xe(p) + 0.5 * dx * (gl.nodes[k] + 1.0);
                    acc += 0.5 * dx * gl.weights[k] *
                           column_integral(w, x, ye(j), ye(j + 1), [](double om, double y) { return om + 2.0 * y; },
                                           opt.tol);
                }
                avg[0][static_cast<std::size_t>(p) * n + j] = acc / area;
            }
    }

    if (gamma == 1.0) {
        double g2 = 0.0;
        for (int c = 0; c < comps; ++c)
            for (double v : avg[c]) g2 += v * v * area;
        r.seminorm = std::sqrt(g2);
    } else {
        // periodic kernel on offsets (dp, dq), dq shifted by n-1
        const int m = 2 * n - 1;
        std::vector<double> ker(static_cast<std::size_t>(n) * m);
        for (int dp = 0; dp < n; ++dp)
            for (int dq = -(n - 1); dq <= n - 1; ++dq) {
                const double sx = std::sin(0.5 * dp * dx), yy = dq * dy;
                const double d2 = sx * sx + yy * yy;
                ker[static_cast<std::size_t>(dp) * m + dq + n - 1] = d2 > 0.0 ? std::pow(d2, -(1.0 + s)) : 0.0;
            }
        double sum = 0.0;
        for (int c = 0; c < comps; ++c) {
            const auto& a = avg[c];
            for (int p1 = 0; p1 < n; ++p1)
                for (int q1 = 0; q1 < n; ++q1) {
                    const double v1 = a[static_cast<std::size_t>(p1) * n + q1];
                    for (int p2 = 0; p2 < n; ++p2) {
                        const int dp = (p1 - p2 + n) % n;
                        const double* kr = &ker[static_cast<std::size_t>(dp) * m + n - 1 + q1];
                        const double* a2 = &a[static_cast<std::size_t>(p2) * n];
                        for (int q2 = 0; q2 < n; ++q2) {
                            const double dv = v1 - a2[q2];
                            sum += dv * dv * kr[-q2];
                        }
                    }
                }
        }
        r.seminorm = std::sqrt(sum * area * area);
    }
    r.total = r.l2 + r.seminorm;
    return r;
}

}  // namespace pwaves
