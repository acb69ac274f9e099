#include "pwaves/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "pwaves/errors.hpp"
#include "pwaves/greens.hpp"

namespace pwaves {

Window mu_tilde_window(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw PreconditionError("mu_tilde_window: epsilon out of range");
    return {0.5, std::sqrt(0.25 + epsilon / (1.0 - epsilon))};
}

SpectralParams spectral_params(double epsilon, double mu_tilde, int n) {
    if (n < 1) throw PreconditionError("spectral_params: mode must be >= 1");
    const ShearProfile prof(epsilon, 0.9);
    SpectralParams p;
    p.n = n;
    p.epsilon = epsilon;
    p.mu_tilde = mu_tilde;
    if (!(mu_tilde > 0.5))
        throw PreconditionError("spectral_params: mu > a fails (mu_tilde = " + std::to_string(mu_tilde) +
                                " must exceed 1/2)");
    p.mu = (1.0 - epsilon) * mu_tilde;
    p.lambda_bar = p.mu * p.mu;
    p.lambda = prof.v_varpi() - p.lambda_bar;
    const double disc = epsilon * epsilon - epsilon + p.lambda_bar;
    if (!(disc > 0.0))
        throw PreconditionError("spectral_params: nu is not real (eps^2 - eps + lambda_bar <= 0)");
    const double r = std::sqrt(disc);
    p.nu = epsilon + r;
    p.rho = epsilon - r;
    p.nu_tilde = r / (1.0 - epsilon);
    p.rho_tilde = -p.nu_tilde;
    if (!(p.nu_tilde < 0.5))
        throw PreconditionError("spectral_params: nu < b fails (nu_tilde = " + std::to_string(p.nu_tilde) +
                                " must be below 1/2)");
    p.Cm = 2.0 / (n * std::sinh(double(n)));
    p.Cm_tilde = p.Cm / (1.0 - epsilon);
    return p;
}

double pole_term(Side side, const SpectralParams& p) {
    if (side == Side::left) {
        const double s = p.mu_tilde;
        return std::log((s - 0.5) / (s + 0.5)) / (2.0 * s);
    }
    const double s = p.nu_tilde;
    return std::log((1.0 - s) * (0.5 + s) / ((1.0 + s) * (0.5 - s))) / (2.0 * s);
}

namespace {

// int over the side's half of (sinh(k w~) f(w) - sinh(k/2)) / (w^2 - s^2), w~ = w (left) or 1 - w (right)
double regular_part(Side side, const ModeSolution& f, double s, double tol) {
    const double k = f.wavenumber();
    const double nh = std::sinh(0.5 * k);
    auto integrand = [&](double w) {
        const double t = w - s;
        if (t == 0.0) return 0.0;
        const double arg = side == Side::left ? w : 1.0 - w;
        return (std::sinh(k * arg) * f.value(w) - nh) / (t * (w + s));
    };
    const double lo = side == Side::left ? 0.0 : 0.5, hi = side == Side::left ? 0.5 : 1.0;
    return integrate_endpoint(integrand, lo, hi, tol, "I quadrature (regular part)").value;
}

Mu1Solution cached_mu1() {
    static const Mu1Solution m = solve_mu1();
    return m;
}

}  // namespace

double i_quadrature(Side side, const ModeSolution& f, const SpectralParams& p, double tol) {
    if (f.side() != side) throw PreconditionError("i_quadrature: solution side mismatch");
    if (f.mode() != p.n) throw PreconditionError("i_quadrature: mode mismatch");
    const double s = side == Side::left ? p.mu_tilde : p.nu_tilde;
    if (std::abs(f.pole() - s) > 1e-12) throw PreconditionError("i_quadrature: solution pole does not match params");
    const double nh = std::sinh(0.5 * f.wavenumber());
    return p.Cm_tilde * (regular_part(side, f, s, tol) + nh * pole_term(side, p));
}

JumpCheck cross_check_jump(int n, double epsilon, double mu_tilde, double tol) {
    const SpectralParams p = spectral_params(epsilon, mu_tilde, n);
    const ModeSolution fl = solve_mode_ode(Side::left, n, epsilon, mu_tilde);
    const ModeSolution fr = solve_mode_ode(Side::right, n, epsilon, mu_tilde);
    JumpCheck j;
    j.lhs = (i_quadrature(Side::left, fl, p, tol) + i_quadrature(Side::right, fr, p, tol)) / p.Cm_tilde;
    const double na = n * 0.5 * (1.0 - epsilon);
    j.rhs = 0.5 * std::sinh(na) * (fl.interface_derivative() - fr.interface_derivative()) -
            n * (1.0 - epsilon) * std::cosh(na);
    j.diff = j.lhs - j.rhs;
    return j;
}

DispersionData dispersion(int n, double epsilon, double mu_tilde, double tol) {
    DispersionData d;
    d.params = spectral_params(epsilon, mu_tilde, n);
    const ModeSolution fl = solve_mode_ode(Side::left, n, epsilon, mu_tilde);
    const ModeSolution fr = solve_mode_ode(Side::right, n, epsilon, mu_tilde);
    d.i1 = i_quadrature(Side::left, fl, d.params, tol);
    d.i2 = i_quadrature(Side::right, fr, d.params, tol);
    const double a = 0.5 * (1.0 - epsilon), b = 0.5 * (1.0 + epsilon);
    const double sa = std::sinh(n * a), sb = std::sinh(n * b);
    d.m[0][0] = 1.0 + sb * d.i1;
    d.m[0][1] = sa * d.i2;
    d.m[1][0] = sa * d.i1;
    d.m[1][1] = 1.0 + sb * d.i2;
    d.det = 1.0 + sb * (d.i1 + d.i2) + (sb * sb - sa * sa) * d.i1 * d.i2;
    return d;
}

double determinant(int n, double epsilon, double mu_tilde, double tol) {
    return dispersion(n, epsilon, mu_tilde, tol).det;
}

double mu1_equation(double mu1, double j1, double j2) {
    const double c1 = 2.0 / std::sinh(1.0), sh = std::sinh(0.5);
    return 1.0 + c1 * sh * (j1 + j2) + c1 * sh * sh * std::log((1.0 + 2.0 * mu1) / (1.0 - 2.0 * mu1)) -
           c1 * sh * sh * std::log(3.0);
}

Mu1Solution solve_mu1(double tol) {
    const LimitSolution f0 = solve_f0(1);
    Mu1Solution r;
    r.j1 = regular_part(Side::left, f0.left, 0.5, tol);
    r.j2 = regular_part(Side::right, f0.right, 0.5, tol);
    auto F = [&](double m) { return mu1_equation(m, r.j1, r.j2); };
    const double lo = -0.5 + 1e-14, hi = 0.5 - 1e-14;
    if (!(F(lo) < 0.0 && F(hi) > 0.0))
        throw SolverError("solve_mu1: no sign change on (-1/2, 1/2)");
    auto br = boost::math::tools::bisect(F, lo, hi, boost::math::tools::eps_tolerance<double>(53));
    // pick the bracket end with the smaller residual
    r.mu1 = std::abs(F(br.first)) < std::abs(F(br.second)) ? br.first : br.second;
    r.residual = std::abs(F(r.mu1));
    return r;
}

MuTildeSolution solve_mu_tilde(double epsilon, const KernelOptions& opt) {
    const ShearProfile prof(epsilon, opt.epsilon_max);
    const Window w = mu_tilde_window(epsilon);
    MuTildeSolution s;
    s.epsilon = epsilon;
    s.seed = std::clamp(0.5 + (0.5 + cached_mu1().mu1) * epsilon, w.lo, w.hi);
    auto det = [&](double m) { return determinant(1, epsilon, m, opt.quad_tol); };

    const int n = std::max(opt.scan_points, 4);
    std::vector<double> xs, ds;
    for (int i = 1; i < n; ++i) {
        const double r = double(i) / n;
        xs.push_back(w.lo + (w.hi - w.lo) * r * r);
        ds.push_back(det(xs.back()));
    }
    s.det_lo = ds.front();
    s.det_hi = ds.back();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (ds[i] == 0.0) {
            s.roots.push_back(xs[i]);
            ++s.sign_changes;
            continue;
        }
        if ((ds[i] < 0.0) == (ds[i + 1] < 0.0) || ds[i + 1] == 0.0) continue;
        ++s.sign_changes;
        std::uintmax_t iters = 200;
        auto br = boost::math::tools::toms748_solve(det, xs[i], xs[i + 1], ds[i], ds[i + 1],
                                                    boost::math::tools::eps_tolerance<double>(52), iters);
        const double d1 = std::abs(det(br.first)), d2 = std::abs(det(br.second));
        s.roots.push_back(d1 <= d2 ? br.first : br.second);
    }
    if (s.roots.empty())
        throw SolverError("solve_mu_tilde: no determinant root in the admissible window (det = " +
                          std::to_string(s.det_lo) + " near 1/2, " + std::to_string(s.det_hi) + " near the top)");
    s.mu_tilde = *std::min_element(s.roots.begin(), s.roots.end(), [&](double p, double q) {
        return std::abs(p - s.seed) < std::abs(q - s.seed);
    });
    s.det = det(s.mu_tilde);
    return s;
}

Amplitudes amplitudes(double epsilon, double mu_tilde_star, double tol, bool require_singular) {
    const DispersionData d = dispersion(1, epsilon, mu_tilde_star, tol);
    Eigen::Matrix2d m;
    m << d.m[0][0], d.m[0][1], d.m[1][0], d.m[1][1];
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullV);
    Amplitudes a;
    a.sigma_max = svd.singularValues()(0);
    a.sigma_min = svd.singularValues()(1);
    if (require_singular && a.sigma_min > 1e-6 * a.sigma_max)
        throw SolverError("amplitudes: dispersion matrix is not singular (sigma_min/sigma_max = " +
                          std::to_string(a.sigma_min / a.sigma_max) + ")");
    Eigen::Vector2d v = svd.matrixV().col(1);
    if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0)) v = -v;
    v.normalize();
    a.A = v(0);
    a.B = v(1);
    a.null_residual = (m * v).norm() / a.sigma_max;
    return a;
}

KernelMode::KernelMode(double epsilon, double mu_tilde, double mu1, const KernelOptions& opt, bool require_root)
    : profile_(epsilon, opt.epsilon_max),
      params_(spectral_params(epsilon, mu_tilde, 1)),
      mu1_(mu1),
      amp_(pwaves::amplitudes(epsilon, mu_tilde, opt.quad_tol, require_root)),
      det_(determinant(1, epsilon, mu_tilde, opt.quad_tol)),
      left_(solve_mode_ode(Side::left, 1, epsilon, mu_tilde)),
      right_(solve_mode_ode(Side::right, 1, epsilon, mu_tilde)) {}

double KernelMode::mu2_empirical() const {
    const double e = epsilon(), l = std::log(e);
    return (params_.mu_tilde - 0.5 - (0.5 + mu1_) * e) / (e * e * l * l);
}

double KernelMode::h(double y) const {
    const double e = epsilon();
    if (y <= profile_.a()) {
        if (y < -1e-12) throw PreconditionError("h: y below 0");
        const double x = y / (1.0 - e);
        return amp_.A * left_.value(x) / ((y - params_.mu) * (y + params_.mu));
    }
    if (y >= profile_.b()) {
        if (y > 1.0 + 1e-12) throw PreconditionError("h: y above 1");
        const double x = (y - e) / (1.0 - e);
        return amp_.B * right_.value(x) / ((y - params_.nu) * (y - params_.rho));
    }
    throw PreconditionError("h: y = " + std::to_string(y) + " lies in the plateau (a,b)");
}

double KernelMode::h_prime(double y) const {
    const double e = epsilon();
    if (y <= profile_.a()) {
        const double x = y / (1.0 - e);
        const double d = (y - params_.mu) * (y + params_.mu);
        return amp_.A * (left_.derivative(x) / ((1.0 - e) * d) - left_.value(x) * 2.0 * y / (d * d));
    }
    if (y >= profile_.b()) {
        const double x = (y - e) / (1.0 - e);
        const double d = (y - params_.nu) * (y - params_.rho);
        const double dd = 2.0 * y - params_.nu - params_.rho;
        return amp_.B * (right_.derivative(x) / ((1.0 - e) * d) - right_.value(x) * dd / (d * d));
    }
    throw PreconditionError("h_prime: y = " + std::to_string(y) + " lies in the plateau (a,b)");
}

KernelMode assemble_kernel_mode(double epsilon, const KernelOptions& opt) {
    const ShearProfile prof(epsilon, opt.epsilon_max);
    const MuTildeSolution root = solve_mu_tilde(epsilon, opt);
    return KernelMode(epsilon, root.mu_tilde, cached_mu1().mu1, opt, true);
}

std::vector<double> band_grid(const ShearProfile& p, int points) {
    if (points < 8) throw PreconditionError("band_grid: need at least 8 points");
    const int nl = points / 2, nr = points - nl;
    std::vector<double> y;
    for (int i = 0; i < nl; ++i) y.push_back(p.a() * i / (nl - 1));
    for (int i = 0; i < nr; ++i) y.push_back(p.b() + (1.0 - p.b()) * i / (nr - 1));
    y.back() = 1.0;
    return y;
}

namespace {

// 2 int_{[0,a] u [b,1]} G_n(y,z) h(z) dz
double band_green_integral(const ShearProfile& p, const RealFn& h, int n, double y, double tol) {
    auto f = [&](double z) { return green(n, y, z) * h(z); };
    QuadOptions opt;
    opt.tol = tol;
    const double br[] = {y};
    return 2.0 * (integrate_split(f, 0.0, p.a(), br, opt, "band integral").value +
                  integrate_split(f, p.b(), 1.0, br, opt, "band integral").value);
}

void check_band(const ShearProfile& p, double y) {
    if (!(y >= 0.0 && y <= 1.0) || (y > p.a() && y < p.b()))
        throw PreconditionError("point " + std::to_string(y) + " is not in [0,a] u [b,1]");
}

}  // namespace

double integral_residual(const ShearProfile& p, double lambda_bar, const RealFn& h, std::span<const double> y,
                         double tol) {
    const double e = p.epsilon();
    double sup = 0.0;
    for (double yy : y) {
        check_band(p, yy);
        const double c = yy <= p.a() ? yy * yy - lambda_bar : yy * yy - 2.0 * e * yy + e - lambda_bar;
        sup = std::max(sup, std::abs(c * h(yy) + band_green_integral(p, h, 1, yy, tol)));
    }
    return sup;
}

double integral_residual(const KernelMode& mode, int grid_points, double tol) {
    const auto y = band_grid(mode.profile(), grid_points);
    return integral_residual(mode.profile(), mode.lambda_bar(), [&](double z) { return mode.h(z); }, y, tol);
}

std::vector<double> linear_operator_apply(const ShearProfile& p, double lambda, const RealFn& h, int n,
                                          std::span<const double> y, double tol) {
    std::vector<double> out;
    out.reserve(y.size());
    for (double yy : y) {
        check_band(p, yy);
        out.push_back((lambda - p.psi0_prime(yy)) * h(yy) + band_green_integral(p, h, n, yy, tol));
    }
    return out;
}

std::vector<double> linear_operator_apply(const ShearProfile& p, double lambda, std::span<const double> grid,
                                          std::span<const double> h, int n) {
    if (grid.size() != h.size()) throw PreconditionError("linear_operator_apply: size mismatch");
    std::vector<std::size_t> left, right;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        check_band(p, grid[i]);
        if (i > 0 && !(grid[i] > grid[i - 1])) throw PreconditionError("linear_operator_apply: grid not increasing");
        (grid[i] <= p.a() ? left : right).push_back(i);
    }
    if ((!left.empty() && left.size() < 4) || (!right.empty() && right.size() < 4))
        throw PreconditionError("linear_operator_apply: each sampled band needs >= 4 points");

    const GaussRule& rule = gauss_legendre(8);
    struct Node {
        double z, w, hv;
    };
    std::vector<Node> nodes;
    auto add_band = [&](const std::vector<std::size_t>& idx) {
        const std::size_t m = idx.size();
        for (std::size_t c = 0; c + 1 < m; ++c) {
            const double z0 = grid[idx[c]], z1 = grid[idx[c + 1]];
            std::size_t lo = c > 0 ? c - 1 : 0;
            std::size_t hi = std::min(lo + 3, m - 1);
            lo = hi - 3;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double z = 0.5 * (z0 + z1) + 0.5 * (z1 - z0) * rule.nodes[k];
                double v = 0.0;
                for (std::size_t a = lo; a <= hi; ++a) {
                    double l = 1.0;
                    for (std::size_t b = lo; b <= hi; ++b)
                        if (b != a) l *= (z - grid[idx[b]]) / (grid[idx[a]] - grid[idx[b]]);
                    v += l * h[idx[a]];
                }
                nodes.push_back({z, 0.5 * (z1 - z0) * rule.weights[k], v});
            }
        }
    };
    if (!left.empty()) add_band(left);
    if (!right.empty()) add_band(right);

    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double acc = 0.0;
        for (const auto& nd : nodes) acc += nd.w * green(n, grid[i], nd.z) * nd.hv;
        out[i] = (lambda - p.psi0_prime(grid[i])) * h[i] + 2.0 * acc;
    }
    return out;
}

double operator_inner(const ShearProfile& p, double lambda, const RealFn& h, const RealFn& g, int n, double tol) {
    auto outer = [&](double y) {
        return g(y) * ((lambda - p.psi0_prime(y)) * h(y) + band_green_integral(p, h, n, y, 0.01 * tol));
    };
    QuadOptions opt;
    opt.tol = tol;
    return integrate(outer, 0.0, p.a(), opt, "operator_inner").value +
           integrate(outer, p.b(), 1.0, opt, "operator_inner").value;
}

}  // namespace pwaves
