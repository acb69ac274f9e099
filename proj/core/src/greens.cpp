#include "pwaves/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pwaves/errors.hpp"

namespace pwaves {

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw PreconditionError(std::string(name) + " = " + std::to_string(v) + " outside [0,1]");
}

// sinh(p) sinh(q) / (n sinh n) for p + q <= n, without overflow.
double sinh_ratio(int n, double p, double q) {
    const double nn = n;
    return std::exp(p + q - nn) * (-std::expm1(-2.0 * p)) * (-std::expm1(-2.0 * q)) /
           (2.0 * nn * (-std::expm1(-2.0 * nn)));
}

}  // namespace

double green(int n, double y, double z) {
    if (n < 1) throw PreconditionError("green: n must be >= 1 (use green0 for n = 0)");
    check_unit(y, "y");
    check_unit(z, "z");
    if (z > y) std::swap(y, z);
    return sinh_ratio(n, n * (1.0 - y), n * z);
}

double green0(double y, double z) {
    check_unit(y, "y");
    check_unit(z, "z");
    if (z > y) std::swap(y, z);
    return z * (1.0 - y);
}

double greens_distributional_check(int n, double z, const RealFn& phi, const RealFn& phi_dd,
                                   const QuadOptions& opt) {
    const double n2 = double(n) * n;
    auto f = [&](double y) { return green(n, y, z) * (phi_dd(y) - n2 * phi(y)); };
    const double br[] = {z};
    return integrate_split(f, 0.0, 1.0, br, opt, "greens_distributional_check").value;
}

std::vector<double> solve_mode(int n, const RealFn& g, std::span<const double> y, const QuadOptions& opt) {
    if (n < 1) throw PreconditionError("solve_mode: n must be >= 1");
    std::vector<double> out;
    out.reserve(y.size());
    for (double yy : y) {
        check_unit(yy, "y");
        auto f = [&](double z) { return green(n, yy, z) * g(z); };
        const double br[] = {yy};
        out.push_back(integrate_split(f, 0.0, 1.0, br, opt, "solve_mode").value);
    }
    return out;
}

double ChannelSolution::x(int i) const { return 2.0 * std::numbers::pi * i / nx; }

ChannelSolution solve_channel_poisson(const ColumnSource& src, std::span<const double> y_out,
                                      const ChannelBoundary& bc, int panel_order) {
    const int nx = src.nx;
    if (nx / 2 < 8) throw PreconditionError("solve_channel_poisson: fewer than 8 x-modes (nx < 16)");
    if (!src.omega) throw PreconditionError("solve_channel_poisson: empty vorticity source");
    for (double v : y_out) check_unit(v, "y_out");

    std::vector<double> pts(y_out.begin(), y_out.end());
    for (double v : src.breakpoints)
        if (v > 0.0 && v < 1.0) pts.push_back(v);
    pts.push_back(0.0);
    pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    std::vector<double> uniq;
    for (double v : pts)
        if (uniq.empty() || v - uniq.back() > 1e-13) uniq.push_back(v);
    uniq.back() = 1.0;
    pts.swap(uniq);
    const std::size_t np = pts.size();

    std::vector<std::size_t> out_idx;
    for (double v : y_out) {
        auto it = std::lower_bound(pts.begin(), pts.end(), v - 1e-13);
        out_idx.push_back(static_cast<std::size_t>(it - pts.begin()));
    }

    const GaussRule& rule = gauss_legendre(panel_order);
    const std::size_t q = rule.nodes.size();
    const std::size_t nodes = (np - 1) * q;
    std::vector<double> z(nodes), w(nodes);
    for (std::size_t p = 0; p + 1 < np; ++p) {
        const double mid = 0.5 * (pts[p] + pts[p + 1]), half = 0.5 * (pts[p + 1] - pts[p]);
        for (std::size_t k = 0; k < q; ++k) {
            z[p * q + k] = mid + half * rule.nodes[k];
            w[p * q + k] = half * rule.weights[k];
        }
    }

    const int m_top = nx / 2;
    std::vector<double> cs(static_cast<std::size_t>(nx) * (m_top + 1)), sn(cs.size());
    for (int i = 0; i < nx; ++i)
        for (int n = 0; n <= m_top; ++n) {
            const double arg = 2.0 * std::numbers::pi * double((static_cast<long>(i) * n) % nx) / nx;
            cs[static_cast<std::size_t>(i) * (m_top + 1) + n] = std::cos(arg);
            sn[static_cast<std::size_t>(i) * (m_top + 1) + n] = std::sin(arg);
        }

    // cosine / sine coefficients per node: coef[(n * nodes + k)]
    std::vector<double> cc(static_cast<std::size_t>(m_top + 1) * nodes, 0.0), ss(cc.size(), 0.0);
    std::vector<double> col(nodes);
    for (int i = 0; i < nx; ++i) {
        src.omega(i, z, col);
        for (int n = 0; n <= m_top; ++n) {
            const double c = cs[static_cast<std::size_t>(i) * (m_top + 1) + n] / nx;
            const double s = sn[static_cast<std::size_t>(i) * (m_top + 1) + n] / nx;
            double* pc = &cc[static_cast<std::size_t>(n) * nodes];
            double* ps = &ss[static_cast<std::size_t>(n) * nodes];
            for (std::size_t k = 0; k < nodes; ++k) {
                pc[k] += c * col[k];
                ps[k] += s * col[k];
            }
        }
    }

    const std::size_t ny = y_out.size();
    // per-mode profiles at the panel points
    std::vector<double> mc(static_cast<std::size_t>(m_top + 1) * np), ms(mc.size()), dc(mc.size()), ds(mc.size());
    std::vector<double> wl(nodes), wr(nodes), lc(np), ls(np), rc(np), rs(np);
    for (int n = 0; n <= m_top; ++n) {
        const double nn = n;
        for (std::size_t p = 0; p + 1 < np; ++p)
            for (std::size_t k = 0; k < q; ++k) {
                const std::size_t id = p * q + k;
                if (n == 0) {
                    wl[id] = w[id] * z[id];
                    wr[id] = w[id] * (1.0 - z[id]);
                } else {
                    wl[id] = w[id] * std::exp(-nn * (pts[p + 1] - z[id])) * (-std::expm1(-2.0 * nn * z[id]));
                    wr[id] = w[id] * std::exp(-nn * (z[id] - pts[p])) * (-std::expm1(-2.0 * nn * (1.0 - z[id])));
                }
            }
        const double* gc = &cc[static_cast<std::size_t>(n) * nodes];
        const double* gs = &ss[static_cast<std::size_t>(n) * nodes];
        lc[0] = ls[0] = 0.0;
        for (std::size_t p = 0; p + 1 < np; ++p) {
            const double decay = n == 0 ? 1.0 : std::exp(-nn * (pts[p + 1] - pts[p]));
            double ac = 0.0, as = 0.0;
            for (std::size_t k = 0; k < q; ++k) {
                ac += wl[p * q + k] * gc[p * q + k];
                as += wl[p * q + k] * gs[p * q + k];
            }
            lc[p + 1] = decay * lc[p] + ac;
            ls[p + 1] = decay * ls[p] + as;
        }
        rc[np - 1] = rs[np - 1] = 0.0;
        for (std::size_t p = np - 1; p-- > 0;) {
            const double decay = n == 0 ? 1.0 : std::exp(-nn * (pts[p + 1] - pts[p]));
            double ac = 0.0, as = 0.0;
            for (std::size_t k = 0; k < q; ++k) {
                ac += wr[p * q + k] * gc[p * q + k];
                as += wr[p * q + k] * gs[p * q + k];
            }
            rc[p] = decay * rc[p + 1] + ac;
            rs[p] = decay * rs[p + 1] + as;
        }
        for (std::size_t k = 0; k < np; ++k) {
            const double y = pts[k];
            const std::size_t id = static_cast<std::size_t>(n) * np + k;
            if (n == 0) {
                mc[id] = -((1.0 - y) * lc[k] + y * rc[k]);
                dc[id] = -(-lc[k] + rc[k]);
                ms[id] = ds[id] = 0.0;
            } else {
                const double den = -std::expm1(-2.0 * nn);
                const double e1 = std::exp(-2.0 * nn * (1.0 - y)), e0 = std::exp(-2.0 * nn * y);
                mc[id] = -((1.0 - e1) * lc[k] + (1.0 - e0) * rc[k]) / (2.0 * nn * den);
                ms[id] = -((1.0 - e1) * ls[k] + (1.0 - e0) * rs[k]) / (2.0 * nn * den);
                dc[id] = -(-(1.0 + e1) * lc[k] + (1.0 + e0) * rc[k]) / (2.0 * den);
                ds[id] = -(-(1.0 + e1) * ls[k] + (1.0 + e0) * rs[k]) / (2.0 * den);
            }
        }
    }

    ChannelSolution out;
    out.nx = nx;
    out.y.assign(y_out.begin(), y_out.end());
    out.psi.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    out.psi_y.assign(out.psi.size(), 0.0);
    out.psi_xx.assign(out.psi.size(), 0.0);
    const bool even = nx % 2 == 0;
    for (int i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t k = out_idx[j];
            const double y = pts[k];
            double v = mc[k] + bc.bottom + (bc.top - bc.bottom) * y;
            double vy = dc[k] + (bc.top - bc.bottom);
            double vxx = 0.0;
            for (int n = 1; n <= m_top; ++n) {
                const double mult = (even && n == m_top) ? 1.0 : 2.0;
                const double c = cs[static_cast<std::size_t>(i) * (m_top + 1) + n];
                const double s = sn[static_cast<std::size_t>(i) * (m_top + 1) + n];
                const std::size_t id = static_cast<std::size_t>(n) * np + k;
                const double val = mult * (mc[id] * c + ms[id] * s);
                v += val;
                vy += mult * (dc[id] * c + ds[id] * s);
                vxx -= double(n) * n * val;
            }
            const std::size_t o = static_cast<std::size_t>(i) * ny + j;
            out.psi[o] = v;
            out.psi_y[o] = vy;
            out.psi_xx[o] = vxx;
        }
    }
    return out;
}

ChannelSolution solve_channel_poisson(const ChannelSamples& omega, std::span<const double> kinks,
                                      const ChannelBoundary& bc) {
    const auto& y = omega.y;
    const std::size_t ny = y.size();
    if (ny < 4) throw PreconditionError("solve_channel_poisson: need at least 4 y-samples");
    if (std::abs(y.front()) > 1e-14 || std::abs(y.back() - 1.0) > 1e-14)
        throw PreconditionError("solve_channel_poisson: y-grid must include 0 and 1");
    for (std::size_t j = 1; j < ny; ++j)
        if (!(y[j] > y[j - 1])) throw PreconditionError("solve_channel_poisson: y-grid not increasing");
    if (omega.values.size() != static_cast<std::size_t>(omega.nx) * ny)
        throw PreconditionError("solve_channel_poisson: sample count mismatch");

    // segment boundaries as node indices
    std::vector<std::size_t> seg{0, ny - 1};
    for (double kk : kinks) {
        auto it = std::lower_bound(y.begin(), y.end(), kk - 1e-12);
        if (it == y.end() || std::abs(*it - kk) > 1e-12)
            throw PreconditionError("solve_channel_poisson: kink " + std::to_string(kk) + " is not a grid node");
        seg.push_back(static_cast<std::size_t>(it - y.begin()));
    }
    std::sort(seg.begin(), seg.end());
    seg.erase(std::unique(seg.begin(), seg.end()), seg.end());

    ColumnSource src;
    src.nx = omega.nx;
    src.omega = [&](int i, std::span<const double> z, std::span<double> out) {
        const double* v = &omega.values[static_cast<std::size_t>(i) * ny];
        for (std::size_t k = 0; k < z.size(); ++k) {
            const double zz = z[k];
            std::size_t c = static_cast<std::size_t>(std::upper_bound(y.begin(), y.end(), zz) - y.begin());
            c = std::clamp<std::size_t>(c, 1, ny - 1) - 1;  // cell [c, c+1]
            auto sit = std::upper_bound(seg.begin(), seg.end(), c);
            const std::size_t s1 = *sit, s0 = *(sit - 1);
            std::size_t lo = c > s0 ? c - 1 : c;
            std::size_t hi = std::min(lo + 3, s1);
            if (hi - lo < 3 && hi - s0 >= 3) lo = hi - 3;
            double acc = 0.0;
            for (std::size_t a = lo; a <= hi; ++a) {
                double l = 1.0;
                for (std::size_t b = lo; b <= hi; ++b)
                    if (b != a) l *= (zz - y[b]) / (y[a] - y[b]);
                acc += l * v[a];
            }
            out[k] = acc;
        }
    };
    return solve_channel_poisson(src, y, bc, 4);
}

}  // namespace pwaves
